#pragma once

// Shared numerical engine: double-exponential quadrature on the real line,
// the half line and finite intervals, and an embedded Runge-Kutta 5(4)
// integrator for non-stiff initial value problems.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace cataplex::numeric {

using Complex = std::complex<double>;

struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_refinements = 12;

    /// Throws DomainError unless all fields are positive.
    void validate() const;
};

struct QuadratureResult {
    Complex value;
    double error_estimate = 0.0;
    int evaluations = 0;
};

using Integrand = std::function<Complex(double)>;

/// Integral over (-inf, inf) with the substitution X = sinh(t).
///
/// The integrand must be continuous and decay at least exponentially in |X|.
/// The trapezoidal sum in t is refined by halving the step until two
/// successive levels agree to max(abs_tol, rel_tol*|value|); nodes where the
/// transformed integrand is below abs_tol*1e-2 are dropped from the ends.
/// Throws NonConvergence when max_refinements halvings do not suffice.
QuadratureResult integrate_real_line(const Integrand& f, const Tolerance& tol = {});

/// Integral over (0, inf) with the exp-sinh style substitution
/// E = exp(t - exp(-t)). Requires decay at least like exp(-c*sqrt(E)).
QuadratureResult integrate_half_line(const Integrand& f, const Tolerance& tol = {});

/// Integral over [a, b] with the tanh-sinh substitution. Tolerates integrable
/// endpoint singularities.
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const Tolerance& tol = {});

struct OdePath {
    std::vector<double> abscissae;
    std::vector<std::vector<double>> states;

    [[nodiscard]] std::size_t size() const { return abscissae.size(); }
    [[nodiscard]] const std::vector<double>& back() const { return states.back(); }
};

using OdeRhs = std::function<std::vector<double>(double, std::span<const double>)>;

struct OdeOptions {
    /// Abscissae the integrator must land on exactly (sorted, inside the range).
    std::vector<double> stops;
    /// Upper bound on the step length; 0 means unbounded.
    double max_step = 0.0;
    long max_steps = 10'000'000;
};

/// Dormand-Prince 5(4) with PI-free standard step control. Integrates from
/// range_lo to range_hi (range_hi > range_lo) and returns every accepted step.
/// Throws StepUnderflow when the step collapses below the floating-point
/// resolution of the abscissa or the state stops being finite.
OdePath solve_ivp(const OdeRhs& rhs, std::vector<double> y0, double range_lo,
                  double range_hi, const Tolerance& tol = {}, const OdeOptions& opts = {});

}  // namespace cataplex::numeric
