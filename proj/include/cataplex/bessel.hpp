#pragma once

// Modified Bessel functions K of imaginary, real and complex order, and I of
// real order.
//
// K is evaluated through the Heine-Schlafli representation
//     K_nu(w) = 1/2 * int exp(-w cosh X + nu X) dX        (Re w > 0)
// or, for |w| >= kRegimeSwitchRadius, through the large-argument series
//     K_nu(w) ~ sqrt(pi/(2w)) e^{-w} sum_k a_k(nu) w^{-k},
//     a_k(nu) = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (k! 8^k),
// which holds for |arg w| < 3 pi / 2.

#include <complex>

#include "cataplex/numeric.hpp"

namespace cataplex::bessel {

using Complex = std::complex<double>;

inline constexpr double kRegimeSwitchRadius = 10.0;

/// Order nu = i mu of a Liouville shell; K is even in the order so the sign
/// of mu is folded away on construction.
class ImaginaryOrder {
public:
    explicit ImaginaryOrder(double mu);
    [[nodiscard]] double mu() const { return mu_; }

private:
    double mu_;
};

/// Number of correction terms kept after the leading factor.
struct SeriesOrder {
    int nterms = 0;
};

enum class Regime { Integral, Asymptotic };

const char* to_string(Regime regime);

/// ln K together with how it was obtained. The imaginary part is continuous in
/// the argument within one regime but is not reduced to (-pi, pi].
struct LogK {
    Complex value;
    Regime regime = Regime::Integral;
    int nterms = 0;  // series terms used in the asymptotic regime
};

/// K_{i mu}(x) = int_0^inf e^{-x cosh X} cos(mu X) dX for x > 0.
/// Throws DomainError for x <= 0 and NonConvergence from the quadrature.
double k_imag(ImaginaryOrder order, double x);
double k_imag(ImaginaryOrder order, double x, const numeric::Tolerance& tol);

/// K_nu(x) of real order by the same integral (always the integral regime).
double k_real(double nu, double x);

/// K_nu(w) for complex order and argument, principal branch of w.
/// Integral regime for |w| < 10 with Re w > 0, series regime for |w| >= 10.
/// Throws OutsideDomain when neither applies.
Complex k_complex(Complex nu, Complex w);

/// ln K_nu(e^z). The argument of w = e^z is Im z, so the series regime covers
/// the whole sector |Im z| < 3 pi / 2 for Re z >= ln 10; below that radius the
/// integral regime needs |Im z| < pi / 2.
LogK log_k_exp(Complex nu, Complex z);

/// The integral representation alone (requires Re w > 0).
Complex k_integral(Complex nu, Complex w);

/// Truncated large-argument series with exactly order.nterms corrections.
/// Throws DomainError for w == 0 or nterms < 0.
Complex k_asymptotic(Complex nu, Complex w, SeriesOrder order);

/// Series in terms of z = ln w, valid for |Im z| < 3 pi / 2 (DomainError
/// outside). Returns ln of the truncated sum.
Complex log_k_asymptotic_exp(Complex nu, Complex z, SeriesOrder order);

/// Series truncated before the first term that stops decreasing.
LogK log_k_asymptotic_auto(Complex nu, Complex z);

/// I_nu(x), nu >= 0, x >= 0, from the ascending series
/// sum_k (x/2)^{nu+2k} / (k! Gamma(nu+k+1)). Throws Overflow past the double range.
double i_real(double nu, double x);

/// e^{-x} I_nu(x); switches to the large-argument series for big x so it stays
/// finite for any x.
double i_real_scaled(double nu, double x);

}  // namespace cataplex::bessel
