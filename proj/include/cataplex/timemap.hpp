#pragma once

// The complex-time map of one energy shell,
//     e^{-iEt} = K_{i sqrt E}(e^z),   t = (i/E) ln K_{i sqrt E}(e^z),
// and level sets of |K_{i sqrt E}(e^z)| in the complex z plane, along which t
// is real up to a constant.

#include <complex>
#include <optional>
#include <vector>

#include "cataplex/bessel.hpp"
#include "cataplex/liouville.hpp"

namespace cataplex::timemap {

using Complex = std::complex<double>;
using liouville::EnergyShell;

/// A point of the map. log_k = ln K on the recorded branch, i.e.
/// log_k = Log K + 2 pi i branch with Log the principal logarithm.
struct ShellTime {
    double energy;
    Complex z;
    Complex t;
    Complex log_k;
    int branch;
    bessel::Regime regime;
};

/// Branch chosen so that t is closest to branch_hint (a nearby time on the
/// same shell); principal branch without a hint. Throws BesselZero, OutsideDomain.
ShellTime t_of_z(EnergyShell shell, Complex z, std::optional<Complex> branch_hint = std::nullopt);

/// d/dz ln K_{i sqrt E}(e^z) = -w K_{nu-1}(w) / K_nu(w) - nu, w = e^z.
Complex log_k_derivative(EnergyShell shell, Complex z);

/// T = -(1/E) ln K truncated after `order` + 1 terms of
/// (1/E)(e^z + z/2 - ln sqrt(pi/2) + (1+4E)/8 e^{-z}). order in 0..3.
double euclidean_T_series(EnergyShell shell, double z, int order);

/// Coefficient of e^{-z} inside the bracket: (1 + 4E)/8.
double euclidean_T_coefficient(EnergyShell shell);

/// The first `count` real zeros of x -> K_{i sqrt E}(x), largest first,
/// returned as z = ln x.
std::vector<double> real_zeros(EnergyShell shell, int count);

enum class Termination { Closed, LeftDomain, MaxSteps };
const char* to_string(Termination reason);

struct ContourPoint {
    Complex z;
    double log_modulus;  // ln |K|
    double phase;        // arg K, continued along the contour
    int branch;          // (phase - principal arg) / 2 pi
    bessel::Regime regime;
};

struct Contour {
    double energy = 0.0;
    double step = 0.0;
    double log_level = 0.0;  // ln of the level
    double level = 0.0;      // |K| on the contour (0 if it underflows)
    bool closed = false;
    Termination reason = Termination::MaxSteps;
    std::vector<ContourPoint> points;

    [[nodiscard]] std::vector<Complex> z_values() const;
    [[nodiscard]] std::vector<int> branch_track() const;
    /// Change of branch index between the last and first point.
    [[nodiscard]] int winding() const;
};

/// True where the tracer may evaluate: |Im z| < 3 pi/2 - 0.1, |e^z| <= 1e8, and
/// either |e^z| >= 10 (series regime) or |Im z| < pi/2 - 0.05 (integral regime).
bool in_trace_domain(Complex z);

/// Predictor-corrector walk along |K| = |K(z0)| in the direction of
/// increasing arg K. The walk ends when it returns to z0 (Closed), would leave
/// the trace domain (LeftDomain) or after max_steps accepted steps.
/// Throws LeftDomain if z0 itself is outside, SaddlePoint where |d ln K/dz| < 1e-8.
Contour trace_level_contour(EnergyShell shell, Complex z0, double step, int max_steps);

enum class ContourKind { Open, Closed };
const char* to_string(ContourKind kind);

/// Closed iff first and last point coincide. Throws Degenerate below two points.
ContourKind classify_contour(const Contour& c);

}  // namespace cataplex::timemap
