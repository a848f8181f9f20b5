#pragma once

// Liouville quantum mechanics, H = p^2 + e^{2x}.
//
//   F(x,y,z) = 1/2 (e^{x+y-z} + e^{x-y+z} + e^{-x+y+z}),   S = 1/2 e^{-F}
//   psi_E(x) = (1/pi) sqrt(sinh(pi sqrt E)) K_{i sqrt E}(e^x)
//
// Macdonald's identity K(e^x) K(e^y) = int dz S K(e^z) and its spectral form
// S = int dE K_{i sqrt E}(e^z) psi_E(x) psi_E(y) are checked by quadrature.

#include <complex>
#include <optional>

#include "cataplex/bessel.hpp"
#include "cataplex/numeric.hpp"

namespace cataplex::liouville {

using Complex = std::complex<double>;

class EnergyShell {
public:
    explicit EnergyShell(double energy);  // DomainError unless energy > 0
    [[nodiscard]] double energy() const { return energy_; }
    [[nodiscard]] double mu() const;  // sqrt(E)

private:
    double energy_;
};

struct KernelPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// The symmetric exponential of exponentials. Exactly symmetric under x <-> y.
double macdonald_F(const KernelPoint& p);
Complex macdonald_F(Complex x, Complex y, Complex z);

struct Propagator {
    double F;
    double S;
};
Propagator propagator_closed_form(const KernelPoint& p);

double eigenfunction(EnergyShell shell, double x);

/// |(-d^2/dx^2 + e^{2x}) psi_E - E psi_E| by a three-point stencil of step h.
double schrodinger_residual(EnergyShell shell, double x, double h);

struct IdentityCheck {
    double lhs;
    double rhs;
    double residual;        // |lhs - rhs|
    double error_estimate;  // of the quadrature for rhs
    bool slow_decay = false;
};

IdentityCheck verify_macdonald(double x, double y, bessel::ImaginaryOrder mu);

/// theta(y-x) I(e^x) K(e^y) + theta(x-y) I(e^y) K(e^x) against
/// int dz S I(e^z), real order nu >= 0, theta(0) = 1/2. slow_decay is set on
/// the diagonal, where the integrand only falls off like e^{-z/2}.
IdentityCheck verify_sister(double x, double y, double nu);

struct SpectralOptions {
    double tail_tol = 1e-11;
    std::optional<double> e_max;  // overrides the tail-bound choice
};

struct SpectralResult {
    double value;
    double e_max;
    double tail_bound;  // bound on the dropped part int_{E_max}^inf
    double error_estimate;
};

/// Upper bound for the tail of the spectral integral beyond sqrt(E) = m:
/// (4/pi) m^{-1/2} e^{-pi m / 2}.
double spectral_tail_bound(double m);

SpectralResult spectral_propagator(const KernelPoint& p, const SpectralOptions& opts = {});

/// Gaussian energy profile amplitude * exp(-((E - center)/width)^2).
/// Construction enforces that the mass below E = 0 is under 1e-12 of the total.
class WavePacket {
public:
    WavePacket(double center, double width, double amplitude = 1.0);
    [[nodiscard]] double operator()(double energy) const;
    [[nodiscard]] double center() const { return center_; }
    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] double amplitude() const { return amplitude_; }
    [[nodiscard]] double support_lo() const;
    [[nodiscard]] double support_hi() const;
    /// Scale of mu = sqrt(E) over which the profile varies.
    [[nodiscard]] double mu_width() const;

private:
    double center_;
    double width_;
    double amplitude_;
};

struct SmearedPair {
    double lhs;    // int dx Psi_g Psi_h
    double rhs;    // int dE g h
    double scale;  // sqrt(int g^2 * int h^2), for a relative comparison
};

SmearedPair smeared_orthonormality(const WavePacket& g, const WavePacket& h);

/// Gaussian test function exp(-((y - center)/width)^2) (times amplitude).
struct TestFunction {
    double center = 0.0;
    double width = 0.5;
    double amplitude = 1.0;
    [[nodiscard]] double operator()(double y) const;
};

struct CompletenessOptions {
    double mu_max = 14.0;
};

/// int dE psi_E(x) int dy f(y) psi_E(y), the E integral cut at mu_max^2.
double smeared_completeness(const TestFunction& f, double x, const CompletenessOptions& opts = {});

enum class EntwineVariable { X, Y };

/// Central-difference value of (-d_v^2 + e^{2v}) S - (-d_z^2 + e^{2z}) S with
/// v = x or y. Zero analytically.
double qm_entwine_check(const KernelPoint& p, double h, EntwineVariable v = EntwineVariable::X);

struct FreeParticleLimit {
    double F_limit;  // F(x, offset, offset - X)
    double exact;    // e^x cosh X
};

/// The difference is 1/2 e^{-x + 2 offset - X}.
FreeParticleLimit free_particle_limit(double x, double big_x, double offset);

}  // namespace cataplex::liouville
