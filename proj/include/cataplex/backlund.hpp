#pragma once

// Classical fixed-time Backlund maps for the three exponential models.
// Each model has a generator density F = phi dpsi + F_pot(phi, psi, z); its
// first derivatives give the first-order relations
//     pi_phi = d_sigma psi + W_phi,    pi_psi = -d_sigma phi + W_psi.

#include <string>
#include <string_view>
#include <vector>

namespace cataplex::backlund {

enum class ModelKind { Liouville, SinhGordon, SineGordon };

const char* to_string(ModelKind model);
/// Accepts "liouville", "sinh-gordon", "sine-gordon". Throws DomainError.
ModelKind parse_model(std::string_view name);

inline constexpr ModelKind kAllModels[] = {ModelKind::Liouville, ModelKind::SinhGordon,
                                           ModelKind::SineGordon};

/// V(phi): 1/2 e^{2 phi}, cosh 2phi, -cos 2phi.
double potential(ModelKind model, double phi);
double potential_derivative(ModelKind model, double phi);

double generator_potential(ModelKind model, double phi, double psi, double z);
double w_phi(ModelKind model, double phi, double psi, double z);
double w_psi(ModelKind model, double phi, double psi, double z);

/// Second derivatives of F_pot. d2/dphi2 = d2/dpsi2 for all three models.
double w_phi_phi(ModelKind model, double phi, double psi, double z);
double w_psi_psi(ModelKind model, double phi, double psi, double z);
double w_phi_psi(ModelKind model, double phi, double psi, double z);

/// The function whose sigma-derivative is left over when energy densities are
/// entwined: dG/dphi = W_psi, dG/dpsi = W_phi.
double total_derivative_potential(ModelKind model, double phi, double psi, double z);

/// phi * dpsi + F_pot(phi, psi, z).
double generator_density(ModelKind model, double phi, double psi, double dpsi, double z);

/// Fixed-time data on a uniform grid. `pi` is the momentum conjugate to `phi`.
struct FieldSlice {
    std::vector<double> sigma;
    std::vector<double> phi;
    std::vector<double> pi;

    /// Throws DomainError unless lengths agree, n >= 3 and spacing is uniform.
    void validate() const;
    [[nodiscard]] double spacing() const { return sigma[1] - sigma[0]; }
    [[nodiscard]] std::size_t size() const { return sigma.size(); }

    /// n points from lo to hi inclusive, phi = pi = 0.
    static FieldSlice vacuum(double lo, double hi, std::size_t n);
};

struct BacklundParams {
    double z = 0.0;
    double psi_left = 0.0;  // psi at sigma.front()
};

/// Integrates d_sigma psi = pi_phi - W_phi(phi, psi, z) across the grid and
/// returns (psi, pi_psi). The seed is interpolated between grid points with
/// Catmull-Rom cubics; pi_psi uses central differences of phi (one-sided at
/// the ends). Throws StepUnderflow if psi blows up.
FieldSlice solve_backlund(ModelKind model, const FieldSlice& seed, const BacklundParams& params);

/// Sup over interior points of |psi'' - V'(psi)| with the 3-point stencil.
/// Meaningful for static slices only.
double eom_residual(ModelKind model, const FieldSlice& slice);

struct ContractionSample {
    double phi = 0.0;
    double psi = 0.0;
    double z = 0.0;
};

/// |e^{-w} F_sinh(phi+w, psi+w, z+w) - F_Liouville(phi, psi, z)|.
/// Throws DomainError for w < 0, Overflow if the shifted generator overflows.
double contract_to_liouville(double w, const ContractionSample& sample);

/// The exact remainder of that difference: 1/2 e^{-phi-psi-z-4w}.
double contraction_remainder(double w, const ContractionSample& sample);

}  // namespace cataplex::backlund
