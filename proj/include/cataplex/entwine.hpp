#pragma once

// Lattice transcription of the field-theory kernel
//     S = exp(i A),   A = sum_j [ phi_j (psi_{j+1} - psi_j) + a F_pot(phi_j, psi_j, z) ],
// on a periodic chain, with functional derivatives d/d phi(rho) read as
// (1/a) d/d phi_j. The entwining identities are checked on S itself: acting
// with -i (1/a) d/d phi_j on S multiplies it by Pi_phi_j = (1/a) dA/d phi_j.

#include <complex>
#include <cstdint>
#include <vector>

#include "cataplex/backlund.hpp"

namespace cataplex::entwine {

using Complex = std::complex<double>;
using backlund::ModelKind;

struct Lattice {
    int n_sites = 0;
    double spacing = 0.0;

    /// Throws DomainError unless n_sites >= 2 and spacing > 0.
    void validate() const;
    /// Periodic site index.
    [[nodiscard]] int wrap(int j) const { return ((j % n_sites) + n_sites) % n_sites; }
};

struct LatticePair {
    Lattice lattice;
    std::vector<double> phi;
    std::vector<double> psi;
    double z = 0.0;

    void validate() const;
    /// Both fields shifted by k sites: phi'_j = phi_{j+k}.
    [[nodiscard]] LatticePair shifted(int k) const;
};

/// A (real for real fields). Throws Overflow if a term is not finite.
Complex kernel_action(ModelKind model, const LatticePair& pair);
/// exp(i A).
Complex kernel(ModelKind model, const LatticePair& pair);

/// Raw partial derivatives dA/d phi_j and dA/d psi_j:
///     dA/d phi_j = (psi_{j+1} - psi_j) + a W_phi_j,
///     dA/d psi_j = (phi_{j-1} - phi_j) + a W_psi_j.
struct KernelGradients {
    std::vector<double> d_phi;
    std::vector<double> d_psi;
};
KernelGradients kernel_gradients(ModelKind model, const LatticePair& pair);

/// (P_phi + P_psi) S / S with P = sum_j a (D f)_j (-i/a) d/d f_j and D the
/// central difference. Vanishes as a^2 for smooth fields.
Complex momentum_entwine_residual(ModelKind model, const LatticePair& pair);

/// Site-j residual of (H_phi - H_psi) S / S - (G_{j+1} - G_{j-1}) / (2a), where
/// H_f = -1/2 a^{-2} d^2/d f_j^2 + 1/2 (D f)_j^2 + V(f_j) and G is the
/// total-derivative potential of the model.
Complex energy_entwine_residual(ModelKind model, const LatticePair& pair, int site);
/// Largest |energy_entwine_residual| over the sites.
double max_energy_residual(ModelKind model, const LatticePair& pair);

enum class Chirality { Plus = 1, Minus = -1 };

/// Summed over sites (times a): the improved densities
///     H_phi - D^2 phi + s (P_phi - D Pi_phi)   against   H_psi + D Pi_psi - s (P_psi + D^2 psi).
Complex improved_entwine_residual(ModelKind model, const LatticePair& pair, Chirality chirality);
/// sum_j a energy_entwine_residual(j).
Complex total_energy_residual(ModelKind model, const LatticePair& pair);

/// Size of the terms that cancel in the energy identity at one site; the
/// identity is exact in real arithmetic, so residuals are judged against
/// a few ulps of this.
double energy_term_scale(ModelKind model, const LatticePair& pair, int site);

/// |F_pot(phi, varphi - w, -w) - e^phi sinh varphi| for the Liouville row.
/// The exact value is 1/2 e^{varphi - phi - 2w}. Throws DomainError for w < 0.
double free_field_limit(double w, double phi, double varphi);

/// 64-bit LCG: x <- 6364136223846793005 x + 1442695040888963407,
/// u = (x >> 11) 2^-53, and uniform(lo, hi) = lo + (hi - lo) u.
struct Lcg {
    std::uint64_t state;
    std::uint64_t next();
    double unit();
    double uniform(double lo, double hi);
};

/// Configuration `index` of a seeded family: the generator starts at
/// seed + index * 0x9E3779B97F4A7C15, then draws phi_0..phi_{n-1},
/// psi_0..psi_{n-1}, z, each uniform on [-1, 1].
LatticePair random_pair(Lattice lattice, std::uint64_t seed, std::uint64_t index);

/// Smooth periodic fields on a chain of physical length L = n a, k = 2 pi / L:
///     phi = 0.4 sin(k sigma) + 0.2 cos(2 k sigma) + 0.1,
///     psi = 0.3 cos(k sigma + 0.5) - 0.25 sin(3 k sigma) - 0.2.
/// (With a single mode the momentum sum cancels to rounding at every a.)
LatticePair smooth_pair(Lattice lattice, double z);
/// Constant fields phi_j = phi, psi_j = psi.
LatticePair constant_pair(Lattice lattice, double phi, double psi, double z);

/// max_j |grad_j - fd_j| / max_j |grad_j| with central differences of A of step h.
double gradient_fd_error(ModelKind model, const LatticePair& pair, double h);

enum class Identity { Momentum, Energy, ImprovedPlus, ImprovedMinus };
const char* to_string(Identity identity);

struct RefinementRow {
    int n_sites;
    double spacing;
    double residual;
    double order;  // log2(previous residual / residual); 0 on the first row
};

/// smooth_pair fields at fixed physical length, n_sites doubled `levels` - 1
/// times starting from base. Energy uses the max-site residual, the others
/// the global one.
std::vector<RefinementRow> refinement_study(ModelKind model, Identity identity, Lattice base,
                                            int levels, double z = 0.2);

}  // namespace cataplex::entwine
