#include "cataplex/entwine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cataplex/errors.hpp"

namespace cataplex::entwine {

using namespace backlund;

void Lattice::validate() const {
    if (n_sites < 2) throw DomainError("lattice needs at least two sites");
    if (!(spacing > 0.0)) throw DomainError("lattice spacing must be positive");
}

void LatticePair::validate() const {
    lattice.validate();
    const auto n = static_cast<std::size_t>(lattice.n_sites);
    if (phi.size() != n || psi.size() != n) throw DomainError("field arrays must have n_sites entries");
}

LatticePair LatticePair::shifted(int k) const {
    LatticePair out = *this;
    for (int j = 0; j < lattice.n_sites; ++j) {
        out.phi[j] = phi[lattice.wrap(j + k)];
        out.psi[j] = psi[lattice.wrap(j + k)];
    }
    return out;
}

namespace {

// Site-local quantities shared by the identities.
struct Site {
    double phi, psi;
    double d_phi, d_psi;    // central differences
    double dd_phi, dd_psi;  // second differences
    double pi_phi, pi_psi;  // (1/a) dA/d phi_j, (1/a) dA/d psi_j
    double w_pp, w_qq;      // d^2 F_pot / d phi^2, d^2 F_pot / d psi^2
};

class Chain {
public:
    Chain(ModelKind model, const LatticePair& pair) : model_(model), pair_(pair) {
        pair.validate();
        a_ = pair.lattice.spacing;
    }

    [[nodiscard]] int n() const { return pair_.lattice.n_sites; }
    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double phi(int j) const { return pair_.phi[pair_.lattice.wrap(j)]; }
    [[nodiscard]] double psi(int j) const { return pair_.psi[pair_.lattice.wrap(j)]; }

    [[nodiscard]] double pi_phi(int j) const {
        return (psi(j + 1) - psi(j)) / a_ + w_phi(model_, phi(j), psi(j), pair_.z);
    }
    [[nodiscard]] double pi_psi(int j) const {
        return (phi(j - 1) - phi(j)) / a_ + w_psi(model_, phi(j), psi(j), pair_.z);
    }
    [[nodiscard]] double g(int j) const { return total_derivative_potential(model_, phi(j), psi(j), pair_.z); }

    [[nodiscard]] Site site(int j) const {
        Site s{};
        s.phi = phi(j);
        s.psi = psi(j);
        s.d_phi = (phi(j + 1) - phi(j - 1)) / (2.0 * a_);
        s.d_psi = (psi(j + 1) - psi(j - 1)) / (2.0 * a_);
        s.dd_phi = (phi(j + 1) - 2.0 * phi(j) + phi(j - 1)) / (a_ * a_);
        s.dd_psi = (psi(j + 1) - 2.0 * psi(j) + psi(j - 1)) / (a_ * a_);
        s.pi_phi = pi_phi(j);
        s.pi_psi = pi_psi(j);
        s.w_pp = w_phi_phi(model_, s.phi, s.psi, pair_.z);
        s.w_qq = w_psi_psi(model_, s.phi, s.psi, pair_.z);
        return s;
    }

    // H_f S / S at site j. The second derivative of exp(iA) gives
    // -(1/2a^2)(i A'' - A'^2) with A'' = a W_ff.
    [[nodiscard]] Complex h_phi(const Site& s) const {
        return {0.5 * s.pi_phi * s.pi_phi + 0.5 * s.d_phi * s.d_phi + potential(model_, s.phi),
                -0.5 * s.w_pp / a_};
    }
    [[nodiscard]] Complex h_psi(const Site& s) const {
        return {0.5 * s.pi_psi * s.pi_psi + 0.5 * s.d_psi * s.d_psi + potential(model_, s.psi),
                -0.5 * s.w_qq / a_};
    }

    [[nodiscard]] Complex energy(int j) const {
        const Site s = site(j);
        const double dg = (g(j + 1) - g(j - 1)) / (2.0 * a_);
        return h_phi(s) - h_psi(s) - dg;
    }

private:
    ModelKind model_;
    const LatticePair& pair_;
    double a_;
};

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw Overflow(what);
}

}  // namespace

Complex kernel_action(ModelKind model, const LatticePair& pair) {
    pair.validate();
    const Chain c(model, pair);
    double sum = 0.0;
    for (int j = 0; j < c.n(); ++j) {
        sum += c.phi(j) * (c.psi(j + 1) - c.psi(j)) + c.a() * generator_potential(model, c.phi(j), c.psi(j), pair.z);
    }
    require_finite(sum, "kernel action overflows");
    return {sum, 0.0};
}

Complex kernel(ModelKind model, const LatticePair& pair) {
    const Complex action = kernel_action(model, pair);
    return std::exp(Complex(0.0, 1.0) * action);
}

KernelGradients kernel_gradients(ModelKind model, const LatticePair& pair) {
    const Chain c(model, pair);
    KernelGradients g;
    g.d_phi.resize(c.n());
    g.d_psi.resize(c.n());
    for (int j = 0; j < c.n(); ++j) {
        g.d_phi[j] = c.a() * c.pi_phi(j);
        g.d_psi[j] = c.a() * c.pi_psi(j);
    }
    return g;
}

Complex momentum_entwine_residual(ModelKind model, const LatticePair& pair) {
    const Chain c(model, pair);
    double sum = 0.0;
    for (int j = 0; j < c.n(); ++j) {
        const Site s = c.site(j);
        sum += c.a() * (s.d_phi * s.pi_phi + s.d_psi * s.pi_psi);
    }
    return {sum, 0.0};
}

Complex energy_entwine_residual(ModelKind model, const LatticePair& pair, int site) {
    const Chain c(model, pair);
    if (site < 0 || site >= c.n()) throw DomainError("site index out of range");
    return c.energy(site);
}

double max_energy_residual(ModelKind model, const LatticePair& pair) {
    const Chain c(model, pair);
    double worst = 0.0;
    for (int j = 0; j < c.n(); ++j) worst = std::max(worst, std::abs(c.energy(j)));
    return worst;
}

Complex total_energy_residual(ModelKind model, const LatticePair& pair) {
    const Chain c(model, pair);
    Complex sum = 0.0;
    for (int j = 0; j < c.n(); ++j) sum += c.a() * c.energy(j);
    return sum;
}

Complex improved_entwine_residual(ModelKind model, const LatticePair& pair, Chirality chirality) {
    const Chain c(model, pair);
    const double s = chirality == Chirality::Plus ? 1.0 : -1.0;
    const double a = c.a();
    Complex sum = 0.0;
    for (int j = 0; j < c.n(); ++j) {
        const Site x = c.site(j);
        const double d_pi_phi = (c.pi_phi(j + 1) - c.pi_phi(j - 1)) / (2.0 * a);
        const double d_pi_psi = (c.pi_psi(j + 1) - c.pi_psi(j - 1)) / (2.0 * a);
        const Complex lhs = c.h_phi(x) - x.dd_phi + s * (x.d_phi * x.pi_phi - d_pi_phi);
        const Complex rhs = c.h_psi(x) + d_pi_psi - s * (x.d_psi * x.pi_psi + x.dd_psi);
        sum += a * (lhs - rhs);
    }
    return sum;
}

double energy_term_scale(ModelKind model, const LatticePair& pair, int site) {
    const Chain c(model, pair);
    const Site s = c.site(site);
    return 0.5 * s.pi_phi * s.pi_phi + 0.5 * s.pi_psi * s.pi_psi + 0.5 * s.d_phi * s.d_phi +
           0.5 * s.d_psi * s.d_psi + std::abs(potential(model, s.phi)) + std::abs(potential(model, s.psi)) +
           std::abs(c.g(site + 1) - c.g(site - 1)) / (2.0 * c.a()) + std::abs(s.w_pp) / c.a();
}

double free_field_limit(double w, double phi, double varphi) {
    if (!(w >= 0.0)) throw DomainError("free-field limit needs w >= 0");
    // Evaluated in 50 digits: the discrepancy is e^{-2w} below terms of size e^{|phi|+|varphi|}.
    using Big = boost::multiprecision::cpp_bin_float_50;
    const Big p(phi), q = Big(varphi) - w, z = -Big(w);
    const Big f = (exp(-z + p + q) - exp(z - p + q) - exp(z + p - q)) / 2;
    const Big limit = exp(p) * sinh(Big(varphi));
    return static_cast<double>(abs(f - limit));
}

std::uint64_t Lcg::next() {
    state = 6364136223846793005ULL * state + 1442695040888963407ULL;
    return state;
}

double Lcg::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Lcg::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

LatticePair random_pair(Lattice lattice, std::uint64_t seed, std::uint64_t index) {
    lattice.validate();
    Lcg rng{seed + index * 0x9E3779B97F4A7C15ULL};
    LatticePair p{lattice, std::vector<double>(lattice.n_sites), std::vector<double>(lattice.n_sites), 0.0};
    for (double& v : p.phi) v = rng.uniform(-1.0, 1.0);
    for (double& v : p.psi) v = rng.uniform(-1.0, 1.0);
    p.z = rng.uniform(-1.0, 1.0);
    return p;
}

LatticePair smooth_pair(Lattice lattice, double z) {
    lattice.validate();
    const double k = 2.0 * std::numbers::pi / (lattice.n_sites * lattice.spacing);
    LatticePair p{lattice, std::vector<double>(lattice.n_sites), std::vector<double>(lattice.n_sites), z};
    for (int j = 0; j < lattice.n_sites; ++j) {
        const double sigma = j * lattice.spacing;
        p.phi[j] = 0.4 * std::sin(k * sigma) + 0.2 * std::cos(2.0 * k * sigma) + 0.1;
        p.psi[j] = 0.3 * std::cos(k * sigma + 0.5) - 0.25 * std::sin(3.0 * k * sigma) - 0.2;
    }
    return p;
}

LatticePair constant_pair(Lattice lattice, double phi, double psi, double z) {
    lattice.validate();
    return {lattice, std::vector<double>(lattice.n_sites, phi), std::vector<double>(lattice.n_sites, psi), z};
}

double gradient_fd_error(ModelKind model, const LatticePair& pair, double h) {
    const KernelGradients g = kernel_gradients(model, pair);
    double worst = 0.0, scale = 0.0;
    LatticePair probe = pair;
    auto action = [&] { return kernel_action(model, probe).real(); };
    for (int j = 0; j < pair.lattice.n_sites; ++j) {
        for (int field = 0; field < 2; ++field) {
            double& v = field == 0 ? probe.phi[j] : probe.psi[j];
            const double exact = field == 0 ? g.d_phi[j] : g.d_psi[j];
            const double saved = v;
            v = saved + h;
            const double up = action();
            v = saved - h;
            const double down = action();
            v = saved;
            worst = std::max(worst, std::abs((up - down) / (2.0 * h) - exact));
            scale = std::max(scale, std::abs(exact));
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

const char* to_string(Identity identity) {
    switch (identity) {
        case Identity::Momentum: return "momentum";
        case Identity::Energy: return "energy";
        case Identity::ImprovedPlus: return "improved+";
        case Identity::ImprovedMinus: return "improved-";
    }
    return "unknown";
}

std::vector<RefinementRow> refinement_study(ModelKind model, Identity identity, Lattice base, int levels,
                                            double z) {
    base.validate();
    if (levels < 1) throw DomainError("refinement study needs at least one level");
    std::vector<RefinementRow> rows;
    Lattice lat = base;
    for (int level = 0; level < levels; ++level) {
        const LatticePair p = smooth_pair(lat, z);
        double r = 0.0;
        switch (identity) {
            case Identity::Momentum: r = std::abs(momentum_entwine_residual(model, p)); break;
            case Identity::Energy: r = max_energy_residual(model, p); break;
            case Identity::ImprovedPlus: r = std::abs(improved_entwine_residual(model, p, Chirality::Plus)); break;
            case Identity::ImprovedMinus: r = std::abs(improved_entwine_residual(model, p, Chirality::Minus)); break;
        }
        const double order = rows.empty() ? 0.0 : std::log2(rows.back().residual / r);
        rows.push_back({lat.n_sites, lat.spacing, r, order});
        lat.n_sites *= 2;
        lat.spacing /= 2.0;
    }
    return rows;
}

}  // namespace cataplex::entwine
