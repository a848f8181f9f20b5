#include "cataplex/backlund.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cataplex/errors.hpp"
#include "cataplex/numeric.hpp"

namespace cataplex::backlund {

const char* to_string(ModelKind model) {
    switch (model) {
        case ModelKind::Liouville: return "liouville";
        case ModelKind::SinhGordon: return "sinh-gordon";
        case ModelKind::SineGordon: return "sine-gordon";
    }
    return "unknown";
}

ModelKind parse_model(std::string_view name) {
    for (ModelKind m : kAllModels) {
        if (name == to_string(m)) return m;
    }
    throw DomainError("unknown model '" + std::string(name) + "'");
}

double potential(ModelKind model, double phi) {
    switch (model) {
        case ModelKind::Liouville: return 0.5 * std::exp(2.0 * phi);
        case ModelKind::SinhGordon: return std::cosh(2.0 * phi);
        case ModelKind::SineGordon: return -std::cos(2.0 * phi);
    }
    return 0.0;
}

double potential_derivative(ModelKind model, double phi) {
    switch (model) {
        case ModelKind::Liouville: return std::exp(2.0 * phi);
        case ModelKind::SinhGordon: return 2.0 * std::sinh(2.0 * phi);
        case ModelKind::SineGordon: return 2.0 * std::sin(2.0 * phi);
    }
    return 0.0;
}

// Liouville pieces: a = e^{-z+phi+psi}, b = e^{z-phi+psi}, c = e^{z+phi-psi}.
// sinh/sine-Gordon pieces: p = e^{-z} f(phi+psi), m = e^{z} f(phi-psi).

double generator_potential(ModelKind model, double phi, double psi, double z) {
    switch (model) {
        case ModelKind::Liouville:
            return 0.5 * (std::exp(-z + phi + psi) - std::exp(z - phi + psi) - std::exp(z + phi - psi));
        case ModelKind::SinhGordon:
            return std::exp(-z) * std::cosh(phi + psi) - std::exp(z) * std::cosh(phi - psi);
        case ModelKind::SineGordon:
            return -std::exp(-z) * std::cos(phi + psi) + std::exp(z) * std::cos(phi - psi);
    }
    return 0.0;
}

double w_phi(ModelKind model, double phi, double psi, double z) {
    switch (model) {
        case ModelKind::Liouville:
            return 0.5 * (std::exp(-z + phi + psi) + std::exp(z - phi + psi) - std::exp(z + phi - psi));
        case ModelKind::SinhGordon:
            return std::exp(-z) * std::sinh(phi + psi) - std::exp(z) * std::sinh(phi - psi);
        case ModelKind::SineGordon:
            return std::exp(-z) * std::sin(phi + psi) - std::exp(z) * std::sin(phi - psi);
    }
    return 0.0;
}

double w_psi(ModelKind model, double phi, double psi, double z) {
    switch (model) {
        case ModelKind::Liouville:
            return 0.5 * (std::exp(-z + phi + psi) - std::exp(z - phi + psi) + std::exp(z + phi - psi));
        case ModelKind::SinhGordon:
            return std::exp(-z) * std::sinh(phi + psi) + std::exp(z) * std::sinh(phi - psi);
        case ModelKind::SineGordon:
            return std::exp(-z) * std::sin(phi + psi) + std::exp(z) * std::sin(phi - psi);
    }
    return 0.0;
}

// Second derivatives reproduce F_pot and G up to the sign the trigonometric
// functions pick up.
double w_phi_phi(ModelKind model, double phi, double psi, double z) {
    const double f = generator_potential(model, phi, psi, z);
    return model == ModelKind::SineGordon ? -f : f;
}

double w_psi_psi(ModelKind model, double phi, double psi, double z) {
    return w_phi_phi(model, phi, psi, z);
}

double w_phi_psi(ModelKind model, double phi, double psi, double z) {
    const double g = total_derivative_potential(model, phi, psi, z);
    return model == ModelKind::SineGordon ? -g : g;
}

double total_derivative_potential(ModelKind model, double phi, double psi, double z) {
    switch (model) {
        case ModelKind::Liouville:
            return 0.5 * (std::exp(-z + phi + psi) + std::exp(z - phi + psi) + std::exp(z + phi - psi));
        case ModelKind::SinhGordon:
            return std::exp(-z) * std::cosh(phi + psi) + std::exp(z) * std::cosh(phi - psi);
        case ModelKind::SineGordon:
            return -std::exp(-z) * std::cos(phi + psi) - std::exp(z) * std::cos(phi - psi);
    }
    return 0.0;
}

double generator_density(ModelKind model, double phi, double psi, double dpsi, double z) {
    return phi * dpsi + generator_potential(model, phi, psi, z);
}

void FieldSlice::validate() const {
    const std::size_t n = sigma.size();
    if (n < 3) throw DomainError("field slice needs at least three points");
    if (phi.size() != n || pi.size() != n) throw DomainError("field slice columns differ in length");
    const double h = sigma[1] - sigma[0];
    if (!(h > 0.0)) throw DomainError("field slice grid must increase");
    const double slack = 1e-9 * h + 8.0 * 2.2e-16 * std::max(std::abs(sigma.front()), std::abs(sigma.back()));
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((sigma[i] - sigma[i - 1]) - h) > slack) throw DomainError("field slice grid is not uniform");
    }
}

FieldSlice FieldSlice::vacuum(double lo, double hi, std::size_t n) {
    if (n < 3 || !(hi > lo)) throw DomainError("vacuum slice needs n >= 3 and hi > lo");
    FieldSlice s;
    s.sigma.resize(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) s.sigma[i] = lo + h * static_cast<double>(i);
    s.sigma.back() = hi;
    s.phi.assign(n, 0.0);
    s.pi.assign(n, 0.0);
    return s;
}

namespace {

// Catmull-Rom cubic through the samples; linear ghost points at the ends.
double catmull_rom(const std::vector<double>& v, double lo, double h, double s) {
    const std::size_t n = v.size();
    const double u = std::clamp((s - lo) / h, 0.0, static_cast<double>(n - 1));
    std::size_t i = std::min(static_cast<std::size_t>(u), n - 2);
    const double t = u - static_cast<double>(i);
    const double p1 = v[i], p2 = v[i + 1];
    const double p0 = i > 0 ? v[i - 1] : 2.0 * p1 - p2;
    const double p3 = i + 2 < n ? v[i + 2] : 2.0 * p2 - p1;
    return p1 + 0.5 * t * ((p2 - p0) + t * ((2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) + t * (3.0 * (p1 - p2) + p3 - p0)));
}

double derivative_at(const std::vector<double>& v, std::size_t i, double h) {
    const std::size_t n = v.size();
    if (i == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    if (i == n - 1) return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return (v[i + 1] - v[i - 1]) / (2.0 * h);
}

}  // namespace

FieldSlice solve_backlund(ModelKind model, const FieldSlice& seed, const BacklundParams& params) {
    seed.validate();
    const std::size_t n = seed.size();
    const double lo = seed.sigma.front();
    const double h = seed.spacing();
    const double z = params.z;

    auto rhs = [&](double s, std::span<const double> y) {
        const double phi = catmull_rom(seed.phi, lo, h, s);
        const double pi = catmull_rom(seed.pi, lo, h, s);
        return std::vector<double>{pi - w_phi(model, phi, y[0], z)};
    };
    numeric::OdeOptions opts;
    opts.stops.assign(seed.sigma.begin() + 1, seed.sigma.end() - 1);
    opts.max_step = h;
    const numeric::Tolerance tol{1e-13, 1e-13, 1};
    const auto path = numeric::solve_ivp(rhs, {params.psi_left}, lo, seed.sigma.back(), tol, opts);

    FieldSlice out;
    out.sigma = seed.sigma;
    out.phi.reserve(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < path.size() && k < n; ++i) {
        if (path.abscissae[i] == seed.sigma[k]) {
            out.phi.push_back(path.states[i][0]);
            ++k;
        }
    }
    if (k != n) throw NonConvergence("Backlund integration missed grid points");

    out.pi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.pi[i] = -derivative_at(seed.phi, i, h) + w_psi(model, seed.phi[i], out.phi[i], z);
    }
    return out;
}

double eom_residual(ModelKind model, const FieldSlice& slice) {
    slice.validate();
    const double h = slice.spacing();
    const auto& f = slice.phi;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const double second = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        worst = std::max(worst, std::abs(second - potential_derivative(model, f[i])));
    }
    return worst;
}

double contract_to_liouville(double w, const ContractionSample& s) {
    if (!(w >= 0.0)) throw DomainError("contraction needs w >= 0");
    // The difference cancels to a term of relative size e^{-4w}; 50 digits keep
    // it resolved well past w = 5.
    using Big = boost::multiprecision::cpp_bin_float_50;
    const Big phi = Big(s.phi) + w, psi = Big(s.psi) + w, z = Big(s.z) + w;
    const Big sinh_gordon = exp(-z) * cosh(phi + psi) - exp(z) * cosh(phi - psi);
    if (!boost::multiprecision::isfinite(sinh_gordon) || abs(sinh_gordon) > Big(1e300)) {
        throw Overflow("shifted sinh-Gordon generator overflows");
    }
    const Big p(s.phi), q(s.psi), y(s.z);
    const Big liouville = (exp(-y + p + q) - exp(y - p + q) - exp(y + p - q)) / 2;
    return static_cast<double>(abs(exp(Big(-w)) * sinh_gordon - liouville));
}

double contraction_remainder(double w, const ContractionSample& s) {
    return 0.5 * std::exp(-s.phi - s.psi - s.z - 4.0 * w);
}

}  // namespace cataplex::backlund
