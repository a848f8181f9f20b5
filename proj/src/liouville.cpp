#include "cataplex/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "cataplex/errors.hpp"

namespace cataplex::liouville {

using bessel::ImaginaryOrder;
using numeric::Tolerance;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogUnderflow = -745.0;

double checked(double value, const char* what) {
    if (!std::isfinite(value)) throw Overflow(what);
    return value;
}

// psi for mu = sqrt(E) >= 0; mu = 0 gives 0.
double psi_mu(double mu, double x) {
    return std::sqrt(std::sinh(kPi * mu)) / kPi * bessel::k_imag(ImaginaryOrder(mu), std::exp(x));
}

// 1/2 e^{-F} without forming F when it would overflow.
double half_exp_minus_F(double x, double y, double z) {
    const double F = 0.5 * (std::exp(x + y - z) + (std::exp(x - y + z) + std::exp(-x + y + z)));
    if (!(F < -kLogUnderflow)) return 0.0;
    return 0.5 * std::exp(-F);
}

}  // namespace

EnergyShell::EnergyShell(double energy) : energy_(energy) {
    if (!(energy > 0.0) || !std::isfinite(energy)) {
        throw DomainError("energy shell requires 0 < E < inf");
    }
}

double EnergyShell::mu() const { return std::sqrt(energy_); }

double macdonald_F(const KernelPoint& p) {
    // Grouped so that swapping x and y swaps the last two terms bit for bit.
    const double F = 0.5 * (std::exp(p.x + p.y - p.z) +
                            (std::exp(p.x - p.y + p.z) + std::exp(-p.x + p.y + p.z)));
    return checked(F, "macdonald_F overflows");
}

Complex macdonald_F(Complex x, Complex y, Complex z) {
    const Complex F = 0.5 * (std::exp(x + y - z) + (std::exp(x - y + z) + std::exp(-x + y + z)));
    if (!std::isfinite(F.real()) || !std::isfinite(F.imag())) throw Overflow("macdonald_F overflows");
    return F;
}

Propagator propagator_closed_form(const KernelPoint& p) {
    const double F = macdonald_F(p);
    return {F, 0.5 * std::exp(-F)};
}

double eigenfunction(EnergyShell shell, double x) { return psi_mu(shell.mu(), x); }

double schrodinger_residual(EnergyShell shell, double x, double h) {
    if (!(h > 0.0)) throw DomainError("step must be positive");
    const double mu = shell.mu();
    const double c = psi_mu(mu, x);
    const double d2 = (psi_mu(mu, x + h) - 2.0 * c + psi_mu(mu, x - h)) / (h * h);
    return std::abs(-d2 + std::exp(2.0 * x) * c - shell.energy() * c);
}

IdentityCheck verify_macdonald(double x, double y, ImaginaryOrder mu) {
    const double lhs = bessel::k_imag(mu, std::exp(x)) * bessel::k_imag(mu, std::exp(y));
    auto integrand = [x, y, mu](double z) -> Complex {
        const double s = half_exp_minus_F(x, y, z);
        if (s == 0.0) return 0.0;
        return s * bessel::k_imag(mu, std::exp(z));
    };
    const auto r = numeric::integrate_real_line(integrand, Tolerance{1e-12, 1e-11, 14});
    const double rhs = r.value.real();
    return {lhs, rhs, std::abs(lhs - rhs), r.error_estimate};
}

IdentityCheck verify_sister(double x, double y, double nu) {
    if (!(nu >= 0.0)) throw DomainError("sister identity is restricted to real nu >= 0");
    double lhs;
    if (x < y) {
        lhs = bessel::i_real(nu, std::exp(x)) * bessel::k_real(nu, std::exp(y));
    } else if (x > y) {
        lhs = bessel::i_real(nu, std::exp(y)) * bessel::k_real(nu, std::exp(x));
    } else {
        lhs = bessel::i_real(nu, std::exp(x)) * bessel::k_real(nu, std::exp(x));
    }
    // S I(e^z) with the e^{e^z} growth of I absorbed into e^{-F}.
    const double sh = std::sinh(0.5 * (x - y));
    const double gap = 2.0 * sh * sh;
    auto integrand = [x, y, nu, gap](double z) -> Complex {
        const double w = std::exp(z);
        const double expo = -0.5 * std::exp(x + y - z) - w * gap;
        if (!(expo > kLogUnderflow)) return 0.0;
        return 0.5 * std::exp(expo) * bessel::i_real_scaled(nu, w);
    };
    const auto r = numeric::integrate_real_line(integrand, Tolerance{1e-12, 1e-11, 14});
    const double rhs = r.value.real();
    return {lhs, rhs, std::abs(lhs - rhs), r.error_estimate, x == y};
}

double spectral_tail_bound(double m) {
    if (!(m > 0.0)) throw DomainError("tail bound needs m > 0");
    return 4.0 / kPi / std::sqrt(m) * std::exp(-0.5 * kPi * m);
}

SpectralResult spectral_propagator(const KernelPoint& p, const SpectralOptions& opts) {
    double m;
    if (opts.e_max) {
        if (!(*opts.e_max > 0.0)) throw DomainError("e_max must be positive");
        m = std::sqrt(*opts.e_max);
    } else {
        if (!(opts.tail_tol > 0.0)) throw DomainError("tail_tol must be positive");
        m = 1.0;
        while (spectral_tail_bound(m) > opts.tail_tol) m += 0.25;
    }
    const double wx = std::exp(p.x), wy = std::exp(p.y), wz = std::exp(p.z);
    // dE = 2 mu dmu; psi_E(x) psi_E(y) = sinh(pi mu)/pi^2 K(e^x) K(e^y).
    auto integrand = [wx, wy, wz](double mu) -> Complex {
        const ImaginaryOrder order(mu);
        const double kk = bessel::k_imag(order, wx) * bessel::k_imag(order, wy) *
                          bessel::k_imag(order, wz);
        return 2.0 * mu * std::sinh(kPi * mu) / (kPi * kPi) * kk;
    };
    const auto r = numeric::integrate_interval(integrand, 0.0, m, Tolerance{1e-13, 1e-11, 14});
    return {r.value.real(), m * m, spectral_tail_bound(m), r.error_estimate};
}

WavePacket::WavePacket(double center, double width, double amplitude)
    : center_(center), width_(width), amplitude_(amplitude) {
    if (!(width > 0.0) || !(center > 0.0) || !std::isfinite(amplitude)) {
        throw DomainError("wave packet needs center > 0, width > 0, finite amplitude");
    }
    // Fraction of the Gaussian mass below E = 0.
    if (0.5 * std::erfc(center / width) >= 1e-12) {
        throw DomainError("wave packet has non-negligible mass below E = 0");
    }
}

double WavePacket::operator()(double energy) const {
    const double u = (energy - center_) / width_;
    return amplitude_ * std::exp(-u * u);
}

double WavePacket::support_lo() const { return std::max(0.0, center_ - 8.0 * width_); }
double WavePacket::support_hi() const { return center_ + 8.0 * width_; }
double WavePacket::mu_width() const { return width_ / (2.0 * std::sqrt(center_)); }

namespace {

// Psi_g(x) = int dE g(E) psi_E(x), rewritten with the cosine transform of K as
//   Psi_g(x) = int dX 1/2 e^{-e^x cosh X} G(X),
//   G(X)     = (1/pi) int dE g(E) sqrt(sinh(pi sqrt E)) cos(sqrt(E) X),
// so one E integral per X node serves every x.
class PacketField {
public:
    explicit PacketField(const WavePacket& g) : g_(g) {}

    double G(double big_x) {
        if (auto it = memo_.find(big_x); it != memo_.end()) return it->second;
        auto integrand = [this, big_x](double e) -> Complex {
            const double mu = std::sqrt(e);
            return g_(e) * std::sqrt(std::sinh(kPi * mu)) * std::cos(mu * big_x);
        };
        const double value =
            numeric::integrate_interval(integrand, g_.support_lo(), g_.support_hi(),
                                        Tolerance{1e-12, 1e-10, 14})
                .value.real() /
            kPi;
        memo_.emplace(big_x, value);
        return value;
    }

    double Psi(double x) {
        const double w = std::exp(x);
        auto integrand = [this, w](double big_x) -> Complex {
            const double expo = -w * std::cosh(big_x);
            if (!(expo > kLogUnderflow)) return 0.0;
            return 0.5 * std::exp(expo) * G(big_x);
        };
        return numeric::integrate_real_line(integrand, Tolerance{1e-13, 1e-11, 14}).value.real();
    }

private:
    const WavePacket& g_;
    std::unordered_map<double, double> memo_;
};

bool same_packet(const WavePacket& a, const WavePacket& b) {
    return a.center() == b.center() && a.width() == b.width() && a.amplitude() == b.amplitude();
}

}  // namespace

SmearedPair smeared_orthonormality(const WavePacket& g, const WavePacket& h) {
    // Psi decays like exp(-(s x)^2/4) beyond the turning point for a profile
    // of width s in mu; 12/s leaves about e^{-36}.
    const double s = std::min(g.mu_width(), h.mu_width());
    const double e_hi = std::max(g.support_hi(), h.support_hi());
    const double x_lo = -(12.0 / s + 10.0);
    const double x_hi = std::log(2.0 * std::sqrt(e_hi)) + 4.0;

    PacketField fg(g);
    PacketField fh(h);
    const bool same = same_packet(g, h);
    auto overlap = [&](double x) -> Complex {
        const double a = fg.Psi(x);
        return a * (same ? a : fh.Psi(x));
    };
    const Tolerance tol{1e-13, 1e-11, 16};
    const double lhs = numeric::integrate_interval(overlap, x_lo, x_hi, tol).value.real();

    const double lo = std::min(g.support_lo(), h.support_lo());
    auto energy_integral = [&](auto f) {
        return numeric::integrate_interval([&](double e) -> Complex { return f(e); }, lo, e_hi, tol)
            .value.real();
    };
    const double rhs = energy_integral([&](double e) { return g(e) * h(e); });
    const double gg = energy_integral([&](double e) { return g(e) * g(e); });
    const double hh = energy_integral([&](double e) { return h(e) * h(e); });
    return {lhs, rhs, std::sqrt(gg * hh)};
}

double TestFunction::operator()(double y) const {
    const double u = (y - center) / width;
    return amplitude * std::exp(-u * u);
}

double smeared_completeness(const TestFunction& f, double x, const CompletenessOptions& opts) {
    if (!(f.width > 0.0)) throw DomainError("test function needs width > 0");
    if (!(opts.mu_max > 0.0)) throw DomainError("mu_max must be positive");
    if (f.amplitude == 0.0) return 0.0;
    const double y_lo = f.center - 8.0 * f.width;
    const double y_hi = f.center + 8.0 * f.width;
    const double mass = std::abs(f.amplitude) * f.width;

    // f^(mu) = int dy f(y) psi_mu(y) = sqrt(sinh(pi mu))/pi * int dX 1/2 cos(mu X) H(X)
    // with H(X) = int dy f(y) e^{-e^y cosh X}; H does not depend on mu.
    std::unordered_map<double, double> memo;
    auto H = [&](double big_x) {
        if (auto it = memo.find(big_x); it != memo.end()) return it->second;
        double value = 0.0;
        const double c = std::cosh(big_x);
        if (std::exp(y_lo) * c < -kLogUnderflow) {
            auto integrand = [&](double y) -> Complex {
                const double expo = -std::exp(y) * c;
                return expo > kLogUnderflow ? f(y) * std::exp(expo) : 0.0;
            };
            value = numeric::integrate_interval(integrand, y_lo, y_hi,
                                                Tolerance{1e-16 * mass, 1e-13, 16})
                        .value.real();
        }
        memo.emplace(big_x, value);
        return value;
    };
    auto coefficient = [&](double mu) {
        auto integrand = [&](double big_x) -> Complex { return 0.5 * std::cos(mu * big_x) * H(big_x); };
        const double t = numeric::integrate_real_line(integrand, Tolerance{1e-14 * mass, 1e-10, 16})
                             .value.real();
        return std::sqrt(std::sinh(kPi * mu)) / kPi * t;
    };
    auto integrand = [&](double mu) -> Complex {
        return 2.0 * mu * psi_mu(mu, x) * coefficient(mu);
    };
    return numeric::integrate_interval(integrand, 0.0, opts.mu_max, Tolerance{1e-8, 1e-8, 14})
        .value.real();
}

double qm_entwine_check(const KernelPoint& p, double h, EntwineVariable v) {
    if (!(h > 0.0)) throw DomainError("step must be positive");
    auto S = [](double x, double y, double z) { return 0.5 * std::exp(-macdonald_F({x, y, z})); };
    const double s0 = S(p.x, p.y, p.z);
    const double dzz = (S(p.x, p.y, p.z + h) - 2.0 * s0 + S(p.x, p.y, p.z - h)) / (h * h);
    double dvv, v0;
    if (v == EntwineVariable::X) {
        dvv = (S(p.x + h, p.y, p.z) - 2.0 * s0 + S(p.x - h, p.y, p.z)) / (h * h);
        v0 = p.x;
    } else {
        dvv = (S(p.x, p.y + h, p.z) - 2.0 * s0 + S(p.x, p.y - h, p.z)) / (h * h);
        v0 = p.y;
    }
    return (-dvv + std::exp(2.0 * v0) * s0) - (-dzz + std::exp(2.0 * p.z) * s0);
}

FreeParticleLimit free_particle_limit(double x, double big_x, double offset) {
    if (!(offset <= -10.0)) throw DomainError("free-particle limit needs offset <= -10");
    return {macdonald_F({x, offset, offset - big_x}), std::exp(x) * std::cosh(big_x)};
}

}  // namespace cataplex::liouville
