#include "cataplex/timemap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cataplex/errors.hpp"

namespace cataplex::timemap {

using bessel::Regime;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMaxModulus = 1e6;

Complex order_of(EnergyShell shell) { return {0.0, shell.mu()}; }

struct Eval {
    Complex z;
    Complex g;   // ln K
    Complex dg;  // d ln K / dz
    Regime regime;
};

Eval evaluate(Complex nu, Complex z) {
    const bessel::LogK lk = bessel::log_k_exp(nu, z);
    if (!std::isfinite(lk.value.real())) throw BesselZero("K vanishes on the contour");
    const Complex lm = bessel::log_k_exp(nu - 1.0, z).value;
    const Complex dg = -std::exp(z) * std::exp(lm - lk.value) - nu;
    return {z, lk.value, dg, lk.regime};
}

double continue_phase(double phase, const Eval& from, const Eval& to) {
    const double jump = to.g.imag() - from.g.imag();
    // The series regime gives ln K as an analytic expression in z, so its
    // imaginary part is already continuous; elsewhere steps are short enough
    // that the principal difference is the true one.
    if (from.regime == Regime::Asymptotic && to.regime == Regime::Asymptotic) return phase + jump;
    return phase + std::remainder(jump, kTwoPi);
}

int branch_of(double phase) {
    return static_cast<int>(std::lround((phase - std::remainder(phase, kTwoPi)) / kTwoPi));
}

}  // namespace

ShellTime t_of_z(EnergyShell shell, Complex z, std::optional<Complex> branch_hint) {
    const double e = shell.energy();
    const bessel::LogK lk = bessel::log_k_exp(order_of(shell), z);
    if (!std::isfinite(lk.value.real())) throw BesselZero("ln K is singular at a zero of K");
    Complex principal(lk.value.real(), std::remainder(lk.value.imag(), kTwoPi));
    int branch = 0;
    if (branch_hint) {
        const Complex hint_log = Complex(0.0, -e) * *branch_hint;
        branch = static_cast<int>(std::lround((hint_log.imag() - principal.imag()) / kTwoPi));
    }
    const Complex log_k = principal + Complex(0.0, kTwoPi * branch);
    return {e, z, Complex(0.0, 1.0 / e) * log_k, log_k, branch, lk.regime};
}

Complex log_k_derivative(EnergyShell shell, Complex z) {
    return evaluate(order_of(shell), z).dg;
}

double euclidean_T_coefficient(EnergyShell shell) { return (1.0 + 4.0 * shell.energy()) / 8.0; }

double euclidean_T_series(EnergyShell shell, double z, int order) {
    if (order < 0 || order > 3) throw DomainError("series order must be 0..3");
    double bracket = std::exp(z);
    if (order >= 1) bracket += 0.5 * z;
    if (order >= 2) bracket -= 0.5 * std::log(0.5 * kPi);
    if (order >= 3) bracket += euclidean_T_coefficient(shell) * std::exp(-z);
    return bracket / shell.energy();
}

std::vector<double> real_zeros(EnergyShell shell, int count) {
    if (count < 0) throw DomainError("count must be nonnegative");
    const double mu = shell.mu();
    const bessel::ImaginaryOrder order(mu);
    auto k = [&](double z) { return bessel::k_imag(order, std::exp(z)); };
    // K_{i mu}(x) is positive for x > mu and oscillates with period ~ pi/mu in ln x below.
    const double dz = std::min(0.05, 0.2 / mu);
    const double z_floor = -(count + 2) * kPi / mu - 20.0;
    std::vector<double> zeros;
    double hi = std::log(std::max(mu, 0.5)) + 1.0;
    double k_hi = k(hi);
    while (static_cast<int>(zeros.size()) < count) {
        const double lo = hi - dz;
        if (lo < z_floor) throw NonConvergence("real zero scan ran past its floor");
        const double k_lo = k(lo);
        if ((k_lo < 0.0) != (k_hi < 0.0)) {
            double a = lo, b = hi, fa = k_lo;
            for (int it = 0; it < 200 && b - a > 4.0 * kEps * std::max(1.0, std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = k(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            zeros.push_back(0.5 * (a + b));
        }
        hi = lo;
        k_hi = k_lo;
    }
    return zeros;
}

const char* to_string(Termination reason) {
    switch (reason) {
        case Termination::Closed: return "closed";
        case Termination::LeftDomain: return "left_domain";
        case Termination::MaxSteps: return "max_steps";
    }
    return "unknown";
}

const char* to_string(ContourKind kind) { return kind == ContourKind::Closed ? "closed" : "open"; }

std::vector<Complex> Contour::z_values() const {
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.z);
    return out;
}

std::vector<int> Contour::branch_track() const {
    std::vector<int> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.branch);
    return out;
}

int Contour::winding() const {
    if (points.empty()) return 0;
    return points.back().branch - points.front().branch;
}

bool in_trace_domain(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    const double arg = std::abs(z.imag());
    if (!(arg < 1.5 * kPi - 0.1)) return false;
    const double modulus = std::exp(z.real());
    if (modulus > kMaxModulus) return false;
    return modulus >= bessel::kRegimeSwitchRadius || arg < 0.5 * kPi - 0.05;
}

Contour trace_level_contour(EnergyShell shell, Complex z0, double step, int max_steps) {
    if (!(step > 0.0) || max_steps < 1) throw DomainError("trace needs step > 0 and max_steps >= 1");
    if (!in_trace_domain(z0)) throw LeftDomain("seed lies outside the trace domain");
    const Complex nu = order_of(shell);

    const Eval start = evaluate(nu, z0);
    if (std::abs(start.dg) < 1e-8) throw SaddlePoint("d ln K / dz vanishes at the seed");
    const double level = start.g.real();

    Contour c;
    c.energy = shell.energy();
    c.step = step;
    c.log_level = level;
    c.level = std::exp(level);

    double phase = std::remainder(start.g.imag(), kTwoPi);
    auto push = [&](const Eval& e) {
        c.points.push_back({e.z, e.g.real(), phase, branch_of(phase), e.regime});
    };
    push(start);

    // Rounding in Re ln K grows with |e^z| through the -e^z term.
    auto corrector_tol = [&](Complex z) {
        return std::max(1e-12, 16.0 * kEps * (std::exp(z.real()) + std::abs(level)));
    };

    enum class Outcome { Ok, Failed, Outside };
    auto correct = [&](Complex z, Eval& out) -> Outcome {
        for (int it = 0; it < 12; ++it) {
            if (!in_trace_domain(z)) return Outcome::Outside;
            out = evaluate(nu, z);
            const double r = out.g.real() - level;
            if (std::abs(r) <= corrector_tol(z)) return Outcome::Ok;
            if (std::abs(out.dg) < 1e-8) throw SaddlePoint("d ln K / dz vanishes on the contour");
            z -= r / out.dg;
        }
        return Outcome::Failed;
    };

    Eval here = start;
    double s = 0.5 * step;
    double arc = 0.0;
    int accepted = 0;
    const double s_floor = step * 1e-9;
    while (accepted < max_steps) {
        const Complex tangent = Complex(0.0, 1.0) * std::conj(here.dg) / std::abs(here.dg);
        double s_eff = s;
        // Phase advances at rate |d ln K/dz| per unit length; keep it under
        // one radian per step where the phase must be unwrapped.
        if (here.regime == Regime::Integral) s_eff = std::min(s_eff, 1.0 / std::abs(here.dg));

        Eval next;
        const Outcome outcome = correct(here.z + s_eff * tangent, next);
        if (outcome != Outcome::Ok) {
            if (outcome == Outcome::Outside && s_eff <= 1e-3 * step) {
                c.reason = Termination::LeftDomain;
                return c;
            }
            s = 0.5 * s_eff;
            if (s < s_floor) throw StepUnderflow("contour corrector keeps failing");
            continue;
        }
        const double hop = std::abs(next.z - here.z);
        const Complex next_tangent = Complex(0.0, 1.0) * std::conj(next.dg) / std::abs(next.dg);
        const double turn = std::abs(std::arg(next_tangent / tangent));
        if (hop > step || turn > 0.3) {
            s = 0.5 * s_eff;
            if (s < s_floor) throw StepUnderflow("contour step collapsed");
            continue;
        }

        phase = continue_phase(phase, here, next);
        push(next);
        here = next;
        arc += hop;
        ++accepted;
        s = std::min(0.9 * step, 1.5 * s_eff);

        if (accepted >= 3 && arc > 3.0 * step && std::abs(here.z - z0) < step) {
            phase = continue_phase(phase, here, start);
            push(start);
            c.closed = true;
            c.reason = Termination::Closed;
            return c;
        }
    }
    c.reason = Termination::MaxSteps;
    return c;
}

ContourKind classify_contour(const Contour& c) {
    if (c.points.size() < 2) throw Degenerate("contour has fewer than two points");
    const Complex a = c.points.front().z;
    const Complex b = c.points.back().z;
    const double tol = 1e-12 * std::max(1.0, std::abs(a));
    return std::abs(a - b) <= tol ? ContourKind::Closed : ContourKind::Open;
}

}  // namespace cataplex::timemap
