#include <cmath>
#include <numbers>

#include "cataplex/errors.hpp"
#include "cataplex/timemap.hpp"
#include "doctest.h"

using namespace cataplex;
using namespace cataplex::timemap;

namespace {
constexpr double kPi = std::numbers::pi;

// -(1/E) ln K_{i sqrt E}(e^z) straight from the cosine integral.
double T_reference(double e, double z) {
    return -std::log(bessel::k_imag(bessel::ImaginaryOrder(std::sqrt(e)), std::exp(z))) / e;
}

// Largest |(|K| / level) - 1| along a contour, K re-evaluated independently.
double level_error(const Contour& c) {
    double worst = 0.0;
    const Complex nu(0.0, std::sqrt(c.energy));
    for (const auto& p : c.points) {
        const double modulus = std::abs(bessel::k_complex(nu, std::exp(p.z)));
        worst = std::max(worst, std::abs(modulus / c.level - 1.0));
    }
    return worst;
}

bool phase_increasing(const Contour& c) {
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        if (!(c.points[i].phase > c.points[i - 1].phase)) return false;
    }
    return true;
}
}  // namespace

TEST_CASE("t_of_z on the real axis is Euclidean") {
    const auto st = t_of_z(EnergyShell(1.0), Complex(3.0, 0.0));
    CHECK(st.t.real() == 0.0);
    const double T = -st.t.imag();
    const double paper_series = std::exp(3.0) + 1.5 - std::log(std::sqrt(kPi / 2.0)) +
                                0.625 * std::exp(-3.0);
    CHECK(std::abs(T - paper_series) / paper_series < 1e-2);
    CHECK(std::abs(T - T_reference(1.0, 3.0)) < 1e-12 * T);
    CHECK(st.branch == 0);
    CHECK(st.regime == bessel::Regime::Asymptotic);
}

TEST_CASE("t_of_z satisfies exp(-iEt) = K") {
    for (double e : {0.5, 1.0, 2.0}) {
        for (Complex z : {Complex(0.3, 0.4), Complex(-1.0, -1.2), Complex(2.5, 1.0), Complex(3.0, -2.5)}) {
            const auto st = t_of_z(EnergyShell(e), z);
            const Complex k = bessel::k_complex(Complex(0.0, std::sqrt(e)), std::exp(z));
            const Complex back = std::exp(Complex(0.0, -e) * st.t);
            CHECK(std::abs(back - k) <= 1e-10 * std::abs(k));
        }
    }
    // Past arg w = pi the map follows the continuation in z, not the principal K.
    const Complex z(3.0, 4.0);
    const auto st = t_of_z(EnergyShell(1.0), z);
    const Complex continued = std::exp(bessel::log_k_exp(Complex(0.0, 1.0), z).value);
    CHECK(std::abs(std::exp(Complex(0.0, -1.0) * st.t) - continued) <= 1e-10 * std::abs(continued));
    CHECK(std::abs(continued - bessel::k_complex(Complex(0.0, 1.0), std::exp(z))) > 1e-3 * std::abs(continued));
    CHECK_THROWS_AS(t_of_z(EnergyShell(1.0), Complex(0.0, 2.0)), OutsideDomain);
}

TEST_CASE("branch-tracked t is continuous along a path") {
    // A small loop around a real zero of K: arg K turns once, so the principal
    // branch jumps while the hinted one does not.
    const EnergyShell shell(1.0);
    const double zero = real_zeros(shell, 1).front();
    auto path = [&](int k) { return zero + 0.1 * std::exp(Complex(0.0, 2.0 * kPi * k / 200.0)); };
    ShellTime prev = t_of_z(shell, path(0));
    int principal_jumps = 0;
    double worst = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const ShellTime tracked = t_of_z(shell, path(k), prev.t);
        const ShellTime principal = t_of_z(shell, path(k));
        if (std::abs(principal.t - t_of_z(shell, path(k - 1)).t) > kPi / shell.energy()) ++principal_jumps;
        worst = std::max(worst, std::abs(tracked.t - prev.t));
        prev = tracked;
    }
    CHECK(principal_jumps >= 1);
    CHECK(worst < 0.1);
    // One turn around the zero shifts t by 2 pi / E.
    CHECK(std::abs(std::abs(prev.t - t_of_z(shell, path(0)).t) - 2.0 * kPi) < 1e-9);
}

TEST_CASE("deep-Euclidean series") {
    const EnergyShell one(1.0);
    CHECK(euclidean_T_series(one, 2.0, 0) == std::exp(2.0));
    CHECK(euclidean_T_series(EnergyShell(2.0), 2.0, 0) == 0.5 * std::exp(2.0));
    CHECK(euclidean_T_coefficient(EnergyShell(0.5)) == 0.375);
    CHECK(euclidean_T_coefficient(EnergyShell(1.0)) == 0.625);
    CHECK(euclidean_T_coefficient(EnergyShell(2.0)) == 1.125);

    const double ref = T_reference(1.0, 3.0);
    double last = 1e300;
    for (int order = 0; order <= 3; ++order) {
        const double err = std::abs(euclidean_T_series(one, 3.0, order) - ref);
        CHECK(err < last);
        last = err;
    }
    CHECK(last / ref < 1e-3);

    // Error of order 2 falls like e^{-z}, order 3 like e^{-2z}.
    auto err = [&](double z, int order) { return std::abs(euclidean_T_series(one, z, order) - T_reference(1.0, z)); };
    CHECK(err(4.0, 2) / err(3.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
    CHECK(err(5.0, 2) / err(4.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
    CHECK(err(4.0, 3) / err(3.0, 3) == doctest::Approx(std::exp(-2.0)).epsilon(0.15));
    CHECK(err(5.0, 3) / err(4.0, 3) == doctest::Approx(std::exp(-2.0)).epsilon(0.15));
    CHECK_THROWS_AS(euclidean_T_series(one, 3.0, 4), DomainError);
}

TEST_CASE("real zeros of K_{i mu}") {
    for (double e : {0.5, 1.0, 2.0}) {
        const EnergyShell shell(e);
        const auto zeros = real_zeros(shell, 3);
        REQUIRE(zeros.size() == 3);
        for (double z : zeros) {
            const bessel::ImaginaryOrder order(shell.mu());
            CHECK(bessel::k_imag(order, std::exp(z - 1e-6)) * bessel::k_imag(order, std::exp(z + 1e-6)) < 0.0);
        }
        // Spacing in ln x tends to pi / mu.
        CHECK((zeros[1] - zeros[2]) == doctest::Approx(kPi / shell.mu()).epsilon(0.05));
    }
}

TEST_CASE("closed contours around a real zero") {
    for (double e : {0.5, 1.0, 2.0}) {
        const EnergyShell shell(e);
        const Complex seed = real_zeros(shell, 1).front() + 0.1;
        const auto c = trace_level_contour(shell, seed, 0.05, 2000);
        CHECK(c.closed);
        CHECK(c.reason == Termination::Closed);
        CHECK(classify_contour(c) == ContourKind::Closed);
        CHECK(level_error(c) < 1e-8);
        CHECK(phase_increasing(c));
        CHECK(c.winding() == 1);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            CHECK(std::abs(c.points[i].z - c.points[i - 1].z) <= c.step);
        }
        const auto finer = trace_level_contour(shell, seed, 0.025, 4000);
        CHECK(classify_contour(finer) == ContourKind::Closed);
        CHECK(finer.winding() == c.winding());
    }
}

TEST_CASE("contours from the monotone tail are open") {
    for (double step : {0.1, 0.05}) {
        const auto c = trace_level_contour(EnergyShell(1.0), Complex(3.0, 0.0), step, 5000);
        CHECK(classify_contour(c) == ContourKind::Open);
        CHECK(c.reason == Termination::LeftDomain);
        CHECK(level_error(c) < 1e-8);
        CHECK(phase_increasing(c));
    }
    const auto short_run = trace_level_contour(EnergyShell(1.0), Complex(3.0, 0.0), 0.05, 5);
    CHECK(short_run.reason == Termination::MaxSteps);
    CHECK(short_run.points.size() == 6);
    CHECK(classify_contour(short_run) == ContourKind::Open);
}

TEST_CASE("tracer preconditions") {
    CHECK_THROWS_AS(trace_level_contour(EnergyShell(1.0), Complex(0.0, 2.0), 0.05, 10), LeftDomain);
    CHECK_THROWS_AS(trace_level_contour(EnergyShell(1.0), Complex(20.0, 0.0), 0.05, 10), LeftDomain);
    CHECK_FALSE(in_trace_domain(Complex(3.0, 4.7)));
    CHECK(in_trace_domain(Complex(3.0, 4.0)));

    // A real extremum of K between its two largest zeros has d ln K/dz = 0.
    const EnergyShell shell(2.0);
    const auto zeros = real_zeros(shell, 2);
    double a = zeros[1] + 1e-3, b = zeros[0] - 1e-3;
    const double fa = log_k_derivative(shell, a).real();
    REQUIRE(fa * log_k_derivative(shell, b).real() < 0.0);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        if ((log_k_derivative(shell, m).real() > 0.0) == (fa > 0.0)) a = m; else b = m;
    }
    const double critical = 0.5 * (a + b);
    CHECK(std::abs(log_k_derivative(shell, critical)) < 1e-8);
    CHECK_THROWS_AS(trace_level_contour(shell, critical, 0.05, 10), SaddlePoint);

    Contour single;
    single.points.push_back({Complex(1.0, 0.0), 0.0, 0.0, 0, bessel::Regime::Integral});
    CHECK_THROWS_AS(classify_contour(single), Degenerate);
}

TEST_CASE("log_k_derivative matches a finite difference") {
    const EnergyShell shell(1.5);
    for (Complex z : {Complex(0.2, 0.3), Complex(2.8, -0.5), Complex(-1.0, 0.1)}) {
        const double h = 1e-5;
        const Complex fd = (bessel::log_k_exp(Complex(0.0, shell.mu()), z + h).value -
                            bessel::log_k_exp(Complex(0.0, shell.mu()), z - h).value) /
                           (2.0 * h);
        CHECK(std::abs(log_k_derivative(shell, z) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
}
