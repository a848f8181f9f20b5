#include <cmath>
#include <numbers>

#include "cataplex/backlund.hpp"
#include "cataplex/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cataplex;
using namespace cataplex::backlund;

namespace {
double fd(auto&& f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }
}  // namespace

TEST_CASE("generator table at zero fields") {
    for (double z : {-0.7, 0.0, 1.3}) {
        CHECK(generator_density(ModelKind::SineGordon, 0, 0, 0, z) == doctest::Approx(2.0 * std::sinh(z)));
        CHECK(generator_density(ModelKind::SinhGordon, 0, 0, 0, z) == doctest::Approx(-2.0 * std::sinh(z)));
    }
    CHECK(generator_density(ModelKind::SineGordon, 0, 0, 0, 0) == 0.0);
    CHECK(generator_density(ModelKind::Liouville, 0, 0, 0, 0) == -0.5);
    CHECK(generator_density(ModelKind::Liouville, 2.0, 0, 0.25, 0) == doctest::Approx(0.5 + 0.5 * (std::exp(2.0) - std::exp(-2.0) - std::exp(2.0))));
    CHECK(potential(ModelKind::Liouville, 0.0) == 0.5);
    CHECK(potential(ModelKind::SinhGordon, 0.0) == 1.0);
    CHECK(potential(ModelKind::SineGordon, 0.0) == -1.0);
    CHECK(parse_model("sine-gordon") == ModelKind::SineGordon);
    CHECK_THROWS_AS(parse_model("phi4"), DomainError);
}

TEST_CASE("W and second derivatives match finite differences") {
    oracle::SplitMix rng{11};
    for (ModelKind m : kAllModels) {
        for (int trial = 0; trial < 100; ++trial) {
            const double p = rng.uniform(-1.5, 1.5), q = rng.uniform(-1.5, 1.5), z = rng.uniform(-1, 1);
            auto F = [&](double a, double b) { return generator_potential(m, a, b, z); };
            const double scale = 1.0 + std::abs(total_derivative_potential(m, p, q, z)) + std::abs(F(p, q));
            const double h = 1e-4;
            const double wp = w_phi(m, p, q, z), wq = w_psi(m, p, q, z);
            CHECK(std::abs(fd([&](double a) { return F(a, q); }, p, h) - wp) < 1e-8 * scale);
            CHECK(std::abs(fd([&](double b) { return F(p, b); }, q, h) - wq) < 1e-8 * scale);
            // Truncation error falls fourfold when h halves.
            const double e1 = std::abs(fd([&](double a) { return F(a, q); }, p, 0.02) - wp);
            const double e2 = std::abs(fd([&](double a) { return F(a, q); }, p, 0.01) - wp);
            if (e1 > 1e-10) CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));

            CHECK(std::abs(fd([&](double a) { return w_phi(m, a, q, z); }, p, h) - w_phi_phi(m, p, q, z)) < 1e-8 * scale);
            CHECK(std::abs(fd([&](double b) { return w_psi(m, p, b, z); }, q, h) - w_psi_psi(m, p, q, z)) < 1e-8 * scale);
            CHECK(std::abs(fd([&](double b) { return w_phi(m, p, b, z); }, q, h) - w_phi_psi(m, p, q, z)) < 1e-8 * scale);
            auto G = [&](double a, double b) { return total_derivative_potential(m, a, b, z); };
            CHECK(std::abs(fd([&](double a) { return G(a, q); }, p, h) - wq) < 1e-8 * scale);
            CHECK(std::abs(fd([&](double b) { return G(p, b); }, q, h) - wp) < 1e-8 * scale);
            // The algebraic relation behind the energy entwining.
            const double alg = 0.5 * (wp * wp - wq * wq) + potential(m, p) - potential(m, q);
            CHECK(std::abs(alg) < 1e-13 * (scale * scale));
        }
    }
}

TEST_CASE("sine-Gordon kink from the vacuum") {
    auto seed = FieldSlice::vacuum(-5.0, 5.0, 10001);
    const auto out = solve_backlund(ModelKind::SineGordon, seed, {0.0, oracle::kink(-5.0, 1.0)});
    double worst = 0.0, worst_pi = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        worst = std::max(worst, std::abs(out.phi[i] - oracle::kink(out.sigma[i], 1.0)));
        worst_pi = std::max(worst_pi, std::abs(out.pi[i]));
    }
    CHECK(worst < 1e-8);
    CHECK(worst_pi < 1e-12);
    CHECK(out.sigma == seed.sigma);
}

TEST_CASE("sinh-Gordon vacuum seed obeys the tanh law") {
    for (double z : {-0.5, 0.0, 0.8}) {
        auto seed = FieldSlice::vacuum(-2.0, 3.0, 2001);
        const double psi0 = 1.5;
        const auto out = solve_backlund(ModelKind::SinhGordon, seed, {z, psi0});
        const double c = std::tanh(psi0 / 2.0) * std::exp(2.0 * std::cosh(z) * -2.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double expected = c * std::exp(-2.0 * std::cosh(z) * out.sigma[i]);
            worst = std::max(worst, std::abs(std::tanh(out.phi[i] / 2.0) - expected));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("fixed points give constant psi") {
    auto seed = FieldSlice::vacuum(-1.0, 1.0, 201);
    const auto sg = solve_backlund(ModelKind::SineGordon, seed, {0.4, 0.0});
    for (double v : sg.phi) CHECK(v == 0.0);
    // Liouville vacuum: W_phi(0, psi, z) = 0 at e^{2 psi} = e^z / (2 cosh z).
    const double z = 0.3;
    const double star = 0.5 * std::log(std::exp(z) / (2.0 * std::cosh(z)));
    const auto lv = solve_backlund(ModelKind::Liouville, seed, {z, star});
    for (double v : lv.phi) CHECK(std::abs(v - star) < 1e-14);
    // Seed momentum chosen to balance W_phi at psi_left.
    FieldSlice tilted = FieldSlice::vacuum(-1.0, 1.0, 201);
    for (std::size_t i = 0; i < tilted.size(); ++i) {
        tilted.phi[i] = 0.2;
        tilted.pi[i] = w_phi(ModelKind::SinhGordon, 0.2, 0.7, -0.4);
    }
    const auto sh = solve_backlund(ModelKind::SinhGordon, tilted, {-0.4, 0.7});
    for (double v : sh.phi) CHECK(std::abs(v - 0.7) < 1e-13);
}

TEST_CASE("static EOM residual of the generated kink") {
    auto run = [](std::size_t n) {
        const auto out = solve_backlund(ModelKind::SineGordon, FieldSlice::vacuum(-5.0, 5.0, n),
                                        {0.0, oracle::kink(-5.0, 1.0)});
        return eom_residual(ModelKind::SineGordon, out);
    };
    const double coarse = run(10001);   // h = 1e-3
    const double fine = run(20001);     // h = 5e-4
    CHECK(fine < 1e-6);
    CHECK(coarse < 4e-6);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));

    FieldSlice flat = FieldSlice::vacuum(-1.0, 1.0, 11);
    CHECK(eom_residual(ModelKind::SinhGordon, flat) == 0.0);
    CHECK(eom_residual(ModelKind::SineGordon, flat) == 0.0);
}

TEST_CASE("Backlund parameter rescales the kink width by cosh z") {
    const double lo = -5.0, hi = 5.0;
    const std::size_t n = 4001;
    const double psi_left = oracle::kink(lo, 1.0);
    const auto base = solve_backlund(ModelKind::SineGordon, FieldSlice::vacuum(lo, hi, n), {0.0, psi_left});
    for (double z : {0.5, -1.0, 1.5}) {
        const double c = std::cosh(z);
        const auto boosted = solve_backlund(ModelKind::SineGordon, FieldSlice::vacuum(lo / c, hi / c, n), {z, psi_left});
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(boosted.phi[i] - base.phi[i]));
        CHECK(worst < 1e-6);
        // A moving slice: pi_psi = -2 sinh z sin psi.
        CHECK(boosted.pi[n / 2] == doctest::Approx(-2.0 * std::sinh(z) * std::sin(boosted.phi[n / 2])));
    }
}

TEST_CASE("sinh-Gordon contracts to Liouville") {
    oracle::SplitMix rng{5};
    for (int trial = 0; trial < 20; ++trial) {
        const ContractionSample s{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        for (double w : {0.0, 1.0, 3.0, 5.0}) {
            const double d = contract_to_liouville(w, s);
            CHECK(std::abs(d / contraction_remainder(w, s) - 1.0) < 1e-10);
        }
        const double slope = std::log(contract_to_liouville(2.0, s) / contract_to_liouville(3.0, s));
        CHECK(slope == doctest::Approx(4.0).epsilon(1e-10));
        const double raw = std::abs(generator_potential(ModelKind::SinhGordon, s.phi, s.psi, s.z) -
                                    generator_potential(ModelKind::Liouville, s.phi, s.psi, s.z));
        CHECK(contract_to_liouville(0.0, s) == doctest::Approx(raw).epsilon(1e-13));
    }
    CHECK(contract_to_liouville(5.0, {0.0, 0.0, 0.0}) < 1e-6);
    CHECK_THROWS_AS(contract_to_liouville(-1.0, {}), DomainError);
    CHECK_THROWS_AS(contract_to_liouville(800.0, {0.0, 0.0, 0.0}), Overflow);
}

TEST_CASE("overflowing Liouville seed raises StepUnderflow") {
    FieldSlice seed = FieldSlice::vacuum(0.0, 1.0, 11);
    for (double& p : seed.phi) p = 720.0;
    CHECK_THROWS_AS(solve_backlund(ModelKind::Liouville, seed, {0.0, 30.0}), StepUnderflow);
    FieldSlice ragged = FieldSlice::vacuum(0.0, 1.0, 11);
    ragged.sigma[4] += 0.03;
    CHECK_THROWS_AS(solve_backlund(ModelKind::SineGordon, ragged, {}), DomainError);
}
