#include <cmath>
#include <limits>

#include "cataplex/entwine.hpp"
#include "cataplex/errors.hpp"
#include "cataplex/parallel.hpp"
#include "doctest.h"

using namespace cataplex;
using namespace cataplex::entwine;
using backlund::kAllModels;

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

TEST_CASE("kernel action values and invariances") {
    const Lattice lat{12, 0.3};
    CHECK(kernel_action(ModelKind::Liouville, constant_pair(lat, 0, 0, 0)).real() == doctest::Approx(-12 * 0.3 / 2));
    for (ModelKind m : kAllModels) {
        // Constant psi: only a * sum F_pot survives.
        auto p = random_pair(lat, 3, 0);
        for (double& v : p.psi) v = 0.25;
        double pot = 0.0;
        for (double v : p.phi) pot += lat.spacing * backlund::generator_potential(m, v, 0.25, p.z);
        CHECK(kernel_action(m, p).real() == doctest::Approx(pot).epsilon(1e-14));

        const auto r = random_pair(lat, 9, 1);
        const double base = kernel_action(m, r).real();
        CHECK(kernel_action(m, r).imag() == 0.0);
        CHECK(std::abs(std::abs(kernel(m, r)) - 1.0) < 4 * kEps);
        for (int k : {1, 5, -3}) CHECK(kernel_action(m, r.shifted(k)).real() == doctest::Approx(base).epsilon(1e-14));
    }
    CHECK_THROWS_AS(kernel_action(ModelKind::Liouville, constant_pair(lat, 400, 400, 0)), Overflow);
    CHECK_THROWS_AS(constant_pair({1, 0.1}, 0, 0, 0), DomainError);
    LatticePair bad = constant_pair(lat, 0, 0, 0);
    bad.psi.pop_back();
    CHECK_THROWS_AS(kernel_action(ModelKind::SineGordon, bad), DomainError);
}

TEST_CASE("kernel gradients") {
    const Lattice lat{10, 0.2};
    const auto g0 = kernel_gradients(ModelKind::Liouville, constant_pair(lat, 0, 0, 0));
    for (double v : g0.d_phi) CHECK(v / lat.spacing == doctest::Approx(0.5));
    for (ModelKind m : kAllModels) {
        const auto errors = parallel_map<double>(100, [&](std::size_t i) {
            return gradient_fd_error(m, random_pair({16, 0.1}, 42, i), 1e-4);
        });
        double worst = 0.0;
        for (double e : errors) worst = std::max(worst, e);
        CHECK(worst < 1e-6);

        const auto r = random_pair(lat, 8, 2);
        const auto g = kernel_gradients(m, r);
        const auto gs = kernel_gradients(m, r.shifted(3));
        for (int j = 0; j < lat.n_sites; ++j) {
            CHECK(gs.d_phi[j] == g.d_phi[lat.wrap(j + 3)]);
            CHECK(gs.d_psi[j] == g.d_psi[lat.wrap(j + 3)]);
        }
    }
}

TEST_CASE("constant fields satisfy every identity") {
    const Lattice lat{8, 0.3};
    for (ModelKind m : kAllModels) {
        // At zero fields every residual is exactly zero.
        const auto zero = constant_pair(lat, 0, 0, 0);
        CHECK(momentum_entwine_residual(m, zero) == Complex(0.0));
        CHECK(max_energy_residual(m, zero) == 0.0);
        CHECK(improved_entwine_residual(m, zero, Chirality::Plus) == Complex(0.0));
        CHECK(improved_entwine_residual(m, zero, Chirality::Minus) == Complex(0.0));
        // Elsewhere the momentum side is exact, the energy side exact up to rounding.
        for (auto [p, q, z] : {std::tuple{0.37, -0.61, 0.45}, {-0.9, 0.2, -0.3}, {0.5, 0.5, 1.0}}) {
            const auto c = constant_pair(lat, p, q, z);
            CHECK(momentum_entwine_residual(m, c) == Complex(0.0));
            for (int j = 0; j < lat.n_sites; ++j) {
                CHECK(std::abs(energy_entwine_residual(m, c, j)) <= 8 * kEps * energy_term_scale(m, c, j));
                CHECK(energy_entwine_residual(m, c, j).imag() == 0.0);
            }
            const double bound = 8 * kEps * lat.n_sites * lat.spacing * energy_term_scale(m, c, 0);
            CHECK(std::abs(improved_entwine_residual(m, c, Chirality::Plus)) <= bound);
            CHECK(std::abs(improved_entwine_residual(m, c, Chirality::Minus)) <= bound);
        }
    }
}

TEST_CASE("momentum identity converges at second order") {
    for (ModelKind m : kAllModels) {
        const auto rows = refinement_study(m, Identity::Momentum, {32, 0.25}, 4);
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].order == doctest::Approx(2.0).epsilon(0.05));
        const auto p = smooth_pair({32, 0.25}, 0.2);
        CHECK(std::abs(momentum_entwine_residual(m, p.shifted(7))) ==
              doctest::Approx(std::abs(momentum_entwine_residual(m, p))).epsilon(1e-10));
    }
}

TEST_CASE("energy and improved identities converge at first order") {
    for (ModelKind m : kAllModels) {
        for (Identity id : {Identity::Energy, Identity::ImprovedPlus, Identity::ImprovedMinus}) {
            const auto rows = refinement_study(m, id, {32, 0.25}, 5);
            for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].residual < rows[i - 1].residual);
            CHECK(rows.back().order >= 0.95);
            CHECK(rows.back().order < 1.2);
        }
        for (int n : {32, 64, 128}) {
            const auto p = smooth_pair({n, 8.0 / n}, 0.2);
            const Complex e = total_energy_residual(m, p);
            const Complex plus = improved_entwine_residual(m, p, Chirality::Plus);
            const Complex minus = improved_entwine_residual(m, p, Chirality::Minus);
            const double mom = std::abs(momentum_entwine_residual(m, p));
            // The two chiralities add up to twice the unimproved identity.
            CHECK(std::abs(plus + minus - 2.0 * e) < 1e-13);
            CHECK(std::abs(plus) <= std::abs(e) + mom + 1e-13);
            CHECK(std::abs(minus) <= std::abs(e) + mom + 1e-13);
        }
    }
    CHECK_THROWS_AS(energy_entwine_residual(ModelKind::Liouville, smooth_pair({8, 1}, 0), 8), DomainError);
}

TEST_CASE("free-field limit of the Liouville kernel") {
    for (double w : {0.0, 1.0, 3.0, 5.0, 10.0}) {
        CHECK(free_field_limit(w, 0, 0) == doctest::Approx(0.5 * std::exp(-2 * w)).epsilon(1e-14));
        CHECK(free_field_limit(w, 0.3, -0.7) == doctest::Approx(0.5 * std::exp(-0.7 - 0.3 - 2 * w)).epsilon(1e-14));
    }
    CHECK(std::log(free_field_limit(2, 0.4, 0.1) / free_field_limit(3, 0.4, 0.1)) == doctest::Approx(2.0).epsilon(1e-12));
    // varphi = 0: the limit density has no potential term left.
    CHECK(free_field_limit(4, 0.8, 0) == doctest::Approx(0.5 * std::exp(-0.8 - 8)).epsilon(1e-14));
    CHECK_THROWS_AS(free_field_limit(-1, 0, 0), DomainError);
}

TEST_CASE("seeded configurations are reproducible") {
    Lcg a{1}, b{1};
    for (int i = 0; i < 5; ++i) CHECK(a.next() == b.next());
    Lcg c{0};
    CHECK(c.next() == 1442695040888963407ULL);
    const auto p = random_pair({6, 0.5}, 77, 3);
    const auto q = random_pair({6, 0.5}, 77, 3);
    CHECK(p.phi == q.phi);
    CHECK(p.psi == q.psi);
    CHECK(p.z == q.z);
    CHECK(random_pair({6, 0.5}, 77, 4).phi != p.phi);
    for (double v : p.phi) CHECK((v >= -1.0 && v <= 1.0));
}
