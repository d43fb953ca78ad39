#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rieszlab/constants.hpp"
#include "rieszlab/torus_measure.hpp"

using namespace rieszlab;
using doctest::Approx;

TEST_CASE("half-odd-degree Legendre pairs match high-precision references") {
    for (const testutil::LegendreRef& ref : testutil::kLegendreTable) {
        const ToroidalFunctionPair pq = toroidal_pq(ref.n, ref.z);
        CHECK(pq.n == ref.n);
        CHECK(pq.P == Approx(ref.P).epsilon(1e-12));
        CHECK(pq.Q == Approx(ref.Q).epsilon(1e-12));
    }
}

TEST_CASE("legendre families grow and decay monotonically in the degree") {
    const double z = 2.0;
    double prev_p = toroidal_pq(0, z).P;
    double prev_q = toroidal_pq(0, z).Q;
    for (int n = 1; n <= 30; ++n) {
        const ToroidalFunctionPair pq = toroidal_pq(n, z);
        CHECK(pq.P > prev_p);  // first kind increases
        CHECK(pq.Q < prev_q);  // second kind decreases
        CHECK(pq.Q > 0.0);
        prev_p = pq.P;
        prev_q = pq.Q;
    }
}

TEST_CASE("legendre evaluation survives degrees that need internal rescaling") {
    // growth is geometric in the degree; n = 600 overflows any naive forward
    // recurrence in the second kind's normalization but must still work
    const ToroidalFunctionPair pq = toroidal_pq(600, 1.02);
    CHECK(std::isfinite(pq.P));
    CHECK(pq.P > 0.0);
    CHECK(pq.Q > 0.0);
    CHECK(pq.Q < 1.0);
}

TEST_CASE("legendre evaluation rejects arguments off the cut") {
    CHECK_THROWS_AS(toroidal_pq(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(toroidal_pq(0, 0.5), std::domain_error);
    CHECK_THROWS_AS(toroidal_pq(-1, 2.0), std::domain_error);
}

TEST_CASE("ring capacitary energy matches the reference table") {
    CHECK(landkof_energy(1.5, 1.0) == Approx(testutil::kRingEnergy_15_1).epsilon(1e-10));
    CHECK(landkof_energy(2.0, 1.0) == Approx(testutil::kRingEnergy_2_1).epsilon(1e-10));
    CHECK(landkof_energy(3.0, 1.0) == Approx(testutil::kRingEnergy_3_1).epsilon(1e-10));
}

TEST_CASE("ring capacitary energy scales and orders as a capacity should") {
    // larger rings (longer loop or fatter tube) store charge at lower energy
    CHECK(landkof_energy(1.2, 1.0) > landkof_energy(1.5, 1.0));
    CHECK(landkof_energy(1.5, 1.0) > landkof_energy(2.0, 1.0));
    CHECK(landkof_energy(3.0, 1.0) > landkof_energy(3.0, 1.5));
    // energy scales inversely with a global dilation
    CHECK(landkof_energy(6.0, 2.0) == Approx(0.5 * landkof_energy(3.0, 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(landkof_energy(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(landkof_energy(1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(landkof_energy(1.0, 0.0), std::domain_error);
}

TEST_CASE("circle-pair kernel agrees with independent quadrature") {
    const double l = 3.0, a = 1.0;
    const double pi = std::numbers::pi;
    for (double v : {0.0, 0.7, pi / 2, 2.5}) {
        for (double vp : {0.3, 1.9, pi, 5.1}) {
            const double closed = revolution_kernel(l, a, v, vp);
            const double quad = revolution_kernel_quadrature(l, a, v, vp);
            CHECK(closed == Approx(quad).epsilon(1e-11));
            CHECK(closed == Approx(revolution_kernel(l, a, vp, v)).epsilon(1e-14));
            CHECK(closed > 0.0);
        }
    }
    CHECK_THROWS_AS(revolution_kernel(l, a, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(revolution_kernel(1.0, 2.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("circle-pair kernel stays finite arbitrarily close to coincidence") {
    // the closed form must not underflow when the circles nearly touch
    const double k = revolution_kernel(3.0, 1.0, 1.0, 1.0 + 1e-12);
    CHECK(std::isfinite(k));
    CHECK(k > 1.0);   // log-divergent, but slowly
    CHECK(k < 50.0);  // ... so still moderate at 1e-12 separation
}

TEST_CASE("discretized equilibrium energy brackets the capacitary energy from above") {
    const double reference = landkof_energy(3.0, 1.0);
    const DensityProfile coarse = solve_equilibrium(3.0, 1.0, 64);
    const DensityProfile fine = solve_equilibrium(3.0, 1.0, 250);

    CHECK(coarse.energy >= reference);
    CHECK(fine.energy >= reference);
    CHECK((coarse.energy - reference) / reference < 1e-6);
    CHECK((fine.energy - reference) / reference < 5e-8);
    CHECK(fine.energy < coarse.energy);  // refinement converges downward
    CHECK_FALSE(coarse.constrained);
    CHECK_FALSE(fine.constrained);
}

TEST_CASE("equilibrium weights form a symmetric probability distribution") {
    const DensityProfile sol = solve_equilibrium(2.0, 1.0, 128);
    REQUIRE(sol.m == 128);
    REQUIRE(sol.weights.size() == 128);
    REQUIRE(sol.density.size() == 128);
    REQUIRE(sol.v.size() == 128);

    double total = 0.0;
    for (double w : sol.weights) {
        CHECK(w > 0.0);
        total += w;
    }
    CHECK(total == Approx(1.0).epsilon(1e-13));

    // the kernel is even in the tube angle, so the density is too
    for (int j = 0; j < 64; ++j) {
        const double left = sol.density[static_cast<std::size_t>(j)];
        const double right = sol.density[static_cast<std::size_t>(127 - j)];
        CHECK(left == Approx(right).epsilon(1e-8));
    }
    // charge accumulates toward the outer equator (larger radius): the
    // density at the outer equator exceeds the density at the inner one
    const double inner = sol.density.front();  // v = -pi side
    const double outer = sol.density[64];      // v near 0
    CHECK(outer > inner);
}

TEST_CASE("equilibrium solver validates its grid size and geometry") {
    CHECK_THROWS_AS(solve_equilibrium(3.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(solve_equilibrium(1.0, 1.0, 64), std::domain_error);
}

TEST_CASE("surface correction on the sphere closes to the flat-lattice form") {
    const double sphere = second_term_coefficient(Manifold::sphere(), nullptr);
    CHECK(sphere == Approx(cs_coefficient(1.0)).epsilon(1e-6));
    CHECK(sphere < 0.0);
}

TEST_CASE("surface correction on the ring uses the equilibrium profile") {
    const Manifold ring = Manifold::torus(3.0, 1.0);
    const DensityProfile coarse = solve_equilibrium(3.0, 1.0, 64);
    const DensityProfile fine = solve_equilibrium(3.0, 1.0, 250);

    const double c_coarse = second_term_coefficient(ring, &coarse);
    const double c_fine = second_term_coefficient(ring, &fine);
    CHECK(c_fine < 0.0);
    // grid refinement moves the value by little (both near the converged limit)
    CHECK(c_fine == Approx(-0.3795152).epsilon(5e-5));
    CHECK(std::fabs(c_fine - c_coarse) < 1e-3);

    // non-uniform equilibrium measure: strictly worse than a uniform one
    // of the same total mass would suggest on the sphere
    CHECK(std::fabs(c_fine) < std::fabs(second_term_coefficient(Manifold::sphere(), nullptr)));
}

TEST_CASE("surface correction on the ring demands a matching profile") {
    const Manifold ring = Manifold::torus(3.0, 1.0);
    CHECK_THROWS_AS(second_term_coefficient(ring, nullptr), std::invalid_argument);
    const DensityProfile other = solve_equilibrium(2.0, 1.0, 64);
    CHECK_THROWS_AS(second_term_coefficient(ring, &other), std::invalid_argument);
}
