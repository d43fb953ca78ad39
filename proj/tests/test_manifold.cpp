#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rieszlab/manifold.hpp"

using namespace rieszlab;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double point_distance(Vec3 a, Vec3 b) { return (a - b).norm(); }
}  // namespace

TEST_CASE("sphere embedding hits the canonical axis points") {
    const Manifold s = Manifold::sphere();
    const Vec3 north = s.embed(0.0, 0.0);
    CHECK(north.x == 0.0);
    CHECK(north.z == Approx(1.0));
    const Vec3 equator = s.embed(kPi / 2, 0.0);
    CHECK(equator.x == Approx(1.0));
    CHECK(std::fabs(equator.z) < 1e-15);
    CHECK(s.area() == Approx(4.0 * kPi));
    CHECK(s.rigid_symmetry_dim() == 3);
}

TEST_CASE("torus embedding and area follow the two radii") {
    const Manifold t = Manifold::torus(3.0, 1.0);
    CHECK(t.major_radius() == 3.0);
    CHECK(t.minor_radius() == 1.0);
    CHECK(t.rigid_symmetry_dim() == 1);
    CHECK(t.area() == Approx(4.0 * kPi * kPi * 3.0));

    const Vec3 outer = t.embed(0.0, 0.0);
    CHECK(outer.x == Approx(4.0));
    CHECK(std::fabs(outer.y) < 1e-15);
    CHECK(std::fabs(outer.z) < 1e-15);

    const Vec3 top = t.embed(kPi / 2, kPi / 2);
    CHECK(std::fabs(top.x) < 1e-15);
    CHECK(top.y == Approx(3.0));
    CHECK(top.z == Approx(1.0));
}

TEST_CASE("torus construction rejects degenerate radii") {
    CHECK_THROWS_AS(Manifold::torus(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(Manifold::torus(1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(Manifold::torus(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(Manifold::torus(-3.0, -1.0), std::domain_error);
}

TEST_CASE("angle recovery inverts the embedding on both surfaces") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (const Manifold& m : {Manifold::sphere(), Manifold::torus(2.5, 0.8)}) {
        for (int k = 0; k < 200; ++k) {
            const double alpha = (m.is_sphere() ? kPi : 2 * kPi) * u01(rng);
            const double beta = 2 * kPi * u01(rng);
            const Vec3 p = m.embed(alpha, beta);
            double a2 = 0.0, b2 = 0.0;
            m.angles_from_point(p, a2, b2);
            CHECK(point_distance(p, m.embed(a2, b2)) < 1e-12);
            CHECK(a2 >= 0.0);
            CHECK(b2 >= 0.0);
            CHECK(b2 < 2 * kPi);
        }
    }
}

TEST_CASE("closest pair of the tetrahedron is the common edge length") {
    const Configuration tetra = testutil::tetrahedron();
    const SeparationReport rep = min_separation(tetra);
    CHECK(rep.min_sep == Approx(testutil::kTetraSep).epsilon(1e-12));
    CHECK(rep.i >= 0);
    CHECK(rep.j > rep.i);
    CHECK(rep.j < 4);
}

TEST_CASE("coincident points are reported as degenerate") {
    Configuration c;
    c.manifold = Manifold::sphere();
    c.params = {1.0, 2.0, 1.0, 2.0};  // same point twice
    CHECK_THROWS_AS(min_separation(c), DegenerateConfiguration);
}

TEST_CASE("random configurations are reproducible and well separated") {
    const Manifold s = Manifold::sphere();
    const Configuration a = random_config(s, 40, 977);
    const Configuration b = random_config(s, 40, 977);
    const Configuration c = random_config(s, 40, 978);
    CHECK(a.params == b.params);  // bitwise determinism in the seed
    CHECK(a.params != c.params);
    CHECK(a.n() == 40);

    for (Vec3 p : embed(a)) CHECK(p.norm() == Approx(1.0).epsilon(1e-12));
    const double floor = 0.5 * std::sqrt(s.area() / 40.0);
    CHECK(min_separation(a).min_sep >= floor);
}

TEST_CASE("random torus configurations respect the separation floor") {
    const Manifold t = Manifold::torus(2.0, 0.5);
    const Configuration c = random_config(t, 30, 41);
    const double floor = 0.5 * std::sqrt(t.area() / 30.0);
    CHECK(min_separation(c).min_sep >= floor);
    // every point must actually lie on the torus
    for (Vec3 p : embed(c)) {
        const double ring = std::hypot(std::hypot(p.x, p.y) - 2.0, p.z);
        CHECK(ring == Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("an impossible separation demand fails with the attempt count") {
    // Four unit-sphere points cannot all be farther apart than the
    // tetrahedron edge, so a demand above it must exhaust the budget.
    try {
        random_config(Manifold::sphere(), 4, 1, 0.99);
        FAIL("expected the separation demand to be unreachable");
    } catch (const InitFailure& e) {
        CHECK(e.attempts >= 10000);
    }
}

TEST_CASE("pole admissibility tracks the polar angle band") {
    Configuration c;
    c.manifold = Manifold::sphere();
    c.params = {1e-5, 0.3, kPi / 2, 1.0};
    CHECK_FALSE(pole_admissible(c, 1e-4));
    CHECK_FALSE(pole_admissible(c, 1e-3));
    c.params[0] = 0.5;
    CHECK(pole_admissible(c, 1e-3));
    // torus has no coordinate singularity
    Configuration t;
    t.manifold = Manifold::torus(3.0, 1.0);
    t.params = {0.0, 0.0, 1.0, 1.0};
    CHECK(pole_admissible(t, 1e-3));
}

TEST_CASE("alignment rotates pole-grazing points into the safe band") {
    Configuration c;
    c.manifold = Manifold::sphere();
    c.params = {1e-5, 0.0,  kPi / 2, 0.4, kPi / 2, 2.0, kPi - 1e-5, 1.0};
    const double sep_before = min_separation(c).min_sep;

    const Configuration aligned = canonical_align(c);
    CHECK(pole_admissible(aligned, 1e-3));
    // a rigid rotation preserves all pairwise distances
    CHECK(min_separation(aligned).min_sep == Approx(sep_before).epsilon(1e-12));
}

TEST_CASE("alignment leaves admissible configurations untouched") {
    const Configuration tetra = testutil::tetrahedron();
    const Configuration aligned = canonical_align(tetra);
    CHECK(aligned.params == tetra.params);  // bitwise
}

TEST_CASE("alignment wraps torus angles into the principal window") {
    Configuration c;
    c.manifold = Manifold::torus(3.0, 1.0);
    c.params = {-0.5, 7.0, 2 * kPi + 0.25, -kPi};
    const Configuration w = canonical_align(c);
    for (double p : w.params) {
        CHECK(p >= 0.0);
        CHECK(p < 2 * kPi);
    }
    CHECK(w.params[0] == Approx(2 * kPi - 0.5).epsilon(1e-14));
    CHECK(w.params[2] == Approx(0.25).epsilon(1e-12));
}
