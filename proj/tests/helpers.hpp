#pragma once

// Shared fixtures for the unit tests: exact reference configurations, frozen
// reference values computed with independent high-precision tools, and small
// geometry utilities.  Everything here is test-only.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "rieszlab/manifold.hpp"

namespace testutil {

using rieszlab::Configuration;
using rieszlab::Manifold;
using rieszlab::Vec3;

// ---------------------------------------------------------------------------
// Frozen reference values.  Sources are independent of the library code:
// closed forms where available, otherwise 30-digit arbitrary-precision
// evaluations rounded to double.
// ---------------------------------------------------------------------------

// Regular tetrahedron inscribed in the unit sphere: all six pairwise
// distances are sqrt(8/3).  Energies over ordered pairs (12 of them).
inline constexpr double kTetraSep = 1.6329931618554520655;  // sqrt(8/3)
inline constexpr double kTetraE0 = -5.8849755180703574211;  // -12*log(sqrt(8/3))
inline constexpr double kTetraE1 = 7.3484692283495342946;   // 12*sqrt(3/8)
inline constexpr double kTetraE2 = 4.5;                     // 12*(3/8)
inline constexpr double kTetraE3 = 2.7556759606310753605;   // 12*(3/8)^(3/2)

// Regular icosahedron inscribed in the unit sphere (132 ordered pairs).
inline constexpr double kIcoE0 = -43.212290460889769605;
inline constexpr double kIcoE1 = 98.330506115257602077;
inline constexpr double kIcoE2 = 78.0;
inline constexpr double kIcoE3 = 65.298810626402994914;

// Zeta and L-function values.
inline constexpr double kZetaHalf = -1.4603545088095868129;        // zeta(1/2)
inline constexpr double kZetaThreeHalves = 2.6123753486854883433;  // zeta(3/2)
inline constexpr double kLHalf = 0.48086755769682862618;           // L3(1/2)
inline constexpr double kLOne = 0.60459978807807261686;            // pi/sqrt(27)
inline constexpr double kLThreeHalves = 0.70396824486873326167;    // L3(3/2)
inline constexpr double kLTwo = 0.78130241289648629687;            // L3(2)

// Triangular-lattice zeta values (6 * zeta(s/2) * L3(s/2)).
inline constexpr double kHexOne = -4.21342263613690689;
inline constexpr double kHexThree = 11.034175734914809768;
inline constexpr double kHexFour = 7.7111457329048964175;
inline constexpr double kHexSix = 6.3758815528298469067;

// Screened lattice constant (half of the lattice zeta at exponent 1).
inline constexpr double kScreenedLattice = -2.106711318068453445;

// Surface-correction coefficients.
inline constexpr double kSurfaceCoefOne = -1.1061025867151903736;
inline constexpr double kLeadingCoefThree = 0.1996278125466281042;

// Ring-torus capacitary energies for (major, minor) radius pairs.
inline constexpr double kRingEnergy_15_1 = 0.47825526366953;
inline constexpr double kRingEnergy_2_1 = 0.41123994225477;
inline constexpr double kRingEnergy_3_1 = 0.323438867490233;

// Half-odd-degree Legendre pairs P_{n-1/2}(z), Q_{n-1/2}(z), 20 digits.
struct LegendreRef {
    int n;
    double z;
    double P;
    double Q;
};
inline constexpr LegendreRef kLegendreTable[] = {
    {0, 1.5, 0.945006330929758054, 2.0189058199784232156},
    {1, 1.5, 1.1746724294455385146, 0.39317514837200473104},
    {2, 1.5, 2.0343427485811576779, 0.11338169008453505689},
    {8, 1.5, 300.92213146287868489, 0.00018607013040078070279},
    {0, 2.0, 0.90128629936044729874, 1.6566381702365941664},
    {1, 2.0, 1.3291381621853577556, 0.22401429283641563704},
    {2, 2.0, 3.2439396660408049155, 0.045158724151576976637},
    {8, 2.0, 4108.3045440898242684, 8.7891460374400615386e-6},
    {0, 3.0, 0.83462684167407318628, 1.3110287771460599052},
    {1, 3.0, 1.5973866051758863743, 0.11288854241046769779},
    {2, 3.0, 6.1113374734788544353, 0.014544577259850822759},
    {8, 3.0, 113568.4981339992821, 1.9461899387186309928e-7},
};

// ---------------------------------------------------------------------------
// Reference configurations.
// ---------------------------------------------------------------------------

inline Configuration from_points(const Manifold& m, const std::vector<Vec3>& pts) {
    Configuration c;
    c.manifold = m;
    c.params.reserve(2 * pts.size());
    for (Vec3 p : pts) {
        double alpha = 0.0, beta = 0.0;
        m.angles_from_point(p, alpha, beta);
        c.params.push_back(alpha);
        c.params.push_back(beta);
    }
    return c;
}

inline Configuration tetrahedron() {
    const double t = 1.0 / std::sqrt(3.0);
    return from_points(Manifold::sphere(),
                       {{t, t, t}, {t, -t, -t}, {-t, t, -t}, {-t, -t, t}});
}

inline Configuration octahedron() {
    return from_points(Manifold::sphere(), {{1, 0, 0},
                                            {-1, 0, 0},
                                            {0, 1, 0},
                                            {0, -1, 0},
                                            {0, 0, 1},
                                            {0, 0, -1}});
}

inline std::vector<Vec3> icosahedron_points() {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    const double r = std::sqrt(1.0 + phi * phi);
    std::vector<Vec3> pts;
    for (double a : {1.0, -1.0})
        for (double b : {phi, -phi}) {
            pts.push_back(Vec3{0.0, a, b} / r);
            pts.push_back(Vec3{a, b, 0.0} / r);
            pts.push_back(Vec3{b, 0.0, a} / r);
        }
    return pts;
}

inline Configuration icosahedron() {
    return from_points(Manifold::sphere(), icosahedron_points());
}

// Four points on the equator: a critical point of every pair energy, but a
// saddle (collapsing toward the tetrahedron lowers the energy).
inline Configuration equatorial_square() {
    Configuration c;
    c.manifold = Manifold::sphere();
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < 4; ++k) {
        c.params.push_back(pi / 2);
        c.params.push_back(k * pi / 2);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Random rigid rotations.
// ---------------------------------------------------------------------------

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 apply(const Mat3& R, Vec3 p) {
    return {R[0][0] * p.x + R[0][1] * p.y + R[0][2] * p.z,
            R[1][0] * p.x + R[1][1] * p.y + R[1][2] * p.z,
            R[2][0] * p.x + R[2][1] * p.y + R[2][2] * p.z};
}

// Uniformly random rotation from a normalized Gaussian quaternion.
inline Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double w = gauss(rng), x = gauss(rng), y = gauss(rng), z = gauss(rng);
    const double q = std::sqrt(w * w + x * x + y * y + z * z);
    w /= q;
    x /= q;
    y /= q;
    z /= q;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

// Rotate a sphere configuration rigidly (parameters recomputed from the
// rotated points).
inline Configuration rotated(const Configuration& config, const Mat3& R) {
    std::vector<Vec3> pts = rieszlab::embed(config);
    for (Vec3& p : pts) p = apply(R, p);
    return from_points(config.manifold, pts);
}

}  // namespace testutil
