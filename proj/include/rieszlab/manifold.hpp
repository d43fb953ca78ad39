#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rieszlab/errors.hpp"

namespace rieszlab {

// ---------------------------------------------------------------------------
// Small 3-vector used throughout; value semantics, no dependencies.
// ---------------------------------------------------------------------------
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend Vec3 operator*(Vec3 a, double s) { return s * a; }
    friend Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    Vec3& operator+=(Vec3 b) { x += b.x; y += b.y; z += b.z; return *this; }
    Vec3& operator-=(Vec3 b) { x -= b.x; y -= b.y; z -= b.z; return *this; }

    double dot(Vec3 b) const { return x * b.x + y * b.y + z * b.z; }
    Vec3 cross(Vec3 b) const {
        return {y * b.z - z * b.y, z * b.x - x * b.z, x * b.y - y * b.x};
    }
    double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }
    Vec3 normalized() const { return *this / norm(); }
};

// ---------------------------------------------------------------------------
// Surfaces: the unit sphere and the ring torus.
//
// Parametrizations (angles alpha, beta per point):
//   sphere:  alpha = polar angle theta in [0, pi], beta = azimuth phi in
//            [0, 2*pi);  x = (sin t cos p, sin t sin p, cos t).
//   torus:   alpha = u (around the hole), beta = v (around the tube), both
//            in [0, 2*pi);  with rho = l + a*cos(v),
//            x = (rho cos u, rho sin u, a sin v),  l > a > 0.
// ---------------------------------------------------------------------------
enum class ManifoldKind { Sphere, Torus };

class Manifold {
public:
    static Manifold sphere() { return Manifold(ManifoldKind::Sphere, 0.0, 0.0); }
    static Manifold torus(double major_radius, double minor_radius);

    ManifoldKind kind() const { return kind_; }
    bool is_sphere() const { return kind_ == ManifoldKind::Sphere; }
    double major_radius() const { return l_; }  // torus only
    double minor_radius() const { return a_; }  // torus only

    // Dimension of the rigid symmetry group acting on configurations:
    // 3 rotational degrees of freedom for the sphere, 1 (rotation about the
    // axis) for the torus.  These show up as exact zero modes of the Hessian.
    int rigid_symmetry_dim() const { return is_sphere() ? 3 : 1; }

    // Surface area: 4*pi for the sphere, 4*pi^2*l*a for the torus.
    double area() const;

    // Embed one parameter pair into R^3.
    Vec3 embed(double alpha, double beta) const;

    // Recover (alpha, beta) from a point assumed to lie on the surface.
    // The result is normalized into the canonical domains above.
    void angles_from_point(Vec3 p, double& alpha, double& beta) const;

    friend bool operator==(const Manifold& a, const Manifold& b) {
        return a.kind_ == b.kind_ && a.l_ == b.l_ && a.a_ == b.a_;
    }

private:
    Manifold(ManifoldKind k, double l, double a) : kind_(k), l_(l), a_(a) {}
    ManifoldKind kind_;
    double l_, a_;
};

// A point set given in surface parameters, stored interleaved:
// params = (alpha_0, beta_0, alpha_1, beta_1, ...), size 2*n.
struct Configuration {
    Manifold manifold = Manifold::sphere();
    std::vector<double> params;

    int n() const { return static_cast<int>(params.size() / 2); }
    double alpha(int i) const { return params[2 * static_cast<std::size_t>(i)]; }
    double beta(int i) const { return params[2 * static_cast<std::size_t>(i) + 1]; }
};

struct SeparationReport {
    double min_sep = 0.0;  // smallest pairwise Euclidean distance
    int i = -1, j = -1;    // indices of the closest pair
};

// Embed every point of a configuration.
std::vector<Vec3> embed(const Configuration& config);

// Closest pair over all points (Euclidean, O(n^2)).  Throws
// DegenerateConfiguration if two points coincide to within 1e-14.
SeparationReport min_separation(const Configuration& config);

// Draw n area-uniform points whose pairwise Euclidean separation is at least
// sep_factor * sqrt(area / n).  Candidates violating the separation are
// rejected and redrawn; if the attempt budget max(10000, 1000*n) runs out an
// InitFailure carrying the attempt count is thrown.  Deterministic in seed.
Configuration random_config(const Manifold& manifold, int n, std::uint64_t seed,
                            double sep_factor = 0.5);

// True when every sphere point keeps min(theta, pi - theta) >= band; always
// true on the torus (its parametrization has no coordinate singularity).
bool pole_admissible(const Configuration& config, double band);

// Rotate a sphere configuration so every point stays at least 1e-3 rad away
// from both poles.  Already-admissible inputs are returned unchanged.  The
// rotation search is seeded deterministically from n; after 256 failed
// attempts an AlignmentError reporting the closest approach is thrown.
// Torus configurations are returned with angles wrapped into [0, 2*pi).
Configuration canonical_align(const Configuration& config);

}  // namespace rieszlab
