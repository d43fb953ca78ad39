#include "rieszlab/manifold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rieszlab/rng.hpp"

namespace rieszlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

// Rotation matrix from a unit quaternion (w, x, y, z).
struct Mat3 {
    std::array<double, 9> m;  // row major
    Vec3 apply(Vec3 v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
};

Mat3 quat_to_matrix(double w, double x, double y, double z) {
    return Mat3{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
                 2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                 2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

// Uniform random rotation (Shoemake's subgroup algorithm).
Mat3 random_rotation(detail::Rng& rng) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    return quat_to_matrix(a * std::sin(kTwoPi * u2), a * std::cos(kTwoPi * u2),
                          b * std::sin(kTwoPi * u3), b * std::cos(kTwoPi * u3));
}

}  // namespace

Manifold Manifold::torus(double major_radius, double minor_radius) {
    if (!(major_radius > minor_radius) || !(minor_radius > 0.0))
        throw std::domain_error("torus requires major_radius > minor_radius > 0");
    return Manifold(ManifoldKind::Torus, major_radius, minor_radius);
}

double Manifold::area() const {
    if (is_sphere()) return 4.0 * kPi;
    return 4.0 * kPi * kPi * l_ * a_;
}

Vec3 Manifold::embed(double alpha, double beta) const {
    if (is_sphere()) {
        const double st = std::sin(alpha), ct = std::cos(alpha);
        return {st * std::cos(beta), st * std::sin(beta), ct};
    }
    const double rho = l_ + a_ * std::cos(beta);
    return {rho * std::cos(alpha), rho * std::sin(alpha), a_ * std::sin(beta)};
}

void Manifold::angles_from_point(Vec3 p, double& alpha, double& beta) const {
    if (is_sphere()) {
        alpha = std::atan2(std::hypot(p.x, p.y), p.z);  // in [0, pi]
        beta = wrap_2pi(std::atan2(p.y, p.x));
        return;
    }
    const double rho = std::hypot(p.x, p.y);
    alpha = wrap_2pi(std::atan2(p.y, p.x));
    beta = wrap_2pi(std::atan2(p.z / a_, (rho - l_) / a_));
}

std::vector<Vec3> embed(const Configuration& config) {
    std::vector<Vec3> pts(static_cast<std::size_t>(config.n()));
    for (int i = 0; i < config.n(); ++i)
        pts[static_cast<std::size_t>(i)] = config.manifold.embed(config.alpha(i), config.beta(i));
    return pts;
}

SeparationReport min_separation(const Configuration& config) {
    const auto pts = embed(config);
    const int n = config.n();
    if (n < 2) throw std::invalid_argument("min_separation requires at least 2 points");
    SeparationReport rep;
    double best2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).squared_norm();
            if (d2 < best2) {
                best2 = d2;
                rep.i = i;
                rep.j = j;
            }
        }
    }
    rep.min_sep = std::sqrt(best2);
    if (rep.min_sep <= 1e-14)
        throw DegenerateConfiguration("coincident points " + std::to_string(rep.i) + " and " +
                                      std::to_string(rep.j));
    return rep;
}

Configuration random_config(const Manifold& manifold, int n, std::uint64_t seed,
                            double sep_factor) {
    if (n < 1) throw std::invalid_argument("random_config requires n >= 1");
    if (sep_factor < 0.0) throw std::invalid_argument("sep_factor must be >= 0");

    detail::Rng rng(detail::mix_seed(seed));
    const double dmin = sep_factor * std::sqrt(manifold.area() / n);
    const double dmin2 = dmin * dmin;
    const long budget = std::max<long>(10000, 1000L * n);

    Configuration config;
    config.manifold = manifold;
    config.params.reserve(2 * static_cast<std::size_t>(n));
    std::vector<Vec3> accepted;
    accepted.reserve(static_cast<std::size_t>(n));

    long attempts = 0;
    while (static_cast<int>(accepted.size()) < n) {
        if (attempts >= budget)
            throw InitFailure("random_config: separation " + std::to_string(dmin) +
                                  " unreachable after " + std::to_string(attempts) + " attempts",
                              attempts);
        ++attempts;

        double alpha, beta;
        if (manifold.is_sphere()) {
            // cos(theta) uniform in [-1, 1) gives the area-uniform law.
            alpha = std::acos(1.0 - 2.0 * rng.uniform());
            beta = kTwoPi * rng.uniform();
        } else {
            // u is uniform; v needs rejection against the radial weight
            // rho(v)/(l+a) <= 1 so that the surface measure is uniform.
            alpha = kTwoPi * rng.uniform();
            const double l = manifold.major_radius(), a = manifold.minor_radius();
            for (;;) {
                beta = kTwoPi * rng.uniform();
                if (rng.uniform() * (l + a) <= l + a * std::cos(beta)) break;
            }
        }

        const Vec3 p = manifold.embed(alpha, beta);
        bool ok = true;
        for (const Vec3& q : accepted) {
            if ((p - q).squared_norm() < dmin2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        accepted.push_back(p);
        config.params.push_back(alpha);
        config.params.push_back(beta);
    }
    return config;
}

bool pole_admissible(const Configuration& config, double band) {
    if (!config.manifold.is_sphere()) return true;
    for (int i = 0; i < config.n(); ++i) {
        // |sin(theta)| is the distance scale to the nearer pole and keeps
        // working even if an optimizer step pushed theta outside [0, pi].
        if (std::fabs(std::sin(config.alpha(i))) < std::sin(band)) return false;
    }
    return true;
}

Configuration canonical_align(const Configuration& config) {
    constexpr double kBand = 1e-3;

    if (!config.manifold.is_sphere()) {
        Configuration out = config;
        for (double& x : out.params) x = wrap_2pi(x);
        return out;
    }
    if (pole_admissible(config, kBand)) return config;

    const auto pts = embed(config);
    const double sin_band = std::sin(kBand);

    // The rotation search is seeded from n only, so alignment is a pure
    // function of the input configuration.
    detail::Rng rng(detail::mix_seed(0x616c69676eull ^ static_cast<std::uint64_t>(config.n())));
    double closest = 0.0;
    for (int attempt = 0; attempt < 256; ++attempt) {
        const Mat3 rot = random_rotation(rng);
        double worst = std::numeric_limits<double>::infinity();
        for (const Vec3& p : pts) {
            const Vec3 q = rot.apply(p);
            worst = std::min(worst, std::hypot(q.x, q.y));
        }
        closest = std::max(closest, worst);
        if (worst >= sin_band) {
            Configuration out;
            out.manifold = config.manifold;
            out.params.resize(config.params.size());
            for (int i = 0; i < config.n(); ++i) {
                double alpha, beta;
                config.manifold.angles_from_point(rot.apply(pts[static_cast<std::size_t>(i)]), alpha, beta);
                out.params[2 * static_cast<std::size_t>(i)] = alpha;
                out.params[2 * static_cast<std::size_t>(i) + 1] = beta;
            }
            return out;
        }
    }
    throw AlignmentError("canonical_align: no admissible rotation in 256 attempts; closest "
                         "pole approach " + std::to_string(std::asin(std::min(1.0, closest))),
                         std::asin(std::min(1.0, closest)));
}

}  // namespace rieszlab
