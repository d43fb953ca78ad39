#include "rieszlab/energy.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rieszlab/parallel.hpp"

namespace rieszlab {

namespace {

constexpr double kPoleGuard = 1e-4;  // radians; see gradient() contract

// k(r) written in terms of r^2, specialized for the common integer
// exponents so the O(n^2) inner loops avoid pow().
inline double kernel_r2(double s, double r2) {
    if (s == 0.0) return -0.5 * std::log(r2);
    if (s == 1.0) return 1.0 / std::sqrt(r2);
    if (s == 2.0) return 1.0 / r2;
    if (s == 3.0) return 1.0 / (r2 * std::sqrt(r2));
    if (s == 4.0) return 1.0 / (r2 * r2);
    return std::pow(r2, -0.5 * s);
}

// w(r) = k'(r)/r as a function of r^2:
//   s > 0:  w = -s * r^(-s-2)
//   s == 0: w = -r^(-2)
inline double w_of_r2(double s, double r2) {
    if (s == 0.0) return -1.0 / r2;
    return -s * kernel_r2(s + 2.0, r2);
}

// (k''(r) - k'(r)/r) / r^2, the coefficient of the rank-one part of the
// pair Hessian:
//   s > 0:  s*(s+2) * r^(-s-4)
//   s == 0: 2 * r^(-4)
inline double w2_of_r2(double s, double r2) {
    if (s == 0.0) return 2.0 / (r2 * r2);
    return s * (s + 2.0) * kernel_r2(s + 4.0, r2);
}

void check_separation(const std::vector<Vec3>& pts) {
    // The energy itself detects coincidence through the pair loop; this
    // helper exists for the n < 2 edge and self-coincidence diagnostics.
    if (pts.size() < 2) throw std::invalid_argument("energy requires at least 2 points");
}

[[noreturn]] void throw_coincident(int i, int j) {
    throw DegenerateConfiguration("coincident points " + std::to_string(i) + " and " +
                                  std::to_string(j));
}

// First and second derivatives of the embedding with respect to the two
// surface parameters of a single point.
struct ChartFrame {
    Vec3 x;                     // the point
    Vec3 t[2];                  // d x / d alpha, d x / d beta
    Vec3 dd[2][2];              // second derivatives, dd[a][b] symmetric
};

ChartFrame chart_frame(const Manifold& m, double alpha, double beta) {
    ChartFrame f;
    if (m.is_sphere()) {
        const double st = std::sin(alpha), ct = std::cos(alpha);
        const double sp = std::sin(beta), cp = std::cos(beta);
        f.x = {st * cp, st * sp, ct};
        f.t[0] = {ct * cp, ct * sp, -st};
        f.t[1] = {-st * sp, st * cp, 0.0};
        f.dd[0][0] = {-st * cp, -st * sp, -ct};
        f.dd[0][1] = {-ct * sp, ct * cp, 0.0};
        f.dd[1][1] = {-st * cp, -st * sp, 0.0};
    } else {
        const double l = m.major_radius(), a = m.minor_radius();
        const double su = std::sin(alpha), cu = std::cos(alpha);
        const double sv = std::sin(beta), cv = std::cos(beta);
        const double rho = l + a * cv;
        f.x = {rho * cu, rho * su, a * sv};
        f.t[0] = {-rho * su, rho * cu, 0.0};
        f.t[1] = {-a * sv * cu, -a * sv * su, a * cv};
        f.dd[0][0] = {-rho * cu, -rho * su, 0.0};
        f.dd[0][1] = {a * sv * su, -a * sv * cu, 0.0};
        f.dd[1][1] = {-a * cv * cu, -a * cv * su, -a * sv};
    }
    f.dd[1][0] = f.dd[0][1];
    return f;
}

void require_pole_clearance(const Configuration& config) {
    if (pole_admissible(config, kPoleGuard)) return;
    throw AlignmentRequired("derivative evaluation inside the pole guard band; re-align first");
}

}  // namespace

double kernel(RieszParam param, double r) {
    if (!(r > 0.0)) throw std::domain_error("kernel requires r > 0");
    return kernel_r2(param.s, r * r);
}

EnergyBreakdown total_energy(const Configuration& config, RieszParam param) {
    const auto pts = embed(config);
    check_separation(pts);
    const int n = config.n();
    const double s = param.s;

    EnergyBreakdown out;
    out.point_energies.assign(static_cast<std::size_t>(n), 0.0);

    // Each row U_i is reduced independently with an exact accumulator, so the
    // row values do not depend on how rows are distributed over threads.
    std::atomic<int> degenerate_i{-1}, degenerate_j{-1};
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        BinnedAccumulator acc;
        for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
            if (j == i) continue;
            const double r2 = (pts[i] - pts[j]).squared_norm();
            if (r2 <= 1e-28) {
                degenerate_i.store(static_cast<int>(i));
                degenerate_j.store(static_cast<int>(j));
                return;
            }
            acc.add(kernel_r2(s, r2));
        }
        out.point_energies[i] = acc.value();
    });
    if (degenerate_i.load() >= 0) throw_coincident(degenerate_i.load(), degenerate_j.load());

    out.total = binned_sum(out.point_energies);
    return out;
}

double plain_energy(const Configuration& config, RieszParam param) {
    const auto pts = embed(config);
    check_separation(pts);
    const int n = config.n();
    const double s = param.s;

    double sum = 0.0, comp = 0.0;  // Kahan compensation
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r2 =
                (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).squared_norm();
            if (r2 <= 1e-28) throw_coincident(i, j);
            const double term = 2.0 * kernel_r2(s, r2);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

std::vector<double> gradient(const Configuration& config, RieszParam param) {
    require_pole_clearance(config);
    const int n = config.n();
    const double s = param.s;

    std::vector<ChartFrame> frames(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        frames[static_cast<std::size_t>(i)] =
            chart_frame(config.manifold, config.alpha(i), config.beta(i));

    std::vector<double> grad(2 * static_cast<std::size_t>(n), 0.0);
    std::atomic<int> degenerate_i{-1}, degenerate_j{-1};
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double ga = 0.0, gb = 0.0;
        for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
            if (j == i) continue;
            const Vec3 d = frames[i].x - frames[j].x;
            const double r2 = d.squared_norm();
            if (r2 <= 1e-28) {
                degenerate_i.store(static_cast<int>(i));
                degenerate_j.store(static_cast<int>(j));
                return;
            }
            const double w = w_of_r2(s, r2);
            ga += w * d.dot(frames[i].t[0]);
            gb += w * d.dot(frames[i].t[1]);
        }
        grad[2 * i] = 2.0 * ga;      // ordered-pair convention doubles each term
        grad[2 * i + 1] = 2.0 * gb;
    });
    if (degenerate_i.load() >= 0) throw_coincident(degenerate_i.load(), degenerate_j.load());
    return grad;
}

Eigen::MatrixXd hessian(const Configuration& config, RieszParam param) {
    require_pole_clearance(config);
    const int n = config.n();
    const double s = param.s;

    std::vector<ChartFrame> frames(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        frames[static_cast<std::size_t>(i)] =
            chart_frame(config.manifold, config.alpha(i), config.beta(i));

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);

    // Off-diagonal blocks (one per unordered point pair) and the pair's
    // additive contribution to both same-point blocks.
    for (int i = 0; i < n; ++i) {
        const ChartFrame& fi = frames[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            const ChartFrame& fj = frames[static_cast<std::size_t>(j)];
            const Vec3 d = fi.x - fj.x;
            const double r2 = d.squared_norm();
            if (r2 <= 1e-28) throw_coincident(i, j);
            const double w = w_of_r2(s, r2);
            const double w2 = w2_of_r2(s, r2);

            const double dti[2] = {d.dot(fi.t[0]), d.dot(fi.t[1])};
            const double dtj[2] = {d.dot(fj.t[0]), d.dot(fj.t[1])};

            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    // cross block: 2 * (-w2 (d.t_i^a)(d.t_j^b) - w (t_i^a . t_j^b))
                    const double cross =
                        2.0 * (-w2 * dti[a] * dtj[b] - w * fi.t[a].dot(fj.t[b]));
                    H(2 * i + a, 2 * j + b) = cross;
                    H(2 * j + b, 2 * i + a) = cross;
                }
            }
            for (int a = 0; a < 2; ++a) {
                for (int b = a; b < 2; ++b) {
                    // same-point blocks accumulate over the neighbor sum:
                    // 2 * (w2 (d.t^a)(d.t^b) + w (t^a . t^b) + w (d . dd^{ab}))
                    const double ii = 2.0 * (w2 * dti[a] * dti[b] + w * fi.t[a].dot(fi.t[b]) +
                                             w * d.dot(fi.dd[a][b]));
                    // for point j the difference vector flips sign; the
                    // rank-one and metric terms are even, the dd term odd
                    const double jj = 2.0 * (w2 * dtj[a] * dtj[b] + w * fj.t[a].dot(fj.t[b]) -
                                             w * d.dot(fj.dd[a][b]));
                    H(2 * i + a, 2 * i + b) += ii;
                    if (a != b) H(2 * i + b, 2 * i + a) += ii;
                    H(2 * j + a, 2 * j + b) += jj;
                    if (a != b) H(2 * j + b, 2 * j + a) += jj;
                }
            }
        }
    }
    return H;
}

}  // namespace rieszlab
