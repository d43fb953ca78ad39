#include "rieszlab/torus_measure.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rieszlab/constants.hpp"
#include "rieszlab/parallel.hpp"

namespace rieszlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double agm(double x, double y) {
    // Arithmetic-geometric mean for nonnegative arguments; quadratic
    // convergence once the magnitudes meet (the geometric mean closes the
    // exponent gap by half per iteration first).
    if (y == 0.0 || x == 0.0) return 0.0;
    for (int i = 0; i < 120; ++i) {
        const double ax = 0.5 * (x + y);
        const double gx = std::sqrt(x * y);
        if (std::fabs(ax - gx) <= 1e-17 * ax) return 0.5 * (ax + gx);
        x = ax;
        y = gx;
    }
    return 0.5 * (x + y);
}

// Complete elliptic integrals K(k), E(k).  Both the modulus k and the
// complement kp are passed exactly by the caller, which avoids forming
// sqrt(1 - k^2) where k is close to 1.
void elliptic_ke(double k, double kp, double& K, double& E) {
    double a = 1.0, b = kp, c = k;
    double sum = 0.5 * c * c;  // 2^(n-1) c_n^2 starting at n = 0
    double pow2 = 0.5;
    // Stop at the rounding floor: a and b can stay a last ulp apart forever
    // (c never reaches zero), and every extra lap doubles pow2 against a
    // noise-level c, polluting the E sum.
    const double floor_c = 4.0 * std::numeric_limits<double>::epsilon();
    for (int i = 0; i < 40 && std::fabs(c) > floor_c * a; ++i) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    K = kPi / (2.0 * a);
    E = K * (1.0 - sum);
}

// Seeds of the half-odd-degree Legendre family at z > 1 in terms of
// complete elliptic integrals with modulus k, k^2 = (z-1)/(z+1):
//   P_{-1/2} = (2/pi) sqrt(2/(z+1)) K(k)
//   P_{+1/2} = (2/pi) [ sqrt(2(z+1)) E(k) - sqrt(2/(z+1)) K(k) ]
//   Q_{-1/2} = sqrt(2/(z+1)) K(k')
//   Q_{+1/2} = z sqrt(2/(z+1)) K(k') - sqrt(2(z+1)) E(k')
struct Seeds {
    double P0, P1, Q0, Q1;
};

Seeds toroidal_seeds(double z) {
    const double k2 = (z - 1.0) / (z + 1.0);
    const double kp2 = 2.0 / (z + 1.0);
    const double k = std::sqrt(k2), kp = std::sqrt(kp2);
    double K, E, Kc, Ec;
    elliptic_ke(k, kp, K, E);    // modulus k
    elliptic_ke(kp, k, Kc, Ec);  // modulus k' (complement swaps roles)
    const double s_small = std::sqrt(kp2);          // sqrt(2/(z+1))
    const double s_big = std::sqrt(2.0 * (z + 1.0));
    Seeds s;
    s.P0 = (2.0 / kPi) * s_small * K;
    s.P1 = (2.0 / kPi) * (s_big * E - s_small * K);
    s.Q0 = s_small * Kc;
    s.Q1 = z * s_small * Kc - s_big * Ec;
    return s;
}

// Sequences are carried as mantissa * 2^exp2 so the three-term recurrence
// can run to arbitrary degree without overflow or underflow.
struct ScaledSeq {
    std::vector<double> mant;
    std::vector<long> exp2;
};

constexpr double kRescaleLimit = 0x1p512;

// Forward recurrence for the first kind (dominant direction upward):
//   (n + 1/2) f_{n+1} = 2 n z f_n - (n - 1/2) f_{n-1}.
ScaledSeq p_sequence(int nmax, double z, const Seeds& seeds) {
    ScaledSeq out;
    out.mant.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    out.exp2.assign(static_cast<std::size_t>(nmax) + 1, 0);
    out.mant[0] = seeds.P0;
    if (nmax >= 1) out.mant[1] = seeds.P1;
    double prev = seeds.P0, cur = seeds.P1;
    long off = 0;
    for (int n = 1; n < nmax; ++n) {
        double next = (2.0 * n * z * cur - (n - 0.5) * prev) / (n + 0.5);
        if (std::fabs(next) > kRescaleLimit) {
            next = std::scalbn(next, -512);
            cur = std::scalbn(cur, -512);
            off += 512;
        }
        prev = cur;
        cur = next;
        out.mant[static_cast<std::size_t>(n) + 1] = cur;
        out.exp2[static_cast<std::size_t>(n) + 1] = off;
    }
    return out;
}

// Backward recurrence with normalization for the second kind, whose upward
// direction is the recessive one: start well above nmax with an arbitrary
// tail, run down (the wanted solution dominates downward), then scale the
// whole sequence so index 0 matches the elliptic-integral seed.
ScaledSeq q_sequence(int nmax, double z, const Seeds& seeds) {
    const double xi = z + std::sqrt((z - 1.0) * (z + 1.0));
    // The contamination of the start value decays like xi^(-2*extra); pick
    // extra so it lands below 1e-19.
    const int extra = std::clamp(
        static_cast<int>(std::ceil(19.0 * std::log(10.0) / (2.0 * std::log(xi)))) + 8, 16,
        200000);
    const int start = nmax + extra;

    std::vector<double> raw(static_cast<std::size_t>(nmax) + 1, 0.0);
    std::vector<long> roff(static_cast<std::size_t>(nmax) + 1, 0);

    double above = 0.0, cur = 1.0;  // g_{start+1} = 0, g_{start} = 1
    long off = 0;
    if (start <= nmax) throw std::logic_error("q_sequence: start offset too small");
    for (int n = start; n >= 1; --n) {
        double below = (2.0 * n * z * cur - (n + 0.5) * above) / (n - 0.5);
        if (std::fabs(below) > kRescaleLimit) {
            below = std::scalbn(below, -512);
            cur = std::scalbn(cur, -512);
            off += 512;
        }
        above = cur;
        cur = below;
        const int idx = n - 1;
        if (idx <= nmax) {
            raw[static_cast<std::size_t>(idx)] = cur;
            roff[static_cast<std::size_t>(idx)] = off;
        }
    }

    ScaledSeq out;
    out.mant.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    out.exp2.assign(static_cast<std::size_t>(nmax) + 1, 0);
    int e0 = 0;
    const double m0 = std::frexp(raw[0], &e0);
    for (int i = 0; i <= nmax; ++i) {
        int ei = 0;
        const double mi = std::frexp(raw[static_cast<std::size_t>(i)], &ei);
        out.mant[static_cast<std::size_t>(i)] = (mi / m0) * seeds.Q0;
        out.exp2[static_cast<std::size_t>(i)] =
            (ei - e0) + (roff[static_cast<std::size_t>(i)] - roff[0]);
    }
    return out;
}

double materialize(double mant, long e) {
    const int clamped = static_cast<int>(std::clamp<long>(e, -6000, 6000));
    return std::scalbn(mant, clamped);
}

// Q_n / P_n for n = 0..nmax; representable for all degrees because the ratio
// only decays (underflowing to zero long after the series below truncates).
std::vector<double> toroidal_ratios(int nmax, double z) {
    const Seeds seeds = toroidal_seeds(z);
    const ScaledSeq P = p_sequence(nmax, z, seeds);
    const ScaledSeq Q = q_sequence(nmax, z, seeds);
    std::vector<double> r(static_cast<std::size_t>(nmax) + 1);
    for (int i = 0; i <= nmax; ++i) {
        const long de = Q.exp2[static_cast<std::size_t>(i)] - P.exp2[static_cast<std::size_t>(i)];
        r[static_cast<std::size_t>(i)] = materialize(
            Q.mant[static_cast<std::size_t>(i)] / P.mant[static_cast<std::size_t>(i)], de);
    }
    return r;
}

// --- quadrature helpers -----------------------------------------------------

// 4- and 6-point Gauss-Legendre rules mapped to [-1/2, 1/2], weights
// normalized to sum 1 (i.e. cell averages).
constexpr double kG4X[4] = {-0.43056815579702629, -0.16999052179242813,
                            0.16999052179242813, 0.43056815579702629};
constexpr double kG4W[4] = {0.17392742256872692, 0.32607257743127305,
                            0.32607257743127305, 0.17392742256872692};
constexpr double kG6X[6] = {-0.46623475710157604, -0.33060469323313224,
                            -0.11930959304159845, 0.11930959304159845,
                            0.33060469323313224, 0.46623475710157604};
constexpr double kG6W[6] = {0.085662246189585178, 0.180380786524069303,
                            0.233956967286345524, 0.233956967286345524,
                            0.180380786524069303, 0.085662246189585178};

struct KernelContext {
    double l, a;
    double operator()(double v, double vp) const {
        // sqrt(A) and sqrt(A + B) computed without forming A = 4 a^2 sin^2
        // itself: quadrature nodes can sit so close to the diagonal that A
        // underflows while sqrt(A) is still an ordinary number.  The floor
        // keeps the AGM away from an exact zero; at 1e-300 the kernel value
        // is finite (~ log(1/sa)) and the quadrature weight out there is
        // negligible anyway.
        const double sa =
            std::max(2.0 * a * std::fabs(std::sin(0.5 * (v - vp))), 1e-300);
        const double rb =
            2.0 * std::sqrt((l + a * std::cos(v)) * (l + a * std::cos(vp)));
        return 1.0 / agm(std::hypot(sa, rb), sa);
    }
};

boost::math::quadrature::tanh_sinh<double>& thread_integrator() {
    thread_local boost::math::quadrature::tanh_sinh<double> integ;
    return integ;
}

// Cell-averaged entry for two cells whose midpoints differ by exactly
// c in {0, +delta}: integrate in the difference variable tau (log-singular
// as tau -> 0) against the tent-shaped overlap of the sum variable, with a
// 6-point Gauss average across the overlap at each tau.
//
//   entry = (1/delta^2) * Int_{tau in (c-delta, c+delta)}
//             (delta - |tau - c|) * avg_sigma k(sigma + tau/2, sigma - tau/2)
//
// sigma runs over an interval of width (delta - |tau - c|) centered at
// s0 = v_i - c/2 regardless of tau.  For c = 0 the integrand is even in tau;
// for c = +delta it vanishes linearly at the singular endpoint tau = 0 and
// has a kink at tau = c, so the range splits there.
double near_entry(const KernelContext& kern, double vi, double delta, bool diagonal) {
    const double c = diagonal ? 0.0 : delta;
    const double s0 = vi - 0.5 * c;
    auto h = [&](double tau) {
        const double width = delta - std::fabs(tau - c);
        double acc = 0.0;
        for (int q = 0; q < 6; ++q) {
            const double sigma = s0 + kG6X[q] * width;
            acc += kG6W[q] * kern(sigma + 0.5 * tau, sigma - 0.5 * tau);
        }
        return width * acc;
    };
    auto& integ = thread_integrator();
    double total;
    if (diagonal) {
        total = 2.0 * integ.integrate(h, 0.0, delta, 1e-10);
    } else {
        total = integ.integrate(h, 0.0, delta, 1e-10) +
                integ.integrate(h, delta, 2.0 * delta, 1e-10);
    }
    return total / (delta * delta);
}

// Cell-averaged entry for well-separated cells: tensor Gauss rule.
double smooth_entry(const KernelContext& kern, double vi, double vj, double delta) {
    double acc = 0.0;
    for (int p = 0; p < 4; ++p) {
        const double v = vi + kG4X[p] * delta;
        for (int q = 0; q < 4; ++q)
            acc += kG4W[p] * kG4W[q] * kern(v, vj + kG4X[q] * delta);
    }
    return acc;
}

}  // namespace

ToroidalFunctionPair toroidal_pq(int n, double z) {
    if (!(z > 1.0)) throw std::domain_error("toroidal_pq: requires z > 1");
    if (n < 0) throw std::domain_error("toroidal_pq: requires n >= 0");
    const Seeds seeds = toroidal_seeds(z);
    ToroidalFunctionPair out;
    out.n = n;
    out.z = z;
    if (n == 0) {
        out.P = seeds.P0;
        out.Q = seeds.Q0;
        return out;
    }
    if (n == 1) {
        out.P = seeds.P1;
        out.Q = seeds.Q1;
        return out;
    }
    const ScaledSeq P = p_sequence(n, z, seeds);
    const ScaledSeq Q = q_sequence(n, z, seeds);
    out.P = materialize(P.mant[static_cast<std::size_t>(n)], P.exp2[static_cast<std::size_t>(n)]);
    out.Q = materialize(Q.mant[static_cast<std::size_t>(n)], Q.exp2[static_cast<std::size_t>(n)]);
    if (std::isinf(out.P))
        throw std::overflow_error(
            "toroidal_pq: P exceeds the double range (internally scaled; "
            "request a smaller degree or use ratio-based quantities)");
    return out;
}

double landkof_energy(double l, double a) {
    if (!(l > a) || !(a > 0.0))
        throw std::domain_error("landkof_energy: requires l > a > 0");
    const double z = l / a;
    const double c = std::sqrt((l - a) * (l + a));
    const double xi = z + std::sqrt((z - 1.0) * (z + 1.0));

    // Ratio terms decay like xi^(-2n); size the series so the next term is
    // below the 1e-14 relative cutoff, then confirm while summing.
    int nmax = std::clamp(static_cast<int>(std::ceil(37.0 / (2.0 * std::log(xi)))) + 16, 8,
                          200000);
    for (int attempt = 0; attempt < 4; ++attempt) {
        const std::vector<double> r = toroidal_ratios(nmax, z);
        double b = r[0];
        for (int n = 1; n <= nmax; ++n) {
            const double term = 2.0 * r[static_cast<std::size_t>(n)];
            b += term;
            if (term < 1e-14 * b) return kPi / (2.0 * c * b);
        }
        nmax *= 2;
    }
    throw std::runtime_error("landkof_energy: ratio series failed to converge");
}

double revolution_kernel(double l, double a, double v, double vp) {
    if (!(l > a) || !(a > 0.0))
        throw std::domain_error("revolution_kernel: requires l > a > 0");
    const double sh = std::sin(0.5 * (v - vp));
    if (sh == 0.0)
        throw std::domain_error("revolution_kernel: coincident circles diverge");
    // Squared distance at angular offset phi is A + B sin^2(phi/2); the
    // average of the inverse distance over phi is then 1/agm(sqrt(A+B),
    // sqrt(A)) by the AGM form of the complete elliptic integral.
    return KernelContext{l, a}(v, vp);
}

double revolution_kernel_quadrature(double l, double a, double v, double vp) {
    if (!(l > a) || !(a > 0.0))
        throw std::domain_error("revolution_kernel_quadrature: requires l > a > 0");
    const double sh = std::sin(0.5 * (v - vp));
    if (sh == 0.0)
        throw std::domain_error("revolution_kernel_quadrature: coincident circles diverge");
    const double A = 4.0 * a * a * sh * sh;
    const double B = 4.0 * (l + a * std::cos(v)) * (l + a * std::cos(vp));
    auto f = [&](double phi) {
        const double s = std::sin(0.5 * phi);
        return 1.0 / std::sqrt(A + B * s * s);
    };
    return thread_integrator().integrate(f, 0.0, kPi, 1e-12) / kPi;
}

DensityProfile solve_equilibrium(double l, double a, int m) {
    if (!(l > a) || !(a > 0.0))
        throw std::domain_error("solve_equilibrium: requires l > a > 0");
    if (m < 16) throw std::invalid_argument("solve_equilibrium: grid too coarse (m >= 16)");

    const double delta = kTwoPi / m;
    const KernelContext kern{l, a};

    std::vector<double> v(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) v[static_cast<std::size_t>(j)] = -kPi + (j + 0.5) * delta;

    Eigen::MatrixXd G(m, m);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
        const double vi = v[i];
        for (int j = 0; j < m; ++j) {
            const int di = std::abs(static_cast<int>(i) - j);
            const int circ = std::min(di, m - di);
            double entry;
            if (circ == 0) {
                entry = near_entry(kern, vi, delta, /*diagonal=*/true);
            } else if (circ == 1) {
                // Use the +delta orientation for both neighbors: the (i,j)
                // and (j,i) integrals coincide, which keeps G exactly
                // symmetric without a mirroring pass.
                const bool forward = (j == (static_cast<int>(i) + m - 1) % m);
                const double anchor = forward ? vi : v[static_cast<std::size_t>(j)];
                entry = near_entry(kern, anchor, delta, /*diagonal=*/false);
            } else {
                entry = smooth_entry(kern, vi, v[static_cast<std::size_t>(j)], delta);
            }
            G(static_cast<Eigen::Index>(i), j) = entry;
        }
    });

    // Minimize q^T G q over cell masses summing to 1: q = E * G^{-1} 1.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd x = G.ldlt().solve(ones);

    DensityProfile profile;
    profile.l = l;
    profile.a = a;
    profile.m = m;
    profile.v = v;

    if (x.minCoeff() < 0.0) {
        // Nonnegativity fallback: clamp offending cells and re-solve on the
        // remaining support until the solution is feasible.
        profile.constrained = true;
        std::vector<bool> free_cell(static_cast<std::size_t>(m), true);
        for (int pass = 0; pass < 100; ++pass) {
            std::vector<int> idx;
            for (int j = 0; j < m; ++j)
                if (free_cell[static_cast<std::size_t>(j)]) idx.push_back(j);
            if (idx.empty())
                throw std::runtime_error("solve_equilibrium: empty support in fallback");
            Eigen::MatrixXd Gs(idx.size(), idx.size());
            for (std::size_t r = 0; r < idx.size(); ++r)
                for (std::size_t cidx = 0; cidx < idx.size(); ++cidx)
                    Gs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) =
                        G(idx[r], idx[cidx]);
            const Eigen::VectorXd xs =
                Gs.ldlt().solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(idx.size())));
            bool feasible = true;
            x.setZero(m);
            for (std::size_t r = 0; r < idx.size(); ++r) {
                x(idx[r]) = xs(static_cast<Eigen::Index>(r));
                if (xs(static_cast<Eigen::Index>(r)) < 0.0) {
                    free_cell[static_cast<std::size_t>(idx[r])] = false;
                    feasible = false;
                }
            }
            if (feasible) break;
        }
        if (x.minCoeff() < 0.0)
            throw std::runtime_error("solve_equilibrium: nonnegativity fallback failed");
    }

    Eigen::VectorXd q = x / x.sum();
    q /= q.sum();  // kill the last-ulp drift so the masses sum to exactly ~1
    profile.energy = q.dot(G * q);

    profile.weights.resize(static_cast<std::size_t>(m));
    profile.density.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double rho = l + a * std::cos(v[static_cast<std::size_t>(j)]);
        profile.weights[static_cast<std::size_t>(j)] = q(j);
        profile.density[static_cast<std::size_t>(j)] = q(j) / (kTwoPi * rho * a * delta);
    }
    return profile;
}

double second_term_coefficient(const Manifold& manifold, const DensityProfile* profile) {
    const double pref = 2.0 * ewald_constant() * std::sqrt(std::sqrt(3.0) / 2.0);
    if (manifold.is_sphere()) {
        // Uniform measure: integral of sqrt(1/(4 pi)) over a mass-1 measure.
        return pref / std::sqrt(4.0 * kPi);
    }
    if (profile == nullptr)
        throw std::invalid_argument(
            "second_term_coefficient: torus requires an equilibrium density profile");
    if (profile->l != manifold.major_radius() || profile->a != manifold.minor_radius())
        throw std::invalid_argument("second_term_coefficient: profile radii mismatch");
    double integral = 0.0;
    for (std::size_t j = 0; j < profile->weights.size(); ++j)
        integral += profile->weights[j] * std::sqrt(profile->density[j]);
    return pref * integral;
}

}  // namespace rieszlab
