#include "rieszlab/optimizer.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

namespace rieszlab {

namespace {

constexpr double kGolden = 0.3819660112501051;  // 2 - golden ratio
constexpr double kExpand = 2.618033988749895;   // 1 + golden ratio

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Evaluate the energy along params + t * direction without touching the
// caller's configuration.
class LineEvaluator {
public:
    LineEvaluator(const Configuration& config, RieszParam param,
                  const std::vector<double>& direction)
        : base_(config), param_(param), dir_(direction), scratch_(config) {}

    double operator()(double t) {
        for (std::size_t k = 0; k < base_.params.size(); ++k)
            scratch_.params[k] = base_.params[k] + t * dir_[k];
        return plain_energy(scratch_, param_);
    }

private:
    const Configuration& base_;
    RieszParam param_;
    const std::vector<double>& dir_;
    Configuration scratch_;
};

// Gradient with automatic re-alignment: if the evaluation lands in the pole
// guard band the configuration is rotated to an admissible chart first.
// Returns true when the configuration was changed.
bool safe_gradient(Configuration& config, RieszParam param, std::vector<double>& grad) {
    try {
        grad = gradient(config, param);
        return false;
    } catch (const AlignmentRequired&) {
        config = canonical_align(config);
        grad = gradient(config, param);
        return true;
    }
}

}  // namespace

OptimizerSettings OptimizerSettings::defaults(int n) {
    OptimizerSettings s;
    s.cg_max_iters = std::max(2000, 10 * n);
    s.newton_max_iters = 50;
    s.line_tol = 1e-8;
    s.grad_switch_tol = 1e-3 * std::sqrt(static_cast<double>(std::max(1, n)));
    s.grad_final_tol = 1e-11;
    s.restart_period = std::max(1, 2 * n);
    s.max_rounds = 5;
    return s;
}

namespace detail {

double brent_minimize(double a, double b, double c, double fb,
                      const std::function<double(double)>& f, double rel_tol,
                      double* fmin_out) {
    // Classic Brent: track the best point x, second best w, previous v.
    double x = b, w = b, v = b;
    double fx = fb, fw = fb, fv = fb;
    double lo = std::min(a, c), hi = std::max(a, c);
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < 100; ++iter) {
        const double xm = 0.5 * (lo + hi);
        const double tol1 = rel_tol * std::fabs(x) + 1e-300;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (hi - lo)) break;

        bool take_golden = true;
        if (std::fabs(e) > tol1) {
            // Parabolic step through (x, fx), (w, fw), (v, fv).
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_prev = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (lo - x) &&
                p < q * (hi - x)) {
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = (xm - x >= 0 ? tol1 : -tol1);
                take_golden = false;
            }
        }
        if (take_golden) {
            e = (x >= xm ? lo : hi) - x;
            d = kGolden * e;
        }
        const double u = (std::fabs(d) >= tol1) ? x + d : x + (d >= 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) lo = x; else hi = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) lo = u; else hi = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    if (fmin_out) *fmin_out = fx;
    return x;
}

}  // namespace detail

LineResult line_minimize(const Configuration& config, RieszParam param,
                         const std::vector<double>& direction, double line_tol,
                         double initial_step) {
    if (direction.size() != config.params.size())
        throw std::invalid_argument("line_minimize: direction size mismatch");
    const double dnorm = norm2(direction);
    if (!(dnorm > 0.0)) throw std::invalid_argument("line_minimize: zero direction");

    LineEvaluator f(config, param, direction);
    const double f0 = f(0.0);

    // Default trial step: displace each point by roughly a tenth of the mean
    // spacing sqrt(area/n).
    double h = initial_step;
    if (!(h > 0.0)) {
        const double spacing =
            std::sqrt(config.manifold.area() / std::max(1, config.n()));
        h = 0.1 * spacing / dnorm;
    }

    // Find a decrease, shrinking geometrically if the first trial overshoots.
    double fh = f(h);
    int shrink = 0;
    while (fh >= f0 && shrink < 40) {
        h *= 0.25;
        fh = f(h);
        ++shrink;
    }
    if (fh >= f0) return LineResult{0.0, f0, false};

    // Expand until the energy turns back up, giving a bracket 0 < h < c.
    double a = 0.0, b = h, fb = fh;
    double c = h * kExpand, fc = f(c);
    int expand = 0;
    while (fc < fb && expand < 100) {
        a = b;
        b = c; fb = fc;
        c = b * kExpand;
        fc = f(c);
        ++expand;
    }
    if (fc < fb) {
        // Monotone decrease past the expansion cap: accept the far point.
        return LineResult{c, fc, true};
    }

    double fmin = fb;
    const double t = detail::brent_minimize(a, b, c, fb, std::ref(f), line_tol, &fmin);
    if (fmin >= f0) return LineResult{0.0, f0, false};
    return LineResult{t, fmin, true};
}

namespace {

// Shared CG loop.  Runs at most max_iters iterations or until the gradient
// norm drops to stop_tol.  Updates config/energy/grad in place and returns
// the number of iterations taken.
int cg_loop(Configuration& config, RieszParam param, const OptimizerSettings& settings,
            int max_iters, double stop_tol, double& energy, std::vector<double>& grad) {
    const std::size_t dim = config.params.size();
    bool realigned = safe_gradient(config, param, grad);
    (void)realigned;
    energy = plain_energy(config, param);

    std::vector<double> dir(dim);
    for (std::size_t k = 0; k < dim; ++k) dir[k] = -grad[k];
    double gg = dot(grad, grad);

    int iters = 0;
    int since_restart = 0;
    int consecutive_failures = 0;
    double step_hint = 0.0;

    while (iters < max_iters && std::sqrt(gg) > stop_tol) {
        ++iters;

        // Periodic chart maintenance on the sphere: points drifting toward a
        // pole degrade the polar chart long before the hard guard trips.
        if (config.manifold.is_sphere() && iters % 50 == 0 &&
            !pole_admissible(config, 1e-3)) {
            config = canonical_align(config);
            safe_gradient(config, param, grad);
            energy = plain_energy(config, param);
            for (std::size_t k = 0; k < dim; ++k) dir[k] = -grad[k];
            gg = dot(grad, grad);
            since_restart = 0;
            step_hint = 0.0;
            continue;
        }

        LineResult lr = line_minimize(config, param, dir, settings.line_tol, step_hint);
        if (!lr.ok) {
            ++consecutive_failures;
            if (consecutive_failures >= 3)
                throw StagnationError("line search failed three times in a row");
            // Restart along steepest descent and try once more.
            for (std::size_t k = 0; k < dim; ++k) dir[k] = -grad[k];
            since_restart = 0;
            step_hint = 0.0;
            continue;
        }
        consecutive_failures = 0;
        step_hint = lr.step;

        for (std::size_t k = 0; k < dim; ++k) config.params[k] += lr.step * dir[k];
        energy = lr.energy;

        std::vector<double> grad_new;
        if (safe_gradient(config, param, grad_new)) {
            // Re-alignment rotated the chart; directions no longer match.
            grad = std::move(grad_new);
            for (std::size_t k = 0; k < dim; ++k) dir[k] = -grad[k];
            gg = dot(grad, grad);
            since_restart = 0;
            step_hint = 0.0;
            continue;
        }

        // Polak-Ribiere with nonnegativity: beta = max(0, g1.(g1-g0)/g0.g0).
        double num = 0.0;
        for (std::size_t k = 0; k < dim; ++k) num += grad_new[k] * (grad_new[k] - grad[k]);
        double beta = std::max(0.0, num / gg);

        ++since_restart;
        if (beta == 0.0 || since_restart >= settings.restart_period) {
            for (std::size_t k = 0; k < dim; ++k) dir[k] = -grad_new[k];
            since_restart = 0;
        } else {
            for (std::size_t k = 0; k < dim; ++k) dir[k] = -grad_new[k] + beta * dir[k];
        }
        grad = std::move(grad_new);
        gg = dot(grad, grad);
    }
    return iters;
}

TrialResult finish_result(Configuration config, RieszParam param, double grad_norm,
                          const OptimizerSettings& settings) {
    TrialResult out;
    out.config = std::move(config);
    out.energy = total_energy(out.config, param).total;
    out.grad_norm = grad_norm;
    out.converged =
        grad_norm <= settings.grad_final_tol * std::max(1.0, std::fabs(out.energy));
    return out;
}

}  // namespace

TrialResult cg_descend(const Configuration& start, RieszParam param,
                       const OptimizerSettings& settings) {
    Configuration config = start;
    double energy = 0.0;
    std::vector<double> grad;
    const int iters =
        cg_loop(config, param, settings, settings.cg_max_iters, settings.grad_switch_tol,
                energy, grad);
    TrialResult out = finish_result(std::move(config), param, norm2(grad), settings);
    out.cg_iters = iters;
    return out;
}

TrialResult newton_polish(const Configuration& start, RieszParam param,
                          const OptimizerSettings& settings) {
    Configuration config = start;
    const int dim = static_cast<int>(config.params.size());

    std::vector<double> grad;
    safe_gradient(config, param, grad);
    double gnorm = norm2(grad);
    double energy = plain_energy(config, param);

    int iters = 0;
    while (iters < settings.newton_max_iters) {
        const double tol = settings.grad_final_tol * std::max(1.0, std::fabs(energy));
        if (gnorm <= tol) break;
        ++iters;

        Eigen::MatrixXd H = hessian(config, param);
        Eigen::VectorXd g(dim);
        for (int k = 0; k < dim; ++k) g(k) = grad[static_cast<std::size_t>(k)];

        // Small relative damping keeps the factorization well-posed on the
        // exactly singular rigid-motion subspace.
        const double mu = 1e-11 * H.diagonal().cwiseAbs().maxCoeff();
        Eigen::MatrixXd Hd = H;
        Hd.diagonal().array() += mu;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Hd);
        bool solved = (ldlt.info() == Eigen::Success);
        Eigen::VectorXd delta;
        if (solved) {
            delta = ldlt.solve(-g);
            solved = delta.allFinite();
        }

        bool accepted = false;
        if (solved) {
            // Backtrack on the gradient norm: a Newton step near a minimum
            // contracts it quadratically; far away, halving gives a usable
            // damped step.
            double scale = 1.0;
            for (int halving = 0; halving <= 20; ++halving) {
                Configuration trial = config;
                for (int k = 0; k < dim; ++k)
                    trial.params[static_cast<std::size_t>(k)] += scale * delta(k);
                std::vector<double> grad_trial;
                try {
                    safe_gradient(trial, param, grad_trial);
                } catch (const AlignmentError&) {
                    scale *= 0.5;
                    continue;
                }
                const double gnorm_trial = norm2(grad_trial);
                if (gnorm_trial < gnorm) {
                    config = std::move(trial);
                    grad = std::move(grad_trial);
                    gnorm = gnorm_trial;
                    energy = plain_energy(config, param);
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
        }

        if (!accepted) {
            // Newton cannot improve from here (indefinite curvature or a
            // start far from any basin): take a short CG sweep instead.
            double e2 = energy;
            try {
                cg_loop(config, param, settings, 25,
                        settings.grad_final_tol * std::max(1.0, std::fabs(energy)), e2,
                        grad);
            } catch (const StagnationError&) {
                break;  // nothing moves anymore; report the best point found
            }
            energy = e2;
            const double gnorm_new = norm2(grad);
            if (gnorm_new >= gnorm) break;  // no progress at all
            gnorm = gnorm_new;
        }
    }

    TrialResult out = finish_result(std::move(config), param, gnorm, settings);
    out.newton_iters = iters;
    return out;
}

TrialResult generate_candidate(const Manifold& manifold, int n, RieszParam param,
                               std::uint64_t seed, const OptimizerSettings& settings) {
    Configuration config = random_config(manifold, n, seed, 0.5);
    if (manifold.is_sphere()) config = canonical_align(config);

    TrialResult result;
    result.seed = seed;
    int cg_total = 0, newton_total = 0, rounds = 0;

    for (int round = 0; round < settings.max_rounds; ++round) {
        ++rounds;
        bool stagnated = false;
        try {
            TrialResult r1 = cg_descend(config, param, settings);
            config = std::move(r1.config);
            cg_total += r1.cg_iters;
        } catch (const StagnationError&) {
            stagnated = true;  // Newton may still polish a flat region
        }

        TrialResult r2 = newton_polish(config, param, settings);
        config = std::move(r2.config);
        newton_total += r2.newton_iters;
        if (r2.converged) break;
        if (stagnated && r2.newton_iters == 0) break;
    }

    // Final chart normalization so stored results are always admissible.
    config = canonical_align(config);

    std::vector<double> grad;
    safe_gradient(config, param, grad);
    TrialResult out = finish_result(std::move(config), param, norm2(grad), settings);
    out.seed = seed;
    out.cg_iters = cg_total;
    out.newton_iters = newton_total;
    out.rounds = rounds;
    return out;
}

}  // namespace rieszlab
