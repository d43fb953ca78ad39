#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rieszlab/energy.hpp"
#include "rieszlab/manifold.hpp"

namespace rieszlab {

// Tunables for the two-stage descent.  Convergence thresholds that depend on
// runtime state are stored as base factors:
//   * grad_switch_tol already includes the sqrt(n) scaling (see defaults),
//   * grad_final_tol is multiplied by max(1, |E|) at evaluation time so the
//     stop test is relative to the magnitude of the energy being minimized.
struct OptimizerSettings {
    int cg_max_iters = 2000;        // nonlinear CG iteration cap
    int newton_max_iters = 50;      // damped Newton iteration cap
    double line_tol = 1e-8;         // relative tolerance of the 1-D minimizer
    double grad_switch_tol = 1e-3;  // gradient norm at which CG hands over
    double grad_final_tol = 1e-11;  // final gradient norm factor (x max(1,|E|))
    int restart_period = 100;       // forced steepest-descent restart interval
    int max_rounds = 5;             // CG/Newton alternations in the pipeline

    // Standard settings for an n-point problem: iteration caps scale with n,
    // the switch tolerance with sqrt(n) (gradient norms grow like sqrt of the
    // parameter count at fixed per-point accuracy), restart every 2n steps.
    static OptimizerSettings defaults(int n);
};

struct LineResult {
    double step = 0.0;     // accepted step length along the direction
    double energy = 0.0;   // energy at the accepted step
    bool ok = false;       // false when no decrease could be bracketed
};

// Minimize t -> E(params + t * direction), t >= 0.  initial_step <= 0 picks a
// scale-aware default (a displacement of about a tenth of the mean spacing).
// A zero direction is rejected with std::invalid_argument.  When even
// repeated shrinking finds no decrease the result has step 0 and ok false;
// otherwise the bracketed minimum is located to a relative width of
// settings.line_tol and the returned energy never exceeds the start energy.
LineResult line_minimize(const Configuration& config, RieszParam param,
                         const std::vector<double>& direction, double line_tol,
                         double initial_step = 0.0);

struct TrialResult {
    Configuration config;     // final configuration (aligned / wrapped)
    double energy = 0.0;      // exact binned total at the final configuration
    double grad_norm = 0.0;   // Euclidean norm of the final gradient
    int cg_iters = 0;         // CG iterations actually taken
    int newton_iters = 0;     // Newton iterations actually taken
    int rounds = 0;           // CG/Newton alternations used
    std::uint64_t seed = 0;   // seed that produced the start configuration
    bool converged = false;   // final gradient test passed
};

// Stage 1: Polak-Ribiere (nonnegative) conjugate gradient with restarts, run
// until the gradient norm drops to settings.grad_switch_tol or the iteration
// cap is reached.  Throws StagnationError after three consecutive failed
// line searches.  Energy is non-increasing across accepted steps.
TrialResult cg_descend(const Configuration& start, RieszParam param,
                       const OptimizerSettings& settings);

// Stage 2: damped Newton polish.  Solves (H + mu I) delta = -g with a small
// relative damping, halves the step while the gradient norm fails to
// decrease, and falls back to a short CG sweep when Newton cannot make
// progress from the current point (so a far-from-critical start degrades
// gracefully instead of failing).  Stops when the gradient norm reaches
// settings.grad_final_tol * max(1, |E|).
TrialResult newton_polish(const Configuration& start, RieszParam param,
                          const OptimizerSettings& settings);

// Full pipeline: seeded random start -> alignment -> alternating CG / Newton
// rounds -> final alignment and exact energy evaluation.  Deterministic in
// (manifold, n, param, seed, settings).
TrialResult generate_candidate(const Manifold& manifold, int n, RieszParam param,
                               std::uint64_t seed,
                               const OptimizerSettings& settings);

namespace detail {
// Scalar minimizer used by the line search: golden-section/parabolic
// interpolation (Brent) on a bracketing triple a < b < c with f(b) below both
// ends.  Exposed for direct testing.
double brent_minimize(double a, double b, double c, double fb,
                      const std::function<double(double)>& f, double rel_tol,
                      double* fmin_out);
}  // namespace detail

}  // namespace rieszlab
