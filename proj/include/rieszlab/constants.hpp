#pragma once

#include <limits>
#include <string>
#include <vector>

namespace rieszlab {

// Riemann zeta on (0, 1) u (1, oo): Euler-Maclaurin for alpha > 1, the
// alternating (eta) series with Chebyshev-polynomial acceleration for
// 0 < alpha < 1.  Accurate to a few 1e-15 relative across the supported
// range.  The pole alpha == 1 and alpha <= 0 throw std::domain_error.
double riemann_zeta(double alpha);

// Dirichlet L-function for the quadratic character of conductor 3,
//   L(alpha) = 1 - 2^-alpha + 4^-alpha - 5^-alpha + ...  (pattern mod 3),
// evaluated for alpha > 0 as 3^-alpha (zeta_H(alpha,1/3) - zeta_H(alpha,2/3))
// with the two Hurwitz tails combined term by term so the alpha -> 1
// cancellation is explicit; alpha == 1 is an exact special branch.  Entire,
// so no pole; alpha <= 0 throws std::domain_error.
double dirichlet_L3(double alpha);

// Zeta function of the unit triangular lattice:
//   sum over nonzero lattice vectors of |v|^-s = 6 zeta(s/2) L3(s/2),
// by unique factorization of the norm form.  Valid (by analytic
// continuation) for s > 0 except the pole at s == 2, which throws
// std::domain_error.
double hex_zeta(double s);

// Direct lattice sum of |v|^-s over 0 < |v| <= radius plus an equal-area
// continuum tail, for validating hex_zeta at s > 2 (throws otherwise).
double hex_zeta_direct(double s, double radius);

// Screened lattice constant of the triangular lattice: one half of the
// analytically continued value of the lattice zeta at exponent 1, computed
// from an exponentially convergent split
//   sum_v exp(-|v|)/|v|  (direct space)
//   + (2 pi / cell area) * sum_xi g(2 pi |xi|)  (dual space, with tail)
//   - 2 pi / cell area - 1,
// where g(w) = 1 / (w sqrt(1+w^2) (w + sqrt(1+w^2))).  About -2.1067113.
double ewald_constant();

// Same with explicit direct/dual cutoff radii, for convergence checks.
double ewald_constant_with_radii(double real_radius, double dual_radius);

// Coefficient of the N^(1+s/2) correction term on the unit sphere for
// 0 < s < 2:  (sqrt(3)/(8 pi))^(s/2) * hex_zeta(s) ... packaged as
//   6 (sqrt(3)/(8 pi))^(s/2) zeta(s/2) L3(s/2),
// negative throughout the range.  Out-of-range s throws std::domain_error.
double cs_coefficient(double s);

// ---------------------------------------------------------------------------
// Asymptotic expansion catalogs for the minimal energy in N.
// ---------------------------------------------------------------------------
enum class Provenance { Proven, Conjectured, Fitted, Free };

// One basis term coefficient * N^power * (log N)^(log_factor ? 1 : 0).
// For Free terms the coefficient is a fitted reference value (NaN when no
// reference is available) and must not be used in residual subtraction;
// alt_value optionally records an independently conjectured value.
struct ExpansionTerm {
    std::string label;       // e.g. "N^2", "NlogN", "N", "sqrtN", "logN", "1"
    double power = 0.0;      // exponent of N
    bool log_factor = false; // multiply by log N
    double coefficient = 0.0;
    Provenance provenance = Provenance::Free;
    double alt_value = std::numeric_limits<double>::quiet_NaN();
};

struct ExpansionCatalog {
    double s = 0.0;
    std::vector<ExpansionTerm> terms;  // strictly decreasing asymptotic growth
};

// Catalogs for s in {0, 1, 2, 3}; anything else throws std::domain_error.
ExpansionCatalog expansion_catalog(int s);

// Evaluate coefficient * N^power * (log N)^(0 or 1); natural log.
double term_value(const ExpansionTerm& term, double n);

// N^power * (log N)^(0 or 1) without the coefficient.
double basis_value(const ExpansionTerm& term, double n);

}  // namespace rieszlab
