#pragma once

#include <vector>

#include "rieszlab/manifold.hpp"

namespace rieszlab {

// Half-odd-degree Legendre functions of the first and second kind on the cut
// z > 1 (the "toroidal" family): P = P_{n-1/2}(z), Q = Q_{n-1/2}(z).
struct ToroidalFunctionPair {
    int n = 0;
    double z = 0.0;
    double P = 0.0;
    double Q = 0.0;
};

// Evaluate one degree.  Seeds at n = 0, 1 come from complete elliptic
// integrals (AGM); higher degrees use the three-term recurrence, forward for
// P (increasing) and backward with normalization for Q (decreasing), with
// internal power-of-two rescaling against overflow.  Requires z > 1 and
// n >= 0; values that exceed the double range throw std::overflow_error.
ToroidalFunctionPair toroidal_pq(int n, double z);

// Capacitary energy of a circular ring torus with radii l > a > 0: the
// minimal inverse-distance energy over probability measures on the surface,
// attained by the equilibrium measure.  Closed form
//     pi / (2 c B),   c = sqrt(l^2 - a^2),
//     B = Q_0/P_0 + 2 sum_{n>=1} Q_n/P_n     (functions evaluated at l/a),
// with the series truncated once a term drops below 1e-14 of the partial
// sum.  Throws std::domain_error unless l > a > 0.
double landkof_energy(double l, double a);

// Interaction kernel between two uniform unit-charge circles of the torus
// surface at tube angles v and vp: the inverse distance averaged over the
// angular offset.  Reduces to a complete elliptic integral; evaluated in
// closed form through the AGM,
//     K(v, vp) = 1 / agm(sqrt(A + B), sqrt(A)),
//     A = 4 a^2 sin^2((v - vp)/2),  B = 4 rho(v) rho(vp),
// exact to roundoff.  Coincident circles (v == vp mod 2 pi) diverge and
// throw std::domain_error.
double revolution_kernel(double l, double a, double v, double vp);

// Independent quadrature evaluation of the same kernel (for validation).
double revolution_kernel_quadrature(double l, double a, double v, double vp);

// Discretized equilibrium measure on the tube angle.
struct DensityProfile {
    double l = 0.0, a = 0.0;
    int m = 0;                     // grid size
    std::vector<double> v;        // cell midpoints, length m
    std::vector<double> weights;  // cell masses, sum exactly renormalized to 1
    std::vector<double> density;  // surface density dmu/dH at the midpoints
    double energy = 0.0;          // energy of the discrete measure
    bool constrained = false;     // a nonnegativity fallback was needed
};

// Solve for the minimizing cell masses on an m-cell midpoint grid of the
// tube angle.  Every matrix entry is the exact double cell average of the
// circle-pair kernel (smooth pairs by tensor Gauss rules, near-diagonal
// pairs by a singularity-splitting quadrature), so the resulting energy is
// the true energy of a piecewise-uniform measure and therefore an upper
// bound of landkof_energy that converges from above as m grows.  Requires
// m >= 16 and l > a > 0.
DensityProfile solve_equilibrium(double l, double a, int m);

// Coefficient of the next-order surface correction term: the screened
// lattice constant times the integrated square root of the equilibrium
// density,
//     2 C sqrt(sqrt(3)/2) * integral of sqrt(dmu/dH) dmu.
// On the sphere the equilibrium measure is uniform and the integral closes
// to (4 pi)^(-1/2); on the torus it is evaluated from a DensityProfile,
// which must be supplied and must match the manifold's radii.
double second_term_coefficient(const Manifold& manifold,
                               const DensityProfile* profile = nullptr);

}  // namespace rieszlab
