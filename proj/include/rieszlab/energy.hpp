#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rieszlab/binned_sum.hpp"
#include "rieszlab/manifold.hpp"

namespace rieszlab {

// Inverse-power pair interaction with exponent s:
//   s > 0:  k(r) = r^(-s)
//   s == 0: k(r) = -log(r)   (the logarithmic case)
// Validated on construction; s < 0 is rejected.
struct RieszParam {
    double s;
    explicit RieszParam(double s_) : s(s_) {
        if (!(s_ >= 0.0)) throw std::domain_error("interaction exponent must be >= 0");
    }
};

// Pair kernel at separation r; throws std::domain_error for r <= 0.
double kernel(RieszParam param, double r);

struct EnergyBreakdown {
    double total = 0.0;                  // sum over ordered pairs (i, j), i != j
    std::vector<double> point_energies;  // U_i = sum over j != i of k(r_ij)
};

// Total energy over ordered pairs (each unordered pair counted twice) plus
// per-point energies.  Every reported value is reduced with the exact binned
// accumulator: the total is the binned sum of the per-point rows, so results
// are bit-identical for any permutation of points and any thread count.
// Throws DegenerateConfiguration on coincident points.
EnergyBreakdown total_energy(const Configuration& config, RieszParam param);

// Fast serial energy (Kahan-compensated, fixed iteration order) for use in
// line searches and other inner loops where bit-stable cross-thread
// reduction is unnecessary.  Same value as total_energy within a few ulp.
double plain_energy(const Configuration& config, RieszParam param);

// Derivatives with respect to the interleaved surface parameters
// (d/d alpha_0, d/d beta_0, d/d alpha_1, ...), length 2n.
//
// On the sphere both derivatives require every point to stay at least 1e-4
// rad away from the coordinate poles; inside that guard band the polar chart
// is ill-conditioned and AlignmentRequired is thrown (canonical_align
// guarantees a 1e-3 margin, ten times the guard).
std::vector<double> gradient(const Configuration& config, RieszParam param);

// Dense symmetric Hessian, 2n x 2n, same parameter ordering as gradient().
// Entries are computed once per unordered index pair and mirrored, so the
// returned matrix is exactly symmetric as stored.
Eigen::MatrixXd hessian(const Configuration& config, RieszParam param);

}  // namespace rieszlab
