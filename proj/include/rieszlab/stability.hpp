#pragma once

#include <string>
#include <vector>

#include "rieszlab/energy.hpp"
#include "rieszlab/manifold.hpp"

namespace rieszlab {

// How a candidate is certified as a local minimum.
//
//   Strict:  quantitative test.  With r = dim of the rigid symmetry group,
//            lambda_star = (r+1)-th smallest Hessian eigenvalue must be
//            positive and grad_norm / lambda_star <= min_sep / 10000 (the
//            residual displacement a Newton step could still cause must be
//            negligible against the closest pair distance).
//   Relaxed: qualitative test.  Beyond the r rigid zero modes, every
//            eigenvalue must exceed +1e-8 * ||H|| (spectral norm).
//   Auto:    Strict, switching to Relaxed when the Hessian dimension 2n
//            exceeds 4000 (where the strict quotient becomes too demanding
//            for accumulated roundoff in the spectrum).
enum class CertifyMode { Strict, Relaxed, Auto };

// The mode Auto resolves to for an n-point problem.
CertifyMode resolve_mode(CertifyMode mode, int n);

struct StabilityCertificate {
    double grad_norm = 0.0;        // Euclidean norm of the gradient
    double lambda_star = 0.0;      // (r+1)-th smallest Hessian eigenvalue
    std::vector<double> lambda_low;  // the r+1 smallest eigenvalues, ascending
    double hessian_norm = 0.0;     // max |eigenvalue|
    double min_sep = 0.0;          // closest pair distance
    double criterion_lhs = 0.0;    // strict: grad_norm / lambda_star
    double criterion_rhs = 0.0;    // strict: min_sep / 10000
    bool stable = false;
    bool relaxed = false;          // which test produced the verdict
    std::string reason;            // empty when stable; otherwise diagnostic
};

// Full Hessian spectrum, ascending (2n values).
std::vector<double> hessian_spectrum(const Configuration& config, RieszParam param);

// Certify a candidate configuration.  Pole clearance requirements are those
// of the Hessian evaluation (see energy.hpp).
StabilityCertificate certify(const Configuration& config, RieszParam param,
                             CertifyMode mode = CertifyMode::Auto);

}  // namespace rieszlab
