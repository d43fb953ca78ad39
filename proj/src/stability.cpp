#include "rieszlab/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rieszlab {

CertifyMode resolve_mode(CertifyMode mode, int n) {
    if (mode != CertifyMode::Auto) return mode;
    return (2 * n > 4000) ? CertifyMode::Relaxed : CertifyMode::Strict;
}

std::vector<double> hessian_spectrum(const Configuration& config, RieszParam param) {
    const Eigen::MatrixXd H = hessian(config, param);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hessian_spectrum: eigensolver failed to converge");
    const auto& ev = solver.eigenvalues();  // ascending
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

StabilityCertificate certify(const Configuration& config, RieszParam param,
                             CertifyMode mode) {
    const int n = config.n();
    const int r = config.manifold.rigid_symmetry_dim();
    const CertifyMode effective = resolve_mode(mode, n);

    StabilityCertificate cert;
    cert.relaxed = (effective == CertifyMode::Relaxed);

    const std::vector<double> grad = gradient(config, param);
    double g2 = 0.0;
    for (double g : grad) g2 += g * g;
    cert.grad_norm = std::sqrt(g2);
    cert.min_sep = min_separation(config).min_sep;

    const std::vector<double> spectrum = hessian_spectrum(config, param);
    const int dim = static_cast<int>(spectrum.size());
    if (dim < r + 1) {
        cert.stable = false;
        cert.reason = "too few degrees of freedom for the symmetry rank";
        return cert;
    }
    cert.hessian_norm =
        std::max(std::fabs(spectrum.front()), std::fabs(spectrum.back()));
    cert.lambda_low.assign(spectrum.begin(), spectrum.begin() + r + 1);
    cert.lambda_star = spectrum[static_cast<std::size_t>(r)];

    if (cert.relaxed) {
        // Everything beyond the r rigid modes must be clearly positive.
        const double floor = 1e-8 * cert.hessian_norm;
        cert.criterion_lhs = cert.lambda_star;
        cert.criterion_rhs = floor;
        if (cert.lambda_star > floor) {
            cert.stable = true;
        } else {
            cert.stable = false;
            cert.reason = "soft or negative mode beyond the rigid subspace";
        }
        return cert;
    }

    if (!(cert.lambda_star > 0.0)) {
        cert.stable = false;
        cert.reason = "indefinite";
        cert.criterion_lhs = cert.grad_norm;
        cert.criterion_rhs = 0.0;
        return cert;
    }
    cert.criterion_lhs = cert.grad_norm / cert.lambda_star;
    cert.criterion_rhs = cert.min_sep / 10000.0;
    cert.stable = (cert.criterion_lhs <= cert.criterion_rhs);
    if (!cert.stable) cert.reason = "gradient too large for the softest mode";
    return cert;
}

}  // namespace rieszlab
