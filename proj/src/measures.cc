#include "trapsim/measures.h"

#include <algorithm>
#include <cmath>

#include "trapsim/errors.h"

namespace trapsim {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b) {
    if (a != b) {
        throw DimensionError("operands have different dimensions");
    }
}

double clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    require_same_dim(rho.matrix().rows(), sigma.matrix().rows());
    Eigen::MatrixXcd s = psd_sqrt(rho.matrix());
    Eigen::MatrixXcd inner = s * sigma.matrix() * s;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
    double f = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++) {
        f += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    }
    return clamp01(f);
}

double fidelity(const StateVector &phi, const StateVector &psi) {
    require_same_dim(phi.amplitudes().size(), psi.amplitudes().size());
    return clamp01(std::abs(phi.amplitudes().dot(psi.amplitudes())));
}

double fidelity(const DensityOperator &rho, const StateVector &psi) {
    return std::sqrt(clamp01(overlap(rho, psi)));
}

double trace_distance(const DensityOperator &rho, const DensityOperator &sigma) {
    require_same_dim(rho.matrix().rows(), sigma.matrix().rows());
    Eigen::MatrixXcd d = rho.matrix() - sigma.matrix();
    d = 0.5 * (d + d.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
    return clamp01(0.5 * es.eigenvalues().cwiseAbs().sum());
}

double overlap(const DensityOperator &rho, const StateVector &phi) {
    require_same_dim(rho.matrix().rows(), phi.amplitudes().size());
    const auto &a = phi.amplitudes();
    return a.dot(rho.matrix() * a).real();
}

}  // namespace trapsim
