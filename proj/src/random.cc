#include "trapsim/random.h"

#include <cmath>

namespace trapsim {

uint64_t uniform_below(Rng &rng, uint64_t bound) {
    if (bound <= 1) {
        return 0;
    }
    uint64_t limit = Rng::max() - (Rng::max() % bound);
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

double uniform_unit(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

// Box-Muller on uniform_unit, for the same reproducibility reason as uniform_below.
double gaussian(Rng &rng) {
    double u1 = uniform_unit(rng);
    double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    Eigen::MatrixXcd z(rows, cols);
    for (Eigen::Index j = 0; j < cols; j++) {
        for (Eigen::Index i = 0; i < rows; i++) {
            double re = gaussian(rng);
            double im = gaussian(rng);
            z(i, j) = cplx(re, im) / std::sqrt(2.0);
        }
    }
    return z;
}

}  // namespace

Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng &rng) {
    Eigen::MatrixXcd z = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; i++) {
        cplx d = r(i, i);
        double a = std::abs(d);
        q.col(i) *= (a > 0 ? d / a : cplx(1.0));
    }
    return q;
}

Eigen::VectorXcd haar_state(Eigen::Index dim, Rng &rng) {
    Eigen::VectorXcd v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

Eigen::MatrixXcd random_density(Eigen::Index dim, Eigen::Index rank, Rng &rng) {
    Eigen::MatrixXcd g = ginibre(dim, rank, rng);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Eigen::MatrixXcd random_projector(Eigen::Index dim, Eigen::Index rank, Rng &rng) {
    Eigen::MatrixXcd u = haar_unitary(dim, rng);
    Eigen::MatrixXcd v = u.leftCols(rank);
    Eigen::MatrixXcd p = v * v.adjoint();
    return 0.5 * (p + p.adjoint());
}

KrausChannel random_channel(Eigen::Index dim, int env_qubits, Rng &rng) {
    Eigen::Index env = Eigen::Index{1} << env_qubits;
    Eigen::MatrixXcd u = haar_unitary(dim * env, rng);
    // Ordering A (x) E: row index = a * env + e.
    std::vector<Eigen::MatrixXcd> ops;
    for (Eigen::Index l = 0; l < env; l++) {
        Eigen::MatrixXcd e(dim, dim);
        for (Eigen::Index a = 0; a < dim; a++) {
            for (Eigen::Index b = 0; b < dim; b++) {
                e(a, b) = u(a * env + l, b * env);
            }
        }
        ops.push_back(std::move(e));
    }
    return KrausChannel(std::move(ops));
}

}  // namespace trapsim
