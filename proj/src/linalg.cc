#include "trapsim/linalg.h"

#include <cmath>
#include <vector>

#include "trapsim/random.h"

namespace trapsim {

double largest_eigenvalue(const Eigen::MatrixXcd &hermitian) {
    Eigen::MatrixXcd h = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double largest_eigenvalue(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)> &apply, Eigen::Index dim,
                          uint64_t seed, int max_steps, double tol) {
    Rng rng(seed);
    std::vector<Eigen::VectorXcd> basis;
    basis.push_back(haar_state(dim, rng));
    std::vector<double> alpha;
    std::vector<double> beta;
    double previous = -INFINITY;
    double estimate = -INFINITY;
    int stalls = 0;
    int steps = static_cast<int>(std::min<Eigen::Index>(max_steps, dim));
    for (int j = 0; j < steps; j++) {
        Eigen::VectorXcd w = apply(basis[static_cast<size_t>(j)]);
        alpha.push_back(basis[static_cast<size_t>(j)].dot(w).real());
        // Full reorthogonalization, applied twice for stability.
        for (int pass = 0; pass < 2; pass++) {
            for (const auto &b : basis) {
                w -= b.dot(w) * b;
            }
        }
        Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; i++) {
            t(i, i) = alpha[static_cast<size_t>(i)];
            if (i + 1 < k) {
                t(i, i + 1) = t(i + 1, i) = beta[static_cast<size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
        estimate = es.eigenvalues().maxCoeff();
        double b = w.norm();
        stalls = std::abs(estimate - previous) < tol ? stalls + 1 : 0;
        if (b < 1e-12 || (j >= 8 && stalls >= 3)) {
            break;
        }
        previous = estimate;
        beta.push_back(b);
        basis.push_back(w / b);
    }
    return estimate;
}

}  // namespace trapsim
