#ifndef TRAPSIM_LINALG_H
#define TRAPSIM_LINALG_H

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace trapsim {

/// Largest eigenvalue of a Hermitian matrix (dense eigensolver).
double largest_eigenvalue(const Eigen::MatrixXcd &hermitian);

/// Largest eigenvalue of a Hermitian operator given only as a matrix-vector
/// product, by Lanczos iteration with full reorthogonalization.
double largest_eigenvalue(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)> &apply, Eigen::Index dim,
                          uint64_t seed, int max_steps = 120, double tol = 1e-12);

}  // namespace trapsim

#endif
