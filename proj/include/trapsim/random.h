#ifndef TRAPSIM_RANDOM_H
#define TRAPSIM_RANDOM_H

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "trapsim/operators.h"

namespace trapsim {

using Rng = std::mt19937_64;

/// Unbiased draw from [0, bound) by rejection; independent of the standard
/// library's distribution implementations, so tables are reproducible across toolchains.
uint64_t uniform_below(Rng &rng, uint64_t bound);
/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform_unit(Rng &rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase correction).
Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng &rng);
/// Haar-random pure state.
Eigen::VectorXcd haar_state(Eigen::Index dim, Rng &rng);
/// Random density matrix of the given rank (partial trace of a Haar state).
Eigen::MatrixXcd random_density(Eigen::Index dim, Eigen::Index rank, Rng &rng);
/// Projector onto a Haar-random subspace of the given rank.
Eigen::MatrixXcd random_projector(Eigen::Index dim, Eigen::Index rank, Rng &rng);
/// Stinespring sample: Haar unitary on A (x) E with E initialized to |0>, environment traced out.
KrausChannel random_channel(Eigen::Index dim, int env_qubits, Rng &rng);

}  // namespace trapsim

#endif
