#ifndef TRAPSIM_STATE_H
#define TRAPSIM_STATE_H

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trapsim/register_layout.h"

namespace trapsim {

using cplx = std::complex<double>;

/// Absolute tolerance for every equality assertion on double-precision data.
inline constexpr double kTol = 1e-9;

/// Normalized pure state over a register layout.
class StateVector {
   public:
    /// Throws InvariantError unless the squared norm is within kTol of 1.
    StateVector(RegisterLayout layout, Eigen::VectorXcd amplitudes);

    /// Computational basis state; registers not listed are |0>.
    static StateVector basis(const RegisterLayout &layout,
                             const std::vector<std::pair<std::string, uint64_t>> &values = {});
    /// Normalizes `amplitudes` first; throws InvariantError on a zero vector.
    static StateVector normalized(RegisterLayout layout, Eigen::VectorXcd amplitudes);

    const RegisterLayout &layout() const {
        return layout_;
    }
    const Eigen::VectorXcd &amplitudes() const {
        return amps_;
    }
    cplx amplitude(uint64_t index) const {
        return amps_(static_cast<Eigen::Index>(index));
    }
    uint64_t dimension() const {
        return layout_.dimension();
    }
    double norm_squared() const {
        return amps_.squaredNorm();
    }

    /// Same amplitudes with registers reordered (an explicit qubit permutation).
    StateVector reorder(const std::vector<std::string> &order) const;
    /// Same amplitudes under renamed registers (sizes unchanged).
    StateVector rename(const std::vector<std::pair<std::string, std::string>> &renames) const;

   private:
    RegisterLayout layout_;
    Eigen::VectorXcd amps_;
};

/// Mixed state: Hermitian, unit trace, positive semidefinite.
class DensityOperator {
   public:
    /// Checks Hermiticity and trace within kTol. Positivity is checked by is_positive().
    DensityOperator(RegisterLayout layout, Eigen::MatrixXcd matrix);

    static DensityOperator from_pure(const StateVector &psi);
    static DensityOperator maximally_mixed(const RegisterLayout &layout);

    const RegisterLayout &layout() const {
        return layout_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return m_;
    }
    cplx trace() const {
        return m_.trace();
    }
    bool is_positive(double tol = kTol) const;

   private:
    RegisterLayout layout_;
    Eigen::MatrixXcd m_;
};

StateVector tensor_product(const StateVector &a, const StateVector &b);
DensityOperator tensor_product(const DensityOperator &a, const DensityOperator &b);

/// <a|b>; layouts must match.
cplx inner(const StateVector &a, const StateVector &b);

/// Reduced state on `keep` (registers in the listed order).
DensityOperator partial_trace(const DensityOperator &rho, const std::vector<std::string> &keep);
DensityOperator partial_trace(const StateVector &psi, const std::vector<std::string> &keep);

/// Born-rule distribution of a register's value.
std::vector<double> marginal(const StateVector &psi, const std::string &reg);
double probability(const StateVector &psi, const std::string &reg, uint64_t value);
/// Probability that every listed register holds 0.
double probability_all_zero(const StateVector &psi, const std::vector<std::string> &regs);

struct Postselection {
    double probability;
    /// Conditional state with the measured register removed; empty when probability is 0.
    std::optional<StateVector> state;
};

/// Measures `reg` and conditions on outcome `value`.
Postselection postselect(const StateVector &psi, const std::string &reg, uint64_t value);

}  // namespace trapsim

#endif
