#ifndef TRAPSIM_OPERATORS_H
#define TRAPSIM_OPERATORS_H

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trapsim/state.h"

namespace trapsim {

/// Unitary matrix together with the register structure it acts on.
/// The register names are local labels; apply_on_registers binds them to
/// registers of a concrete state.
class UnitaryOperator {
   public:
    /// Throws DimensionError on a size mismatch and InvariantError unless U^dag U = I within kTol.
    UnitaryOperator(RegisterLayout layout, Eigen::MatrixXcd matrix);

    static UnitaryOperator identity(const RegisterLayout &layout);

    const RegisterLayout &layout() const {
        return layout_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return m_;
    }
    int num_qubits() const {
        return layout_.num_qubits();
    }
    UnitaryOperator adjoint() const;
    /// this * other (other applied first).
    UnitaryOperator compose(const UnitaryOperator &other) const;
    bool is_permutation_matrix() const;

   private:
    RegisterLayout layout_;
    Eigen::MatrixXcd m_;
};

/// Operation elements {E_l} with sum_l E_l^dag E_l = I.
class KrausChannel {
   public:
    explicit KrausChannel(std::vector<Eigen::MatrixXcd> ops);

    static KrausChannel identity(uint64_t dim);
    static KrausChannel unitary(const Eigen::MatrixXcd &u);

    const std::vector<Eigen::MatrixXcd> &operators() const {
        return ops_;
    }
    Eigen::Index dimension() const {
        return ops_.front().rows();
    }

   private:
    std::vector<Eigen::MatrixXcd> ops_;
};

/// U on `targets` (register names of s, concatenated in order) and identity elsewhere.
StateVector apply_on_registers(const StateVector &s, const UnitaryOperator &u,
                               const std::vector<std::string> &targets);
DensityOperator apply_on_registers(const DensityOperator &rho, const UnitaryOperator &u,
                                   const std::vector<std::string> &targets);
/// (Psi on targets (x) I)(rho).
DensityOperator apply_channel(const DensityOperator &rho, const KrausChannel &channel,
                              const std::vector<std::string> &targets);

namespace kernel {

/// In-place application of a 2^k x 2^k matrix to the qubits at `targets`
/// (targets[0] is the matrix's most significant bit). Only basis indices with
/// (index & control_mask) == control_value are touched.
void apply_matrix(Eigen::VectorXcd &vec, int num_qubits, const std::vector<int> &targets,
                  const Eigen::MatrixXcd &m, uint64_t control_mask = 0, uint64_t control_value = 0);

/// Basis permutation on `targets`: |v> -> |table[v]>. The table must be a bijection.
void apply_table(Eigen::VectorXcd &vec, int num_qubits, const std::vector<int> &targets,
                 const std::vector<uint64_t> &table, uint64_t control_mask = 0, uint64_t control_value = 0);

/// M on targets applied from the left to every column of a square matrix.
void apply_matrix_left(Eigen::MatrixXcd &rho, int num_qubits, const std::vector<int> &targets,
                       const Eigen::MatrixXcd &m);

}  // namespace kernel

}  // namespace trapsim

#endif
