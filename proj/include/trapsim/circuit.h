#ifndef TRAPSIM_CIRCUIT_H
#define TRAPSIM_CIRCUIT_H

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trapsim/operators.h"
#include "trapsim/state.h"

namespace trapsim {

/// Gate fires only on basis states where `reg` holds `value`.
struct Control {
    std::string reg;
    uint64_t value;
};

/// A gate list addressed by register name. Protocol-sized unitaries are kept in
/// this form because their dense matrices would not fit in memory; small ones
/// can be materialized with to_unitary.
class Circuit {
   public:
    struct Op {
        enum class Kind { Dense, Table } kind;
        std::vector<std::string> targets;
        Eigen::MatrixXcd matrix;
        std::vector<uint64_t> table;
        std::vector<Control> controls;
    };

    Circuit &dense(std::vector<std::string> targets, Eigen::MatrixXcd matrix, std::vector<Control> controls = {});
    Circuit &unitary(const UnitaryOperator &u, std::vector<std::string> targets, std::vector<Control> controls = {});
    /// Basis permutation |v> -> |table[v]> on the concatenated targets.
    Circuit &table(std::vector<std::string> targets, std::vector<uint64_t> table, std::vector<Control> controls = {});
    /// Reversible classical map given as a function; `width` is the total target width.
    Circuit &classical(std::vector<std::string> targets, int width, const std::function<uint64_t(uint64_t)> &f,
                       std::vector<Control> controls = {});
    Circuit &hadamard(const std::string &reg, int qubits);
    /// target ^= source (equal widths).
    Circuit &xor_into(const std::string &source, const std::string &target, int width);
    Circuit &append(const Circuit &other);

    Circuit inverse() const;

    const std::vector<Op> &ops() const {
        return ops_;
    }
    bool empty() const {
        return ops_.empty();
    }

    void apply_in_place(Eigen::VectorXcd &vec, const RegisterLayout &layout) const;
    StateVector apply(const StateVector &s) const;
    UnitaryOperator to_unitary(const RegisterLayout &layout) const;

   private:
    std::vector<Op> ops_;
};

Eigen::MatrixXcd hadamard_matrix(int qubits);
/// Real rotation [[cos a, -sin a], [sin a, cos a]].
Eigen::MatrixXcd rotation_y(double angle);

}  // namespace trapsim

#endif
