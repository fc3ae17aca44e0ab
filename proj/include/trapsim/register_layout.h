#ifndef TRAPSIM_REGISTER_LAYOUT_H
#define TRAPSIM_REGISTER_LAYOUT_H

#include <cstdint>
#include <string>
#include <vector>

namespace trapsim {

/// Default upper bound on the number of qubits in a dense statevector.
/// Overridable at run time through the TRAPSIM_MAX_QUBITS environment variable.
inline constexpr int kDefaultMaxQubits = 18;

/// Density operators are quadratically larger; they stay under this bound.
inline constexpr int kMaxDensityQubits = 11;

/// Effective statevector qubit cap (environment override applied).
int max_qubits();

struct Register {
    std::string name;
    int qubits;

    bool operator==(const Register &other) const = default;
};

/// Ordered list of named qubit registers.
///
/// Bit-order convention used everywhere in this project: global qubit 0 is the
/// most significant bit of the first declared register, and global qubit q-1 is
/// the least significant bit of the last register. Within a register the first
/// qubit is the most significant bit of the register's value, so the integer
/// value of a basis index is the concatenation of register values in
/// declaration order.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> registers);

    static RegisterLayout single(const std::string &name, int qubits);

    const std::vector<Register> &registers() const {
        return registers_;
    }
    int num_qubits() const {
        return num_qubits_;
    }
    uint64_t dimension() const {
        return uint64_t{1} << num_qubits_;
    }

    bool contains(const std::string &name) const;
    const Register &at(const std::string &name) const;
    /// Global position of the register's first (most significant) qubit.
    int offset(const std::string &name) const;
    /// Global positions of the listed registers' qubits, concatenated in list order.
    std::vector<int> qubits_of(const std::vector<std::string> &names) const;
    std::vector<std::string> names() const;

    /// Value of a register inside a basis index.
    uint64_t value_of(uint64_t index, const std::string &name) const;
    /// Basis index with the given register values (unlisted registers are 0).
    uint64_t index_of(const std::vector<std::pair<std::string, uint64_t>> &values) const;

    RegisterLayout concat(const RegisterLayout &other) const;
    /// Sub-layout with exactly the listed registers, in list order.
    RegisterLayout subset(const std::vector<std::string> &names) const;
    RegisterLayout without(const std::vector<std::string> &names) const;

    bool operator==(const RegisterLayout &other) const {
        return registers_ == other.registers_;
    }

   private:
    std::vector<Register> registers_;
    int num_qubits_ = 0;
};

/// Gathers the bits at the given global qubit positions into an integer whose
/// most significant bit corresponds to positions[0].
uint64_t gather_bits(uint64_t index, int num_qubits, const std::vector<int> &positions);

/// Inverse of gather_bits: the index contribution of `value` placed at positions.
uint64_t scatter_bits(uint64_t value, int num_qubits, const std::vector<int> &positions);

/// Bit `bit` of an m-bit value, counting from the most significant (leftmost) bit.
inline int bit_at(uint64_t value, int width, int bit) {
    return static_cast<int>((value >> (width - 1 - bit)) & 1);
}

/// Parses a binary literal such as "0101"; width is the string length.
uint64_t parse_bits(const std::string &text);
std::string format_bits(uint64_t value, int width);

}  // namespace trapsim

#endif
