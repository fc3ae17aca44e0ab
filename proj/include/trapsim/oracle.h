#ifndef TRAPSIM_ORACLE_H
#define TRAPSIM_ORACLE_H

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "trapsim/circuit.h"
#include "trapsim/operators.h"

namespace trapsim {

class DistributionTable;

/// Largest bit width for explicit permutation tables.
inline constexpr int kMaxPermutationWidth = 16;

/// Explicit bijection on m-bit strings. Stands in for a one-way permutation;
/// only its invertibility and computability are ever used.
class Permutation {
   public:
    /// Throws InvariantError unless `forward` is a bijection on [0, 2^m).
    Permutation(int m, std::vector<uint64_t> forward);

    static Permutation identity(int m);

    int width() const {
        return m_;
    }
    uint64_t size() const {
        return forward_.size();
    }
    uint64_t operator()(uint64_t x) const {
        return forward_[x];
    }
    uint64_t inverse(uint64_t y) const {
        return inverse_[y];
    }
    const std::vector<uint64_t> &forward_table() const {
        return forward_;
    }
    const std::vector<uint64_t> &inverse_table() const {
        return inverse_;
    }

    bool operator==(const Permutation &other) const {
        return m_ == other.m_ && forward_ == other.forward_;
    }

   private:
    int m_;
    std::vector<uint64_t> forward_;
    std::vector<uint64_t> inverse_;
};

/// f(x) = x XOR s (an involution).
Permutation xor_shift_permutation(int m, uint64_t s);
/// Seeded Fisher-Yates shuffle of [0, 2^m).
Permutation random_permutation(int m, uint64_t seed);

/// Text form: a line "m=<int>" followed by 2^m lines "x f(x)" in binary.
void write_permutation(std::ostream &out, const Permutation &f);
Permutation read_permutation(std::istream &in);

/// Inputs on which a corrupted inversion oracle answers wrongly.
class CorruptionSet {
   public:
    CorruptionSet(int m, std::set<uint64_t> members);

    int width() const {
        return m_;
    }
    const std::set<uint64_t> &members() const {
        return members_;
    }
    bool contains(uint64_t q) const {
        return members_.count(q) != 0;
    }
    /// Probability mass of the set under `table`.
    double weight(const DistributionTable &table) const;
    /// True when weight(table) < delta, i.e. the corrupted oracle is delta-close.
    bool is_delta_close(const DistributionTable &table, double delta) const;

   private:
    int m_;
    std::set<uint64_t> members_;
};

/// |x, y> -> |x, y XOR f(x)> on 2m qubits (x register first).
UnitaryOperator permutation_unitary(const Permutation &f);
/// |q, y> -> |q, y XOR f^-1(q)> on 2m qubits.
UnitaryOperator inversion_oracle(const Permutation &f);
/// Like inversion_oracle but the lowest answer bit is flipped on every q in S.
UnitaryOperator corrupted_inversion_oracle(const Permutation &f, const CorruptionSet &s);

/// Circuit forms of the same maps, bound to named registers (any widths up to
/// kMaxPermutationWidth, no dense matrix is built).
Circuit forward_gate(const Permutation &f, const std::string &input, const std::string &output);
Circuit inversion_gate(const Permutation &f, const std::string &query, const std::string &answer);
Circuit corrupted_inversion_gate(const Permutation &f, const CorruptionSet &s, const std::string &query,
                                 const std::string &answer);

}  // namespace trapsim

#endif
