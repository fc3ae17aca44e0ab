#ifndef TRAPSIM_REDUCTION_H
#define TRAPSIM_REDUCTION_H

#include <cstdint>
#include <string>
#include <vector>

#include "trapsim/circuit.h"
#include "trapsim/distribution.h"
#include "trapsim/oracle.h"
#include "trapsim/state.h"

namespace trapsim {

/// Register names of copy i: query q, answer a (message side), then w, the
/// bookkeeping copy c of q and the decision qubit out (verifier side). An
/// amplified reduction adds the majority qubit "maj".
struct CopyRegisters {
    std::string q, a, w, c, out;
    static CopyRegisters of(int copy);
};

inline const std::string kMajority = "maj";

/// Layout of M and V for t copies of width m, message registers first:
/// q0 a0 q1 a1 ... w0 c0 out0 w1 c1 out1 ... [maj].
RegisterLayout mv_layout(int m, int t);
/// Same registers in copy-major order: q0 a0 w0 c0 out0 q1 ... [maj].
std::vector<std::string> copy_major_order(int m, int t);
std::vector<std::string> message_first_order(int m, int t);
std::vector<std::string> message_registers(int t);

/// Reorders a t-copy state from copy-major to message-first order, and back.
StateVector rearrange(const StateVector &copy_major, int t);
StateVector unrearrange(const StateVector &message_first, int t);

/// Synthetic one-query reduction for L(x) = bit `bit` of x XOR s, relative to
/// f = xor_shift_permutation(m, s), optionally noisy and amplified by parallel
/// repetition. G is parameterized by the classical input x; both G and R are
/// kept as circuits over mv_layout(m, t).
class Reduction {
   public:
    const std::string &family() const {
        return family_;
    }
    int m() const {
        return m_;
    }
    uint64_t shift() const {
        return s_;
    }
    int bit() const {
        return bit_;
    }
    /// Number of parallel copies (1 unless amplified).
    int copies() const {
        return t_;
    }
    /// Total query count k.
    int k() const {
        return t_;
    }
    /// Error of one copy's decision.
    double base_epsilon() const {
        return eps_;
    }
    /// Error of the full decision (binomial tail for amplified reductions).
    double epsilon() const;
    const std::vector<DistributionTable> &distributions() const {
        return dists_;
    }
    const DistributionTable &distribution() const {
        return dists_.front();
    }
    bool uniform_queries() const {
        return dists_.front().is_uniform();
    }
    /// The permutation the reduction is built against.
    Permutation permutation() const;
    RegisterLayout layout() const {
        return mv_layout(m_, t_);
    }
    /// Register holding the decision.
    std::string output_register() const {
        return t_ == 1 ? CopyRegisters::of(0).out : kMajority;
    }

    int language(uint64_t x) const;

    /// G(x) on mv_layout: queries on q_i, w_i = q_i XOR x.
    Circuit generator(uint64_t x) const;
    /// G for a single copy i (touches q_i and w_i only).
    Circuit copy_generator(int copy, uint64_t x) const;
    /// R on mv_layout; reads q_i, a_i, w_i and writes the decision qubits.
    Circuit decider() const;
    Circuit copy_decider(int copy) const;
    /// Dense forms, for layouts of at most 12 qubits.
    UnitaryOperator generator_unitary(uint64_t x) const;
    UnitaryOperator decider_unitary() const;

    friend Reduction build_xor_reduction(int m, uint64_t s, int bit);
    friend Reduction build_smooth_xor_reduction(int m, uint64_t s, int bit, const DistributionTable &d);
    friend Reduction add_noise(const Reduction &r, double eps);
    friend Reduction amplify(const Reduction &r, int t);

   private:
    Reduction() = default;
    void check_input(uint64_t x) const;

    std::string family_;
    int m_ = 0;
    uint64_t s_ = 0;
    int bit_ = 0;
    int t_ = 1;
    double eps_ = 0;
    std::vector<DistributionTable> dists_;
};

Reduction build_xor_reduction(int m, uint64_t s, int bit);
/// Throws InvariantError unless d is smooth.
Reduction build_smooth_xor_reduction(int m, uint64_t s, int bit, const DistributionTable &d);
/// Rotates every copy's decision qubit by arcsin(sqrt(eps)) toward the wrong answer.
/// Only applies to an exact, unamplified reduction.
Reduction add_noise(const Reduction &r, double eps);
/// t parallel copies with a reversible majority vote into "maj". t must be odd.
Reduction amplify(const Reduction &r, int t);

/// sum_{u > t/2} C(t, u) eps^u (1 - eps)^(t - u).
double binomial_tail(double eps, int t);

/// Real unitary whose first column is the given unit vector (Householder reflection).
Eigen::MatrixXcd state_preparation(const Eigen::VectorXd &target);

/// G(x)|0> followed by c_i ^= q_i on every copy.
StateVector generate_query_state(const Reduction &r, uint64_t x);
/// Inversion oracle for f applied on every (q_i, a_i) of the query state.
StateVector honest_answer_state(const Reduction &r, uint64_t x, const Permutation &f);

/// Probability that R's decision differs from L(x) under the honest oracle for f.
/// Each copy is simulated on its own registers; the copies' decision qubits are
/// then combined as a density operator and the majority gate applied to it.
double decision_error(const Reduction &r, uint64_t x, const Permutation &f);
/// Same quantity from a single statevector over the whole layout (small sizes only).
double decision_error_full(const Reduction &r, uint64_t x, const Permutation &f);

}  // namespace trapsim

#endif
