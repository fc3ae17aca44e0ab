#ifndef TRAPSIM_PROTOCOL_H
#define TRAPSIM_PROTOCOL_H

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trapsim/circuit.h"
#include "trapsim/oracle.h"
#include "trapsim/reduction.h"
#include "trapsim/state.h"

namespace trapsim {

/// Name of the prover's private workspace register.
inline const std::string kProverWorkspace = "P";
/// Name of the branch-label register of the superposed query.
inline const std::string kBranch = "pi";

/// Which outcome of R the verifier accepts. Complement (the default) accepts
/// decision 0, i.e. the protocol decides the complement of L.
enum class Convention { Complement, Language };

/// A prover in normal form: the inversion oracle followed by U' on P (x) M, or
/// a fixed classical answer table written into every answer register.
class Prover {
   public:
    enum class Kind { Honest, UnitaryCheat, Classical };

    static Prover honest();
    /// `u` acts on [P, q0, a0, q1, a1, ...] with P the most significant register.
    /// Throws InvariantError unless u is unitary within kTol.
    static Prover unitary_cheat(Eigen::MatrixXcd u, int workspace_qubits);
    /// Answers a = answers[q] for every query q (no oracle call).
    static Prover classical(std::vector<uint64_t> answers);
    /// The inversion oracle for f with the lowest answer bit flipped on S.
    static Prover corrupted(const Permutation &f, const CorruptionSet &s);

    Kind kind() const {
        return kind_;
    }
    std::string kind_name() const;
    int workspace_qubits() const {
        return p_qubits_;
    }
    const Eigen::MatrixXcd &cheat() const {
        return u_;
    }
    const std::vector<uint64_t> &answers() const {
        return answers_;
    }

    /// The prover's action on a state laid out as [P?] + mv_layout(m, t).
    Circuit circuit(const Permutation &f, int t) const;

   private:
    Kind kind_ = Kind::Honest;
    int p_qubits_ = 0;
    Eigen::MatrixXcd u_;
    std::vector<uint64_t> answers_;
};

struct RunOptions {
    Convention convention = Convention::Complement;
    /// Keep the post-verification branch states in the result.
    bool keep_states = false;
    /// When positive, also draw this many accept/reject outcomes (and, for the
    /// smooth protocol, rejection-sampling rounds) from `sample_seed`.
    int samples = 0;
    uint64_t sample_seed = 0;
    /// Simulate the copies of an amplified reduction one at a time even when
    /// the joint state fits (honest and classical provers only).
    bool factorize = false;
};

struct ProtocolResult {
    std::string protocol;
    int m = 0;
    int k = 0;
    int t = 1;
    double eps = 0;
    uint64_t x = 0;
    std::string prover_kind;
    /// Computation-branch acceptance Tr(Pi_R rho0).
    double p0 = 0;
    /// Trap-branch acceptance <T^H|rho1|T^H>.
    double p1 = 0;
    double accept_prob = 0;
    int workspace_qubits = 0;
    /// True when the copies were simulated one at a time (honest-type provers only).
    bool factorized = false;

    /// Rejection-sampling data (smooth protocol).
    double send_success = 1;
    double receive_success = 1;
    uint64_t gamma = 0;
    uint64_t gamma_prime = 0;
    int send_rounds = 0;
    int receive_rounds = 0;

    /// Classical-query protocol: acceptance conditioned on each query tuple.
    std::vector<double> query_accept;

    /// Seeded accept (1) / reject (0) draws.
    std::vector<int> draws;

    std::optional<StateVector> computation_state;
    std::optional<StateVector> trap_state;
};

/// sum_q |q, 0>_M |0, q>_V on mv_layout(m, t) (t independent copies).
StateVector trap_state(int m, int t = 1);
/// The honest reply to the trap: sum_q |q, f^-1(q)>_M |0, q>_V per copy.
StateVector trap_response(const Permutation &f, int t = 1);
/// (|Q>|0>_pi + |T>|1>_pi)/sqrt(2) over mv_layout + "pi", built by controlling
/// both preparations on pi after a Hadamard.
StateVector prepare_superposed_query(const Reduction &r, uint64_t x);

/// V_T on [q, a, c]: c ^= q, then q ^= f(a), then Hadamard on a.
UnitaryOperator trap_verifier(const Permutation &f);
/// V_T for copy i of a larger state.
Circuit trap_verifier_gate(const Permutation &f, int copy);

ProtocolResult run_protocol(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                            const RunOptions &options = {});
ProtocolResult run_multiquery_protocol(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                                       const RunOptions &options = {});
/// Pass gamma = gamma_prime = 0 to use the copy counts from the distribution.
ProtocolResult run_smooth_protocol(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                                   uint64_t gamma = 0, uint64_t gamma_prime = 0, const RunOptions &options = {});
ProtocolResult run_classical_query_protocol(const Reduction &r, const Permutation &f, uint64_t x,
                                            const Prover &prover, const RunOptions &options = {});

/// Acceptance of Protocol 1 simulated with the branch register in superposition
/// (the prover sees one state; pi is measured after it replies).
double superposed_accept_probability(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                                     Convention convention = Convention::Complement);

/// The query state with t copies assembled copy by copy and then rearranged
/// into message-first order.
StateVector rearranged_query_state(const Reduction &r, uint64_t x);

struct CheatBound {
    /// sin^2(theta) = <Q^H|Pi_R|Q^H>.
    double sin2_theta;
    /// (1 + sin(theta)) / 2.
    double closed_form;
    /// lambda_max(Pi_R + |Q^H><Q^H|) / 2.
    double eigen_oracle;
    bool used_lanczos;
};

/// Ceiling on any prover's acceptance. Throws InvariantError if the closed form
/// and the eigenvalue oracle disagree by more than kTol.
CheatBound cheat_upper_bound(const Reduction &r, const Permutation &f, uint64_t x,
                             Convention convention = Convention::Complement);

/// Fast exact evaluation of a cheat unitary U' on P (x) M for a fixed instance.
class CheatEvaluator {
   public:
    CheatEvaluator(const Reduction &r, const Permutation &f, uint64_t x, int workspace_qubits,
                   Convention convention = Convention::Complement);

    struct Value {
        double p0;
        double p1;
        double accept;
        /// <Q^H|sigma_Q|Q^H>; equals p1 whenever the reduced states on M agree.
        double query_overlap;
    };
    Value evaluate(const Eigen::MatrixXcd &u) const;
    Eigen::Index dimension() const {
        return dim_p_ * dim_m_;
    }

   private:
    int t_;
    int p_qubits_;
    Eigen::Index dim_p_;
    Eigen::Index dim_m_;
    Eigen::Index dim_v_;
    RegisterLayout full_;
    int output_shift_;
    uint64_t accept_value_;
    Eigen::MatrixXcd query_;
    Eigen::MatrixXcd trap_;
    Circuit verify_;
};

struct SearchResult {
    Prover prover;
    double achieved;
    double p0;
    double p1;
    /// Best acceptance after each iteration.
    std::vector<double> trace;
};

/// Seeded hill climbing over unitaries on P (x) M: small Givens rotations
/// applied on the left, Haar-random restarts every 250 iterations, starting
/// from the identity. Returns the best prover seen.
SearchResult prover_search(const Reduction &r, const Permutation &f, uint64_t x, int workspace_qubits, int iters,
                           uint64_t seed, Convention convention = Convention::Complement);

}  // namespace trapsim

#endif
