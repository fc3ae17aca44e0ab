#ifndef TRAPSIM_ANALYSIS_H
#define TRAPSIM_ANALYSIS_H

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trapsim/operators.h"
#include "trapsim/oracle.h"
#include "trapsim/state.h"

namespace trapsim {

/// Outcome of checking one instance of an identity or inequality numerically.
struct LemmaReport {
    enum class Relation { Equal, AtMost };

    std::string lemma;
    /// Short digest of the instance (seed, dimensions, ...).
    std::string inputs;
    double left;
    double right;
    double tolerance;
    Relation relation;
    bool pass;

    static LemmaReport make(std::string lemma, std::string inputs, double left, double right, double tolerance,
                            Relation relation = Relation::Equal);
    /// One-line JSON object.
    std::string to_json() const;
};

/// Applies `channel` to the `system` registers of both purifications and compares
/// <phi|rho|phi> with <psi|sigma|psi>. `system` defaults to the first register.
/// Throws InvariantError when the two states do not reduce to the same state on `system`.
LemmaReport purification_invariance(const KrausChannel &channel, const StateVector &phi, const StateVector &psi,
                                    std::vector<std::string> system = {});

/// <phi|(Psi (x) I)(|phi><phi|)|phi>, evaluated as sum_l |<phi|(E_l (x) I)|phi>|^2.
double channel_self_overlap(const KrausChannel &channel, const StateVector &phi,
                            const std::vector<std::string> &system);

/// 1 + sin(theta) with sin^2(theta) = <phi|Pi|phi>. Throws InvariantError if Pi is not a projector.
double maxproj_closed_form(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi);
/// Largest eigenvalue of Pi + |phi><phi|.
double maxproj_eigen_oracle(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi);
/// <psi|Pi|psi> + |<phi|psi>|^2.
double maxproj_objective(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi,
                         const Eigen::VectorXcd &psi);
/// The state bisecting Pi phi and (I - Pi) phi at which the objective peaks.
/// Throws InvariantError when <phi|Pi|phi> is 0 or 1.
Eigen::VectorXcd maxproj_optimizer_state(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi);

void check_projector(const Eigen::MatrixXcd &projector);

/// Builds sum_q |q, q, f^-1(q)> once with the inversion oracle and once with the
/// oracle-free circuit (H, U_f, copy, swap of the outer registers) and reports
/// their fidelity against 1.
LemmaReport epr_trivialization(const Permutation &f);
StateVector epr_with_oracle(const Permutation &f);
StateVector epr_without_oracle(const Permutation &f);

/// Seeded property suites used by the CLI.
std::vector<LemmaReport> purification_suite(int instances, uint64_t seed);
std::vector<LemmaReport> maxproj_suite(int instances, uint64_t seed);
std::vector<LemmaReport> epr_suite(int instances, uint64_t seed);

}  // namespace trapsim

#endif
