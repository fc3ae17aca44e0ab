#ifndef TRAPSIM_REJECTION_SAMPLING_H
#define TRAPSIM_REJECTION_SAMPLING_H

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trapsim/circuit.h"
#include "trapsim/distribution.h"
#include "trapsim/operators.h"
#include "trapsim/state.h"

namespace trapsim {

/// Resampling plan from source D to target D'.
struct QrsPlan {
    DistributionTable source;
    DistributionTable target;
    /// 1/beta = min_q d_q / d'_q (over q with d'_q > 0).
    double inv_beta;
    /// alpha_q = d'_q / beta.
    std::vector<double> alpha;

    double beta() const {
        return 1.0 / inv_beta;
    }
    int width() const {
        return source.width();
    }
    /// ceil(4 beta^2) rounds.
    int round_budget() const;
};

/// Throws InvariantError when some d_q = 0 has d'_q > 0.
QrsPlan make_qrs_plan(const DistributionTable &source, const DistributionTable &target);

/// Copies needed for D -> uniform: ceil(1 / (2^m d_min))^2.
uint64_t qrs_gamma(const DistributionTable &d);
/// Copies needed for uniform -> D: ceil(2^m d_max)^2.
uint64_t qrs_gamma_prime(const DistributionTable &d);

/// Block-diagonal rotation on [index (m qubits), flag (1 qubit)]: for each
/// index q the flag goes |0> -> (sqrt(d_q - alpha_q)|0> + sqrt(alpha_q)|1>)/sqrt(d_q).
UnitaryOperator qrs_rotation(const QrsPlan &plan);
/// The same rotation as a gate on named registers of a larger state.
Circuit qrs_gate(const QrsPlan &plan, const std::string &index, const std::string &flag);

struct QrsRound {
    double success_probability;
    /// Conditional state on flag = 1 (same layout as the input); empty if impossible.
    std::optional<StateVector> state;
};

/// One round on a state of shape sum_q sqrt(d_q)|xi_q>|q>, where `index` names
/// the register holding q. Throws InvariantError if the index marginal is not D.
QrsRound qrs_round(const StateVector &state, const QrsPlan &plan, const std::string &index);

struct QrsRun {
    /// Empty when the round budget ran out.
    std::optional<StateVector> state;
    int rounds_used;
    bool succeeded() const {
        return state.has_value();
    }
};

/// Repeats prepare, rotate and measure, with outcomes drawn from a seeded
/// generator, until success or `max_rounds` rounds.
QrsRun qrs_run(const std::function<StateVector()> &prepare, const QrsPlan &plan, const std::string &index,
               int max_rounds, uint64_t seed);

}  // namespace trapsim

#endif
