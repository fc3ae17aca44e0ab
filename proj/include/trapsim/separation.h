#ifndef TRAPSIM_SEPARATION_H
#define TRAPSIM_SEPARATION_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trapsim {

inline constexpr int kMaxSimonWidth = 8;
inline constexpr int kMaxSimonInstances = 64;

/// Family of 2-to-1 functions f_i on n bits with hidden nonzero secrets s_i:
/// f_i(x) = f_i(x') iff x' = x or x' = x XOR s_i.
class GeneralizedSimonOracle {
   public:
    GeneralizedSimonOracle(int n, std::vector<uint64_t> secrets, std::vector<std::vector<uint64_t>> tables);

    int width() const {
        return n_;
    }
    int instances() const {
        return static_cast<int>(secrets_.size());
    }
    uint64_t secret(int i) const {
        return secrets_.at(static_cast<size_t>(i));
    }
    const std::vector<uint64_t> &table(int i) const {
        return tables_.at(static_cast<size_t>(i));
    }
    uint64_t evaluate(int i, uint64_t x) const {
        return table(i)[x];
    }
    /// Checks the collision structure of instance i over all pairs.
    bool audit(int i) const;

   private:
    int n_;
    std::vector<uint64_t> secrets_;
    std::vector<std::vector<uint64_t>> tables_;
};

/// Random nonzero secrets and random labels on the cosets {x, x ^ s}.
GeneralizedSimonOracle build_simon_oracle(int n, int instance_count, uint64_t seed);

/// Per-run query counters, kept apart for quantum and classical callers.
class OracleSession {
   public:
    explicit OracleSession(const GeneralizedSimonOracle &oracle) : oracle_(&oracle) {
    }
    const GeneralizedSimonOracle &oracle() const {
        return *oracle_;
    }
    uint64_t classical_query(int i, uint64_t x);
    /// Records one superposition query; the caller applies the table itself.
    const std::vector<uint64_t> &quantum_query(int i);
    uint64_t classical_queries() const {
        return classical_;
    }
    uint64_t quantum_queries() const {
        return quantum_;
    }

   private:
    const GeneralizedSimonOracle *oracle_;
    uint64_t classical_ = 0;
    uint64_t quantum_ = 0;
};

struct SimonResult {
    /// Empty when the round budget ran out.
    std::optional<uint64_t> secret;
    int rounds;
    uint64_t queries;
    /// Measured vectors y, one per round.
    std::vector<uint64_t> samples;
};

/// Simon rounds (Hadamard, oracle, Hadamard, measure) on a 2n-qubit statevector
/// until the samples span an (n-1)-dimensional space, then GF(2) elimination.
/// Budget: 20n rounds.
SimonResult simon_solve(const GeneralizedSimonOracle &oracle, int i, uint64_t seed);
SimonResult simon_solve(OracleSession &session, int i, uint64_t seed);

/// Nonzero solution s of y.s = 0 for all rows, when the rows have rank n-1.
std::optional<uint64_t> gf2_null_vector(const std::vector<uint64_t> &rows, int n);

struct CollisionResult {
    std::optional<uint64_t> secret;
    uint64_t queries;
};

/// Queries distinct x in a seeded random order until two share a value.
/// With a budget, stops unsuccessfully after that many queries.
CollisionResult classical_collision_count(const GeneralizedSimonOracle &oracle, int i, uint64_t seed);
CollisionResult classical_collision_search(OracleSession &session, int i, uint64_t seed,
                                           std::optional<uint64_t> budget = std::nullopt);

/// Probability that `queries` distinct classical queries to a 2-to-1 function
/// on n bits see no collision.
double birthday_no_collision_probability(int n, uint64_t queries);

/// L(x) = a.x mod 2. Random self-reducible: L(x) = L(x ^ r) ^ L(r).
struct RsrLanguage {
    int n;
    uint64_t a;
    int member(uint64_t x) const {
        return __builtin_popcountll(a & x) & 1;
    }
};

/// Average-case solver for the paired problem (i, s, phi): answers L(phi) only
/// when s is the secret of instance i.
class PairedSolver {
   public:
    PairedSolver(const RsrLanguage &lang, const GeneralizedSimonOracle &oracle) : lang_(lang), oracle_(&oracle) {
    }
    std::optional<int> answer(int instance, uint64_t s, uint64_t phi);
    uint64_t calls() const {
        return calls_;
    }
    uint64_t refusals() const {
        return refusals_;
    }

   private:
    RsrLanguage lang_;
    const GeneralizedSimonOracle *oracle_;
    uint64_t calls_ = 0;
    uint64_t refusals_ = 0;
};

struct QueryRecord {
    int instance;
    uint64_t secret_used;
    uint64_t point;
    std::optional<int> answer;
};

struct DemoResult {
    enum class Status { Decided, Refused };
    Status status;
    /// Decided value of L(x); empty when refused.
    std::optional<int> decision;
    std::vector<uint64_t> shifts;
    std::vector<QueryRecord> ledger;
    uint64_t quantum_queries = 0;
    uint64_t classical_queries = 0;
};

/// Non-adaptive reduction: for each of `shifts` random r it asks the solver for
/// (i, s_i, x ^ r) and (i', s_i', r) with secrets recovered by simon_solve, and
/// recombines the answers by linearity.
DemoResult quantum_reduction_demo(const RsrLanguage &lang, const GeneralizedSimonOracle &oracle, uint64_t x,
                                  uint64_t seed, int shifts = 1);
/// Same, but secrets come from classical collision search limited to `budget`
/// queries per instance. Without a collision the reduction submits its best
/// guess (0), which the solver refuses.
DemoResult classical_reduction_demo(const RsrLanguage &lang, const GeneralizedSimonOracle &oracle, uint64_t x,
                                    uint64_t seed, uint64_t budget, int shifts = 1);

}  // namespace trapsim

#endif
