#include "trapsim/separation.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "trapsim/circuit.h"
#include "trapsim/errors.h"
#include "trapsim/random.h"
#include "trapsim/state.h"

namespace trapsim {

GeneralizedSimonOracle::GeneralizedSimonOracle(int n, std::vector<uint64_t> secrets,
                                               std::vector<std::vector<uint64_t>> tables)
    : n_(n), secrets_(std::move(secrets)), tables_(std::move(tables)) {
    if (n < 1 || n > kMaxSimonWidth) {
        throw ResourceCapError("Simon width must be in [1, " + std::to_string(kMaxSimonWidth) + "]");
    }
    if (secrets_.empty() || secrets_.size() > static_cast<size_t>(kMaxSimonInstances)) {
        throw ResourceCapError("instance count must be in [1, " + std::to_string(kMaxSimonInstances) + "]");
    }
    if (tables_.size() != secrets_.size()) {
        throw DimensionError("one table per secret is required");
    }
    for (size_t i = 0; i < secrets_.size(); i++) {
        if (secrets_[i] == 0 || secrets_[i] >> n) {
            throw InvariantError("secrets must be nonzero n-bit strings");
        }
        if (tables_[i].size() != (uint64_t{1} << n)) {
            throw DimensionError("function table needs 2^n entries");
        }
        for (uint64_t v : tables_[i]) {
            if (v >> n) {
                throw InvariantError("function values must be n-bit strings");
            }
        }
        if (!audit(static_cast<int>(i))) {
            throw InvariantError("function table is not 2-to-1 with the declared secret");
        }
    }
}

bool GeneralizedSimonOracle::audit(int i) const {
    const auto &f = table(i);
    uint64_t s = secret(i);
    for (uint64_t x = 0; x < f.size(); x++) {
        for (uint64_t y = x + 1; y < f.size(); y++) {
            if ((f[x] == f[y]) != (y == (x ^ s))) {
                return false;
            }
        }
    }
    return true;
}

GeneralizedSimonOracle build_simon_oracle(int n, int instance_count, uint64_t seed) {
    if (n < 1 || n > kMaxSimonWidth) {
        throw ResourceCapError("Simon width must be in [1, " + std::to_string(kMaxSimonWidth) + "]");
    }
    if (instance_count < 1 || instance_count > kMaxSimonInstances) {
        throw ResourceCapError("instance count must be in [1, " + std::to_string(kMaxSimonInstances) + "]");
    }
    Rng rng(seed);
    uint64_t size = uint64_t{1} << n;
    std::vector<uint64_t> secrets;
    std::vector<std::vector<uint64_t>> tables;
    for (int i = 0; i < instance_count; i++) {
        uint64_t s = 1 + uniform_below(rng, size - 1);
        // Distinct random labels for the cosets, taken from a shuffled range.
        std::vector<uint64_t> labels(size);
        std::iota(labels.begin(), labels.end(), uint64_t{0});
        for (uint64_t j = size - 1; j > 0; j--) {
            std::swap(labels[j], labels[uniform_below(rng, j + 1)]);
        }
        std::vector<uint64_t> f(size, size);
        uint64_t next = 0;
        for (uint64_t x = 0; x < size; x++) {
            if (f[x] == size) {
                f[x] = f[x ^ s] = labels[next++];
            }
        }
        secrets.push_back(s);
        tables.push_back(std::move(f));
    }
    return GeneralizedSimonOracle(n, std::move(secrets), std::move(tables));
}

uint64_t OracleSession::classical_query(int i, uint64_t x) {
    classical_++;
    return oracle_->evaluate(i, x);
}

const std::vector<uint64_t> &OracleSession::quantum_query(int i) {
    quantum_++;
    return oracle_->table(i);
}

std::optional<uint64_t> gf2_null_vector(const std::vector<uint64_t> &rows, int n) {
    // Reduced row echelon form; bit (n-1-c) of a row is column c.
    std::vector<uint64_t> m;
    std::vector<int> pivots;
    for (uint64_t r : rows) {
        for (size_t k = 0; k < m.size(); k++) {
            if ((r >> (n - 1 - pivots[k])) & 1) {
                r ^= m[k];
            }
        }
        if (r == 0) {
            continue;
        }
        int pc = 0;
        while (!((r >> (n - 1 - pc)) & 1)) {
            pc++;
        }
        for (auto &other : m) {
            if ((other >> (n - 1 - pc)) & 1) {
                other ^= r;
            }
        }
        m.push_back(r);
        pivots.push_back(pc);
    }
    if (static_cast<int>(m.size()) != n - 1) {
        return std::nullopt;
    }
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int p : pivots) {
        is_pivot[static_cast<size_t>(p)] = true;
    }
    int free_col = 0;
    while (is_pivot[static_cast<size_t>(free_col)]) {
        free_col++;
    }
    uint64_t s = uint64_t{1} << (n - 1 - free_col);
    for (size_t k = 0; k < m.size(); k++) {
        if ((m[k] >> (n - 1 - free_col)) & 1) {
            s |= uint64_t{1} << (n - 1 - pivots[k]);
        }
    }
    return s;
}

SimonResult simon_solve(OracleSession &session, int i, uint64_t seed) {
    int n = session.oracle().width();
    RegisterLayout layout({{"x", n}, {"y", n}});
    Rng rng(seed);
    SimonResult res{std::nullopt, 0, 0, {}};
    int budget = 20 * n;
    uint64_t before = session.quantum_queries();
    for (int round = 1; round <= budget; round++) {
        const auto &f = session.quantum_query(i);
        uint64_t size = f.size();
        Circuit c;
        c.hadamard("x", n);
        c.classical({"x", "y"}, 2 * n, [&f, n, size](uint64_t v) { return v ^ f[(v >> n) & (size - 1)]; });
        c.hadamard("x", n);
        StateVector psi = c.apply(StateVector::basis(layout));
        std::vector<double> dist = marginal(psi, "x");
        double u = uniform_unit(rng);
        uint64_t y = size - 1;
        double acc = 0;
        for (uint64_t v = 0; v < size; v++) {
            acc += dist[v];
            if (u < acc) {
                y = v;
                break;
            }
        }
        res.samples.push_back(y);
        res.rounds = round;
        auto s = gf2_null_vector(res.samples, n);
        if (s) {
            res.secret = s;
            break;
        }
    }
    res.queries = session.quantum_queries() - before;
    return res;
}

SimonResult simon_solve(const GeneralizedSimonOracle &oracle, int i, uint64_t seed) {
    OracleSession session(oracle);
    return simon_solve(session, i, seed);
}

CollisionResult classical_collision_search(OracleSession &session, int i, uint64_t seed,
                                           std::optional<uint64_t> budget) {
    uint64_t size = uint64_t{1} << session.oracle().width();
    std::vector<uint64_t> order(size);
    std::iota(order.begin(), order.end(), uint64_t{0});
    Rng rng(seed);
    std::unordered_map<uint64_t, uint64_t> seen;
    uint64_t before = session.classical_queries();
    for (uint64_t j = 0; j < size; j++) {
        if (budget && j >= *budget) {
            break;
        }
        std::swap(order[j], order[j + uniform_below(rng, size - j)]);
        uint64_t x = order[j];
        uint64_t v = session.classical_query(i, x);
        auto [it, fresh] = seen.emplace(v, x);
        if (!fresh) {
            return {it->second ^ x, session.classical_queries() - before};
        }
    }
    return {std::nullopt, session.classical_queries() - before};
}

CollisionResult classical_collision_count(const GeneralizedSimonOracle &oracle, int i, uint64_t seed) {
    OracleSession session(oracle);
    return classical_collision_search(session, i, seed);
}

double birthday_no_collision_probability(int n, uint64_t queries) {
    double size = static_cast<double>(uint64_t{1} << n);
    double p = 1;
    for (uint64_t j = 1; j < queries; j++) {
        double jj = static_cast<double>(j);
        p *= std::max(size - 2 * jj, 0.0) / (size - jj);
    }
    return p;
}

std::optional<int> PairedSolver::answer(int instance, uint64_t s, uint64_t phi) {
    calls_++;
    if (s != oracle_->secret(instance)) {
        refusals_++;
        return std::nullopt;
    }
    return lang_.member(phi);
}

namespace {

template <typename SecretFn>
DemoResult run_demo(const RsrLanguage &lang, const GeneralizedSimonOracle &oracle, uint64_t x, uint64_t seed,
                    int shifts, SecretFn find_secret) {
    if (lang.n < 1 || lang.n > 62 || (x >> lang.n) || (lang.a >> lang.n)) {
        throw DimensionError("input and functional must fit in n bits");
    }
    Rng rng(seed);
    PairedSolver solver(lang, oracle);
    DemoResult res{DemoResult::Status::Decided, std::nullopt, {}, {}, 0, 0};
    OracleSession session(oracle);
    std::optional<int> decision;
    bool refused = false;
    for (int j = 0; j < shifts; j++) {
        uint64_t r = uniform_below(rng, uint64_t{1} << lang.n);
        res.shifts.push_back(r);
        int parts[2];
        uint64_t points[2] = {x ^ r, r};
        for (int k = 0; k < 2; k++) {
            int inst = static_cast<int>(uniform_below(rng, static_cast<uint64_t>(oracle.instances())));
            uint64_t s = find_secret(session, inst, rng());
            auto ans = solver.answer(inst, s, points[k]);
            res.ledger.push_back({inst, s, points[k], ans});
            if (!ans) {
                refused = true;
            } else {
                parts[k] = *ans;
            }
        }
        if (!refused) {
            int d = parts[0] ^ parts[1];
            if (decision && *decision != d) {
                throw InvariantError("shifts disagree on the decision");
            }
            decision = d;
        }
    }
    res.quantum_queries = session.quantum_queries();
    res.classical_queries = session.classical_queries();
    if (refused) {
        res.status = DemoResult::Status::Refused;
    } else {
        res.decision = decision;
    }
    return res;
}

}  // namespace

DemoResult quantum_reduction_demo(const RsrLanguage &lang, const GeneralizedSimonOracle &oracle, uint64_t x,
                                  uint64_t seed, int shifts) {
    return run_demo(lang, oracle, x, seed, shifts, [](OracleSession &session, int inst, uint64_t s) {
        SimonResult found = simon_solve(session, inst, s);
        return found.secret.value_or(0);
    });
}

DemoResult classical_reduction_demo(const RsrLanguage &lang, const GeneralizedSimonOracle &oracle, uint64_t x,
                                    uint64_t seed, uint64_t budget, int shifts) {
    return run_demo(lang, oracle, x, seed, shifts, [budget](OracleSession &session, int inst, uint64_t s) {
        CollisionResult found = classical_collision_search(session, inst, s, budget);
        return found.secret.value_or(0);
    });
}

}  // namespace trapsim
