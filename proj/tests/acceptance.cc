#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "trapsim/analysis.h"
#include "trapsim/distribution.h"
#include "trapsim/measures.h"
#include "trapsim/oracle.h"
#include "trapsim/protocol.h"
#include "trapsim/random.h"
#include "trapsim/reduction.h"
#include "trapsim/rejection_sampling.h"
#include "trapsim/separation.h"

using namespace trapsim;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::vector<uint64_t> inputs_with(const Reduction &r, int value) {
    std::vector<uint64_t> out;
    for (uint64_t x = 0; x < (uint64_t{1} << r.m()); x++) {
        if (r.language(x) == value) {
            out.push_back(x);
        }
    }
    return out;
}

std::string fmt(const char *format, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

Outcome completeness() {
    double worst = 0;
    int cases = 0;
    for (int m : {2, 3}) {
        for (double eps : {0.0, 0.1, 0.25}) {
            auto r = add_noise(build_xor_reduction(m, 1, 0), eps);
            for (uint64_t x : inputs_with(r, 0)) {
                auto res = run_protocol(r, r.permutation(), x, Prover::honest());
                worst = std::max(worst, std::abs(res.accept_prob - (1 - eps / 2)));
                cases++;
            }
        }
    }
    return {worst <= kTol, fmt("%.0f cases, max |accept - (1 - eps/2)| = %.3g", cases, worst)};
}

Outcome soundness() {
    const int seeds = 20;
    const int iters = 1000;
    const int workspace = 2;
    double worst_gap = -1;
    double worst_oracle = 0;
    int searches = 0;
    for (double eps : {0.0, 0.1, 0.25}) {
        auto r = add_noise(build_xor_reduction(2, 0b10, 0), eps);
        double ceiling = 0.5 * (1 + std::sqrt(eps));
        for (uint64_t x : inputs_with(r, 1)) {
            auto bound = cheat_upper_bound(r, r.permutation(), x);
            worst_oracle = std::max(worst_oracle, std::abs(bound.closed_form - bound.eigen_oracle));
            worst_oracle = std::max(worst_oracle, std::abs(bound.closed_form - ceiling));
            for (int s = 0; s < seeds; s++) {
                auto res = prover_search(r, r.permutation(), x, workspace, iters, static_cast<uint64_t>(s));
                worst_gap = std::max(worst_gap, res.achieved - ceiling);
                searches++;
            }
        }
    }
    bool pass = worst_gap <= kTol && worst_oracle <= kTol;
    return {pass, fmt("%.0f searches, max (achieved - ceiling) = %.3g, max bound/oracle gap = %.3g", searches,
                      worst_gap, worst_oracle)};
}

// <H|sigma|H> for sigma = Tr_P(U' (|0><0|_P (x) |H><H|) U'^dag), U' on [P, q0, a0].
double branch_overlap(const StateVector &h, const Eigen::MatrixXcd &u, int p) {
    auto start = tensor_product(StateVector::basis(RegisterLayout::single(kProverWorkspace, p)), h);
    RegisterLayout local({{kProverWorkspace, p}, {"q0", 2}, {"a0", 2}});
    auto out = apply_on_registers(start, UnitaryOperator(local, u), {kProverWorkspace, "q0", "a0"});
    Eigen::Index block = h.amplitudes().size();
    double total = 0;
    for (Eigen::Index k = 0; k < (Eigen::Index{1} << p); k++) {
        total += std::norm(h.amplitudes().dot(out.amplitudes().segment(k * block, block)));
    }
    return total;
}

Outcome claim_one() {
    Rng rng(101);
    const int p = 2;
    double worst = 0;
    for (int i = 0; i < 100; i++) {
        double eps = i % 2 ? 0.1 : 0.25;
        auto r = add_noise(build_xor_reduction(2, 0b01 + static_cast<uint64_t>(i % 3), i % 2), eps);
        auto f = r.permutation();
        uint64_t x = static_cast<uint64_t>(i % 4);
        Eigen::MatrixXcd u = haar_unitary(Eigen::Index{1} << (p + 4), rng);
        double q = branch_overlap(honest_answer_state(r, x, f), u, p);
        double t = branch_overlap(trap_response(f), u, p);
        worst = std::max(worst, std::abs(q - t));
    }
    return {worst <= kTol, fmt("100 Haar cheats, max |<Q^H|s_Q|Q^H> - <T^H|s_T|T^H>| = %.3g", worst)};
}

Outcome report_suite(const std::vector<LemmaReport> &reports, const std::string &what) {
    int failures = 0;
    double worst = 0;
    for (const auto &r : reports) {
        failures += r.pass ? 0 : 1;
        worst = std::max(worst, std::abs(r.left - r.right));
    }
    std::ostringstream os;
    os << reports.size() << " " << what << ", failures = " << failures << ", max |left - right| = " << worst;
    return {failures == 0, os.str()};
}

Outcome trap_verifier_check() {
    double worst = 0;
    for (int m : {2, 3}) {
        for (uint64_t seed = 0; seed < 20; seed++) {
            auto f = random_permutation(m, 500 + seed);
            auto v = trap_verifier_gate(f, 0).apply(trap_response(f));
            worst = std::max(worst, std::abs(v.amplitude(0) - cplx(1, 0)));
        }
    }
    return {worst <= kTol, fmt("40 permutations, max |<0|V_T|T^H> - 1| = %.3g", worst)};
}

Outcome amplification() {
    const double eps = 1.0 / 3.0;
    double worst = 0;
    for (int t : {3, 5, 7}) {
        auto r = amplify(add_noise(build_xor_reduction(2, 0b10, 0), eps), t);
        for (uint64_t x = 0; x < 4; x++) {
            worst = std::max(worst, std::abs(decision_error(r, x, r.permutation()) - binomial_tail(eps, t)));
        }
    }
    auto r3 = amplify(add_noise(build_xor_reduction(1, 1, 0), eps), 3);
    for (uint64_t x = 0; x < 2; x++) {
        worst = std::max(worst, std::abs(decision_error_full(r3, x, r3.permutation()) - 7.0 / 27.0));
    }
    worst = std::max(worst, std::abs(binomial_tail(eps, 3) - 7.0 / 27.0));
    return {worst <= kTol, fmt("t in {3,5,7}, max |simulated - binomial tail| = %.3g", worst)};
}

DistributionTable random_smooth_table(int m, Rng &rng) {
    std::vector<double> w(uint64_t{1} << m);
    double total = 0;
    for (auto &v : w) {
        v = 1 + 3 * uniform_unit(rng);
        total += v;
    }
    for (auto &v : w) {
        v /= total;
    }
    double rest = 0;
    for (size_t i = 1; i < w.size(); i++) {
        rest += w[i];
    }
    w[0] = 1 - rest;
    return DistributionTable(m, w);
}

StateVector profile_state(const DistributionTable &d, const std::vector<Eigen::VectorXcd> &xi) {
    RegisterLayout layout({{"xi", 2}, {"index", d.width()}});
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
    for (uint64_t q = 0; q < d.size(); q++) {
        for (uint64_t k = 0; k < 4; k++) {
            v(static_cast<Eigen::Index>(layout.index_of({{"xi", k}, {"index", q}}))) =
                std::sqrt(d[q]) * xi[q](static_cast<Eigen::Index>(k));
        }
    }
    return StateVector(layout, v);
}

Outcome rejection_sampling() {
    Rng rng(202);
    const int trials = 10000;
    double worst_success = 0;
    double worst_distance = 0;
    double worst_sigma = 0;
    for (int i = 0; i < 10; i++) {
        int m = 2 + i % 2;
        auto d = random_smooth_table(m, rng);
        std::vector<Eigen::VectorXcd> xi;
        for (uint64_t q = 0; q < d.size(); q++) {
            xi.push_back(haar_state(4, rng));
        }
        auto u = DistributionTable::uniform(m);
        for (const auto &[from, to] : {std::pair{d, u}, std::pair{u, d}}) {
            auto plan = make_qrs_plan(from, to);
            double inv_beta = 1e300;
            for (uint64_t q = 0; q < from.size(); q++) {
                inv_beta = std::min(inv_beta, from[q] / to[q]);
            }
            auto source = profile_state(from, xi);
            auto round = qrs_round(source, plan, "index");
            worst_success = std::max(worst_success, std::abs(round.success_probability - inv_beta));
            auto target = DensityOperator::from_pure(profile_state(to, xi));
            worst_distance =
                std::max(worst_distance, trace_distance(DensityOperator::from_pure(*round.state), target));
            int ok = 0;
            for (int k = 0; k < trials; k++) {
                ok += qrs_run([&] { return source; }, plan, "index", 1, 1000 * static_cast<uint64_t>(i) + k)
                          .succeeded();
            }
            double sigma = std::sqrt(inv_beta * (1 - inv_beta) / trials);
            double rate = static_cast<double>(ok) / trials;
            worst_sigma = std::max(worst_sigma, sigma > 0 ? std::abs(rate - inv_beta) / sigma : 0.0);
        }
    }
    bool pass = worst_success <= kTol && worst_distance <= kTol && worst_sigma <= 3;
    return {pass, fmt("20 plans, max |success - 1/beta| = %.3g, max trace distance = %.3g, max deviation = %.2f "
                      "sigma",
                      worst_success, worst_distance, worst_sigma)};
}

Outcome epr() {
    double worst = 0;
    for (uint64_t seed = 0; seed < 10; seed++) {
        auto f = random_permutation(3, 700 + seed);
        auto plain = epr_without_oracle(f);
        // Independent reference: sum_q |q, q, f^-1(q)> / sqrt(8) written directly.
        Eigen::VectorXcd ref = Eigen::VectorXcd::Zero(plain.amplitudes().size());
        for (uint64_t q = 0; q < 8; q++) {
            ref(static_cast<Eigen::Index>(plain.layout().index_of({{"r1", q}, {"r2", q}, {"r3", f.inverse(q)}}))) =
                1 / std::sqrt(8.0);
        }
        worst = std::max(worst, std::abs(fidelity(plain, StateVector(plain.layout(), ref)) - 1));
        worst = std::max(worst, std::abs(epr_trivialization(f).left - 1));
    }
    return {worst <= kTol, fmt("10 permutations at m=3, max |fidelity - 1| = %.3g", worst)};
}

Outcome classical_query_lies() {
    auto r = build_xor_reduction(2, 0b01, 0);
    auto f = r.permutation();
    double worst = 0;
    double overall = 0;
    int provers = 0;
    for (uint64_t x : inputs_with(r, 0)) {
        for (uint64_t q = 0; q < 4; q++) {
            for (uint64_t wrong = 0; wrong < 4; wrong++) {
                if (wrong == f.inverse(q)) {
                    continue;
                }
                auto answers = f.inverse_table();
                answers[q] = wrong;
                auto res = run_classical_query_protocol(r, f, x, Prover::classical(answers));
                worst = std::max(worst, res.query_accept[q]);
                overall = std::max(overall, res.accept_prob);
                provers++;
            }
        }
    }
    return {worst == 0.0, fmt("%.0f single-lie provers, max accept given the lie is sent = %.3g (unconditional "
                              "max %.3g)",
                              provers, worst, overall)};
}

Outcome separation_ledger() {
    const int n = 8;
    int recovered = 0;
    uint64_t max_quantum = 0;
    std::vector<uint64_t> classical;
    for (uint64_t seed = 0; seed < 100; seed++) {
        auto o = build_simon_oracle(n, 1, seed);
        auto q = simon_solve(o, 0, seed + 10000);
        if (q.secret == o.secret(0) && q.queries <= static_cast<uint64_t>(20 * n)) {
            recovered++;
        }
        max_quantum = std::max(max_quantum, q.queries);
        classical.push_back(classical_collision_count(o, 0, seed + 20000).queries);
    }
    std::sort(classical.begin(), classical.end());
    double median = 0.5 * static_cast<double>(classical[49] + classical[50]);
    bool pass = recovered == 100 && median >= 16;
    return {pass, fmt("recovered %.0f/100 with max %.0f quantum queries, classical median %.1f", recovered,
                      static_cast<double>(max_quantum), median)};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        double time_limit;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {"completeness", 5, completeness},
        {"soundness_ceiling", 120, soundness},
        {"claim1_equality", 0, claim_one},
        {"purification_suite", 0, [] { return report_suite(purification_suite(200, 1), "instances"); }},
        {"maxproj_sandwich", 0, [] { return report_suite(maxproj_suite(100, 2), "checks"); }},
        {"trap_verifier", 0, trap_verifier_check},
        {"amplification", 0, amplification},
        {"rejection_sampling", 0, rejection_sampling},
        {"epr_trivialization", 0, epr},
        {"classical_query_lies", 0, classical_query_lies},
        {"separation_ledger", 60, separation_ledger},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); i++) {
        const auto &c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && secs >= c.time_limit) {
            out.pass = false;
            out.detail += fmt("; over the %.0f s limit", c.time_limit);
        }
        std::printf("%s C%zu %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", i + 1, c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
