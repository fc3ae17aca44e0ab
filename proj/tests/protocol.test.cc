#include <gtest/gtest.h>

#include <cmath>

#include "trapsim/errors.h"
#include "trapsim/measures.h"
#include "trapsim/oracle.h"
#include "trapsim/protocol.h"
#include "trapsim/random.h"
#include "trapsim/reduction.h"

using namespace trapsim;

namespace {

std::vector<uint64_t> inputs_with(const Reduction &r, int value) {
    std::vector<uint64_t> out;
    for (uint64_t x = 0; x < (uint64_t{1} << r.m()); x++) {
        if (r.language(x) == value) {
            out.push_back(x);
        }
    }
    return out;
}

Prover haar_cheat(const Reduction &r, int p, Rng &rng) {
    auto dim = Eigen::Index{1} << (p + 2 * r.m() * r.copies());
    return Prover::unitary_cheat(haar_unitary(dim, rng), p);
}

}  // namespace

TEST(trap_state, single_qubit_expansion) {
    auto t = trap_state(1);
    const auto &layout = t.layout();
    ASSERT_NEAR(t.amplitude(layout.index_of({{"q0", 0}, {"c0", 0}})).real(), M_SQRT1_2, kTol);
    ASSERT_NEAR(t.amplitude(layout.index_of({{"q0", 1}, {"c0", 1}})).real(), M_SQRT1_2, kTol);
    ASSERT_NEAR(t.norm_squared(), 1.0, kTol);
}

TEST(trap_state, message_marginal) {
    auto t = trap_state(2);
    auto rho = partial_trace(t, {"q0", "a0"});
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(16, 16);
    for (Eigen::Index q = 0; q < 4; q++) {
        expect(q * 4, q * 4) = 0.25;
    }
    ASSERT_NEAR((rho.matrix() - expect).norm(), 0.0, kTol);
}

TEST(trap_state, equals_query_state_with_zero_workspace) {
    // The query state with the w register cleared is the trap state.
    auto r = build_xor_reduction(2, 0b10, 1);
    auto q = generate_query_state(r, 0b01);
    Circuit clear;
    clear.xor_into("q0", "w0", 2);
    clear.classical({"w0"}, 2, [](uint64_t v) { return v ^ 0b01; });
    ASSERT_NEAR(std::abs(inner(clear.apply(q), trap_state(2))), 1.0, kTol);
}

TEST(prepare_superposed_query, branches) {
    auto r = add_noise(build_xor_reduction(2, 0b01, 0), 0.1);
    auto s = prepare_superposed_query(r, 0b10);
    ASSERT_NEAR(s.norm_squared(), 1.0, kTol);
    ASSERT_NEAR(probability(s, kBranch, 0), 0.5, kTol);
    ASSERT_NEAR(probability(s, kBranch, 1), 0.5, kTol);
    auto q = postselect(s, kBranch, 0);
    ASSERT_NEAR(std::abs(inner(*q.state, generate_query_state(r, 0b10))), 1.0, kTol);
    auto t = postselect(s, kBranch, 1);
    ASSERT_NEAR(std::abs(inner(*t.state, trap_state(2))), 1.0, kTol);
}

TEST(trap_verifier, maps_trap_response_to_zero) {
    auto f = xor_shift_permutation(2, 0b01);
    auto out = trap_verifier_gate(f, 0).apply(trap_response(f));
    ASSERT_NEAR(std::abs(out.amplitude(0)), 1.0, kTol);
    for (int m : {2, 3}) {
        for (uint64_t seed = 0; seed < 10; seed++) {
            auto g = random_permutation(m, seed);
            auto v = trap_verifier_gate(g, 0).apply(trap_response(g));
            ASSERT_NEAR(std::abs(v.amplitude(0)), 1.0, kTol);
        }
    }
}

TEST(trap_verifier, identity_single_qubit) {
    auto f = Permutation::identity(1);
    auto u = trap_verifier(f);
    // Local layout [q, a, c]; the trap response is (|0,0,0> + |1,1,1>)/sqrt 2.
    Eigen::VectorXcd th = Eigen::VectorXcd::Zero(8);
    th(0) = th(7) = M_SQRT1_2;
    Eigen::VectorXcd out = u.matrix() * th;
    ASSERT_NEAR(std::abs(out(0)), 1.0, kTol);
}

TEST(trap_verifier, distinguishes_query_branch) {
    auto r = build_xor_reduction(2, 0b11, 0);
    auto f = r.permutation();
    for (uint64_t x = 0; x < 4; x++) {
        auto v = trap_verifier_gate(f, 0).apply(honest_answer_state(r, x, f));
        ASSERT_LT(probability_all_zero(v, v.layout().names()), 1.0 - 1e-6);
    }
}

TEST(purification_precondition, query_and_trap_agree_on_message) {
    for (double eps : {0.0, 0.25}) {
        auto r = add_noise(build_xor_reduction(2, 0b10, 1), eps);
        auto f = r.permutation();
        auto th = partial_trace(trap_response(f), {"q0", "a0"});
        for (uint64_t x = 0; x < 4; x++) {
            auto qh = partial_trace(honest_answer_state(r, x, f), {"q0", "a0"});
            ASSERT_LE((qh.matrix() - th.matrix()).cwiseAbs().maxCoeff(), kTol);
        }
    }
}

TEST(run_protocol, completeness_one_minus_half_eps) {
    for (int m : {2, 3}) {
        for (double eps : {0.0, 0.1, 0.25}) {
            auto r = add_noise(build_xor_reduction(m, 1, 0), eps);
            for (uint64_t x : inputs_with(r, 0)) {
                auto res = run_protocol(r, r.permutation(), x, Prover::honest());
                ASSERT_NEAR(res.accept_prob, 1 - eps / 2, kTol);
                ASSERT_NEAR(res.p1, 1.0, kTol);
            }
        }
    }
}

TEST(run_protocol, honest_on_member_is_one_half) {
    auto r = build_xor_reduction(2, 0b01, 0);
    for (uint64_t x : inputs_with(r, 1)) {
        auto res = run_protocol(r, r.permutation(), x, Prover::honest());
        ASSERT_NEAR(res.p0, 0.0, kTol);
        ASSERT_NEAR(res.p1, 1.0, kTol);
        ASSERT_NEAR(res.accept_prob, 0.5, kTol);
    }
}

TEST(run_protocol, language_convention_flips_computation_branch) {
    auto r = add_noise(build_xor_reduction(2, 0b01, 0), 0.1);
    RunOptions opts;
    opts.convention = Convention::Language;
    for (uint64_t x : inputs_with(r, 1)) {
        auto res = run_protocol(r, r.permutation(), x, Prover::honest(), opts);
        ASSERT_NEAR(res.p0, 0.9, kTol);
    }
}

TEST(run_protocol, identity_cheat_equals_honest) {
    auto r = add_noise(build_xor_reduction(2, 0b10, 1), 0.25);
    for (int p : {0, 2}) {
        auto id = Prover::unitary_cheat(Eigen::MatrixXcd::Identity(Eigen::Index{16} << p, Eigen::Index{16} << p), p);
        for (uint64_t x = 0; x < 4; x++) {
            auto a = run_protocol(r, r.permutation(), x, Prover::honest());
            auto b = run_protocol(r, r.permutation(), x, id);
            ASSERT_NEAR(a.p0, b.p0, kTol);
            ASSERT_NEAR(a.p1, b.p1, kTol);
        }
    }
}

TEST(run_protocol, branch_probabilities_in_range) {
    Rng rng(2);
    auto r = add_noise(build_xor_reduction(2, 0b11, 1), 0.1);
    for (int i = 0; i < 10; i++) {
        auto res = run_protocol(r, r.permutation(), static_cast<uint64_t>(i % 4), haar_cheat(r, 1, rng));
        for (double p : {res.p0, res.p1}) {
            ASSERT_GE(p, -kTol);
            ASSERT_LE(p, 1 + kTol);
        }
        ASSERT_NEAR(res.accept_prob, 0.5 * (res.p0 + res.p1), 1e-15);
    }
}

TEST(run_protocol, superposed_branch_register_agrees) {
    Rng rng(4);
    auto r = add_noise(build_xor_reduction(2, 0b01, 1), 0.25);
    for (int i = 0; i < 10; i++) {
        auto prover = haar_cheat(r, 2, rng);
        uint64_t x = static_cast<uint64_t>(i % 4);
        auto res = run_protocol(r, r.permutation(), x, prover);
        ASSERT_NEAR(superposed_accept_probability(r, r.permutation(), x, prover), res.accept_prob, kTol);
    }
}

TEST(run_protocol, width_mismatch_and_non_unitary) {
    auto r = build_xor_reduction(2, 0, 0);
    ASSERT_THROW(run_protocol(r, Permutation::identity(3), 0, Prover::honest()), DimensionError);
    ASSERT_THROW(Prover::unitary_cheat(Eigen::MatrixXcd::Ones(16, 16), 0), InvariantError);
}

TEST(run_protocol, seeded_draws_are_deterministic) {
    auto r = add_noise(build_xor_reduction(2, 0b01, 0), 0.25);
    RunOptions opts;
    opts.samples = 2000;
    opts.sample_seed = 77;
    auto a = run_protocol(r, r.permutation(), 0b01, Prover::honest(), opts);
    auto b = run_protocol(r, r.permutation(), 0b01, Prover::honest(), opts);
    ASSERT_EQ(a.draws, b.draws);
    double mean = 0;
    for (int d : a.draws) {
        mean += d;
    }
    mean /= a.draws.size();
    double sigma = std::sqrt(a.accept_prob * (1 - a.accept_prob) / a.draws.size());
    ASSERT_LE(std::abs(mean - a.accept_prob), 4 * sigma);
}

TEST(claim1, query_and_trap_overlaps_match) {
    Rng rng(8);
    auto r = add_noise(build_xor_reduction(2, 0b10, 0), 0.1);
    auto f = r.permutation();
    for (int p : {0, 1, 2}) {
        for (uint64_t x = 0; x < 4; x++) {
            CheatEvaluator eval(r, f, x, p);
            for (int i = 0; i < 5; i++) {
                auto u = haar_unitary(eval.dimension(), rng);
                auto v = eval.evaluate(u);
                ASSERT_NEAR(v.query_overlap, v.p1, kTol);
            }
        }
    }
}

TEST(cheat_evaluator, agrees_with_protocol_run) {
    Rng rng(9);
    auto r = add_noise(build_xor_reduction(2, 0b01, 1), 0.25);
    for (int i = 0; i < 10; i++) {
        uint64_t x = static_cast<uint64_t>(i % 4);
        CheatEvaluator eval(r, r.permutation(), x, 2);
        auto u = haar_unitary(eval.dimension(), rng);
        auto v = eval.evaluate(u);
        auto res = run_protocol(r, r.permutation(), x, Prover::unitary_cheat(u, 2));
        ASSERT_NEAR(v.p0, res.p0, kTol);
        ASSERT_NEAR(v.p1, res.p1, kTol);
    }
}

TEST(run_multiquery_protocol, one_copy_matches_protocol_one) {
    Rng rng(12);
    auto r = add_noise(build_xor_reduction(2, 0b11, 0), 0.1);
    for (uint64_t x = 0; x < 4; x++) {
        auto prover = haar_cheat(r, 1, rng);
        auto a = run_protocol(r, r.permutation(), x, prover);
        auto b = run_multiquery_protocol(r, r.permutation(), x, prover);
        ASSERT_NEAR(a.p0, b.p0, kTol);
        ASSERT_NEAR(a.p1, b.p1, kTol);
    }
}

TEST(run_multiquery_protocol, three_copies_full_simulation) {
    auto r = amplify(add_noise(build_xor_reduction(1, 1, 0), 1.0 / 3.0), 3);
    for (uint64_t x : inputs_with(r, 0)) {
        auto res = run_multiquery_protocol(r, r.permutation(), x, Prover::honest());
        ASSERT_FALSE(res.factorized);
        ASSERT_NEAR(res.accept_prob, 1 - (7.0 / 27.0) / 2, kTol);
    }
}

TEST(run_multiquery_protocol, factorized_route_matches_binomial_tail) {
    for (int t : {3, 5}) {
        auto r = amplify(add_noise(build_xor_reduction(2, 0b10, 1), 1.0 / 3.0), t);
        for (uint64_t x : inputs_with(r, 0)) {
            auto res = run_multiquery_protocol(r, r.permutation(), x, Prover::honest());
            ASSERT_TRUE(res.factorized);
            ASSERT_NEAR(res.accept_prob, 1 - binomial_tail(1.0 / 3.0, t) / 2, kTol);
        }
    }
}

TEST(run_multiquery_protocol, full_and_factorized_agree_for_lying_prover) {
    auto r = amplify(add_noise(build_xor_reduction(1, 0, 0), 0.2), 3);
    auto f = r.permutation();
    auto liar = Prover::corrupted(f, CorruptionSet(1, {1}));
    for (uint64_t x = 0; x < 2; x++) {
        auto full = run_multiquery_protocol(r, f, x, liar);
        ASSERT_FALSE(full.factorized);
        RunOptions opts;
        opts.factorize = true;
        auto fact = run_multiquery_protocol(r, f, x, liar, opts);
        ASSERT_TRUE(fact.factorized);
        ASSERT_NEAR(full.p0, fact.p0, kTol);
        ASSERT_NEAR(full.p1, fact.p1, kTol);
    }
}

TEST(run_multiquery_protocol, rearranged_query_matches_generator) {
    auto r = amplify(add_noise(build_xor_reduction(1, 1, 0), 0.3), 3);
    for (uint64_t x = 0; x < 2; x++) {
        ASSERT_NEAR(std::abs(inner(rearranged_query_state(r, x), generate_query_state(r, x))), 1.0, kTol);
    }
}

TEST(run_multiquery_protocol, cheat_over_cap_is_refused) {
    auto r = amplify(build_xor_reduction(1, 0, 0), 3);
    auto dim = Eigen::Index{1} << 9;
    auto u = Prover::unitary_cheat(Eigen::MatrixXcd::Identity(dim, dim), 3);
    ASSERT_THROW(run_multiquery_protocol(r, r.permutation(), 0, u), ResourceCapError);
}

TEST(run_smooth_protocol, uniform_degenerates_to_protocol_one) {
    auto base = build_smooth_xor_reduction(2, 0b01, 0, DistributionTable::uniform(2));
    auto r = add_noise(base, 0.1);
    Rng rng(5);
    for (uint64_t x = 0; x < 4; x++) {
        auto prover = haar_cheat(r, 1, rng);
        auto a = run_smooth_protocol(r, r.permutation(), x, prover);
        auto b = run_protocol(r, r.permutation(), x, prover);
        ASSERT_NEAR(a.send_success, 1.0, kTol);
        ASSERT_NEAR(a.receive_success, 1.0, kTol);
        ASSERT_NEAR(a.accept_prob, b.accept_prob, kTol);
    }
}

TEST(run_smooth_protocol, skewed_table_completeness) {
    DistributionTable d(2, {0.5, 0.25, 0.125, 0.125});
    auto r = build_smooth_xor_reduction(2, 0b10, 1, d);
    for (uint64_t x : inputs_with(r, 0)) {
        RunOptions opts;
        opts.samples = 10;
        opts.sample_seed = 3;
        auto res = run_smooth_protocol(r, r.permutation(), x, Prover::honest(), 0, 0, opts);
        ASSERT_NEAR(res.accept_prob, 1.0, 1e-6);
        ASSERT_NEAR(res.send_success, 0.5, kTol);
        ASSERT_EQ(res.gamma, 4u);
        ASSERT_EQ(res.gamma_prime, 4u);
        ASSERT_GE(res.send_rounds, 1);
    }
}

TEST(run_smooth_protocol, noisy_completeness) {
    DistributionTable d(3, {0.2, 0.1, 0.1, 0.1, 0.15, 0.1, 0.1, 0.15});
    auto r = add_noise(build_smooth_xor_reduction(3, 0b011, 2, d), 0.25);
    for (uint64_t x : inputs_with(r, 0)) {
        auto res = run_smooth_protocol(r, r.permutation(), x, Prover::honest());
        ASSERT_NEAR(res.accept_prob, 1 - 0.25 / 2, kTol);
    }
}

TEST(run_classical_query_protocol, honest_matches_correctness) {
    for (double eps : {0.0, 0.25}) {
        auto r = add_noise(build_xor_reduction(2, 0b01, 0), eps);
        for (uint64_t x : inputs_with(r, 0)) {
            auto res = run_classical_query_protocol(r, r.permutation(), x, Prover::honest());
            ASSERT_NEAR(res.accept_prob, 1 - eps, kTol);
        }
    }
}

TEST(run_classical_query_protocol, any_lie_is_rejected) {
    auto r = build_xor_reduction(2, 0b01, 0);
    auto f = r.permutation();
    for (uint64_t x : inputs_with(r, 0)) {
        for (uint64_t q = 0; q < 4; q++) {
            for (uint64_t wrong = 0; wrong < 4; wrong++) {
                if (wrong == f.inverse(q)) {
                    continue;
                }
                auto answers = f.inverse_table();
                answers[q] = wrong;
                auto res = run_classical_query_protocol(r, f, x, Prover::classical(answers));
                ASSERT_EQ(res.query_accept[q], 0.0);
                ASSERT_NEAR(res.accept_prob, 0.75, kTol);
            }
        }
    }
}

TEST(cheat_upper_bound, exact_reduction_is_one_half) {
    auto r = build_xor_reduction(2, 0b01, 0);
    for (uint64_t x : inputs_with(r, 1)) {
        auto b = cheat_upper_bound(r, r.permutation(), x);
        ASSERT_NEAR(b.closed_form, 0.5, kTol);
        ASSERT_NEAR(b.eigen_oracle, 0.5, kTol);
    }
}

TEST(cheat_upper_bound, quarter_noise_is_three_quarters) {
    auto r = add_noise(build_xor_reduction(2, 0b01, 0), 0.25);
    for (uint64_t x : inputs_with(r, 1)) {
        auto b = cheat_upper_bound(r, r.permutation(), x);
        ASSERT_NEAR(b.sin2_theta, 0.25, kTol);
        ASSERT_NEAR(b.closed_form, 0.75, kTol);
        ASSERT_NEAR(b.eigen_oracle, 0.75, kTol);
        ASSERT_FALSE(b.used_lanczos);
    }
}

TEST(cheat_upper_bound, lanczos_path_agrees) {
    auto r = add_noise(build_xor_reduction(3, 0b101, 1), 0.1);
    for (uint64_t x : inputs_with(r, 1)) {
        auto b = cheat_upper_bound(r, r.permutation(), x);
        ASSERT_TRUE(b.used_lanczos);
        ASSERT_NEAR(b.eigen_oracle, 0.5 * (1 + std::sqrt(0.1)), kTol);
    }
}

TEST(prover_search, zero_iterations_is_honest) {
    auto r = build_xor_reduction(2, 0b10, 0);
    auto x = inputs_with(r, 1).front();
    auto res = prover_search(r, r.permutation(), x, 2, 0, 1);
    ASSERT_NEAR(res.achieved, 0.5, kTol);
    ASSERT_TRUE(res.trace.empty());
}

TEST(prover_search, stays_under_ceiling_and_is_monotone) {
    for (double eps : {0.0, 0.25}) {
        auto r = add_noise(build_xor_reduction(2, 0b10, 0), eps);
        auto x = inputs_with(r, 1).front();
        auto bound = cheat_upper_bound(r, r.permutation(), x);
        auto res = prover_search(r, r.permutation(), x, 1, 400, 42);
        ASSERT_LE(res.achieved, bound.closed_form + kTol);
        ASSERT_GE(res.achieved, 0.5 - kTol);
        for (size_t i = 1; i < res.trace.size(); i++) {
            ASSERT_GE(res.trace[i], res.trace[i - 1]);
        }
        auto replay = run_protocol(r, r.permutation(), x, res.prover);
        ASSERT_NEAR(replay.accept_prob, res.achieved, kTol);
    }
}
