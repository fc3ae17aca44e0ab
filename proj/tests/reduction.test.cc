#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "trapsim/distribution.h"
#include "trapsim/errors.h"
#include "trapsim/oracle.h"
#include "trapsim/random.h"
#include "trapsim/reduction.h"
#include "trapsim/state.h"

using namespace trapsim;

namespace {

// Majority error by enumerating all 2^t error patterns.
double enumerated_majority_error(double eps, int t) {
    double total = 0;
    for (uint64_t pattern = 0; pattern < (uint64_t{1} << t); pattern++) {
        int wrong = __builtin_popcountll(pattern);
        if (2 * wrong > t) {
            total += std::pow(eps, wrong) * std::pow(1 - eps, t - wrong);
        }
    }
    return total;
}

// Probability that the decision register reads `value` after G, honest answers and R.
double decision_probability(const Reduction &r, uint64_t x, int value) {
    StateVector s = honest_answer_state(r, x, r.permutation());
    // Undo the bookkeeping copy so R sees exactly G's layout.
    Circuit uncopy;
    for (int i = 0; i < r.copies(); i++) {
        auto regs = CopyRegisters::of(i);
        uncopy.xor_into(regs.q, regs.c, r.m());
    }
    s = r.decider().apply(uncopy.apply(s));
    return probability(s, r.output_register(), static_cast<uint64_t>(value));
}

}  // namespace

TEST(build_xor_reduction, hand_expanded_instance) {
    auto r = build_xor_reduction(2, 0b01, 0);
    ASSERT_EQ(r.language(0b11), 1);
    ASSERT_NEAR(decision_probability(r, 0b11, 1), 1.0, kTol);
}

TEST(build_xor_reduction, decides_language_exactly) {
    for (int m = 1; m <= 3; m++) {
        for (uint64_t s = 0; s < (uint64_t{1} << m); s++) {
            for (int bit = 0; bit < m; bit++) {
                auto r = build_xor_reduction(m, s, bit);
                for (uint64_t x = 0; x < (uint64_t{1} << m); x++) {
                    ASSERT_EQ(r.language(x), bit_at(x ^ s, m, bit));
                    ASSERT_NEAR(decision_probability(r, x, r.language(x)), 1.0, kTol);
                }
            }
        }
    }
}

TEST(build_xor_reduction, identity_permutation_reads_input_bit) {
    auto r = build_xor_reduction(3, 0, 1);
    for (uint64_t x = 0; x < 8; x++) {
        ASSERT_EQ(r.language(x), bit_at(x, 3, 1));
    }
}

TEST(build_xor_reduction, bad_bit_index) {
    ASSERT_THROW(build_xor_reduction(2, 0, 2), InvariantError);
}

TEST(build_xor_reduction, query_marginal_uniform_and_input_independent) {
    auto r = build_xor_reduction(3, 0b110, 2);
    for (uint64_t x = 0; x < 8; x++) {
        auto dist = marginal(r.generator(x).apply(StateVector::basis(r.layout())), "q0");
        for (double p : dist) {
            ASSERT_NEAR(p, 1.0 / 8.0, kTol);
        }
    }
}

TEST(build_xor_reduction, decider_is_unitary) {
    auto r = add_noise(build_xor_reduction(2, 1, 1), 0.2);
    Eigen::MatrixXcd u = r.decider_unitary().matrix();
    ASSERT_NEAR((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm(), 0.0, kTol);
}

TEST(build_smooth_xor_reduction, uniform_matches_plain) {
    auto a = build_xor_reduction(2, 0b10, 0);
    auto b = build_smooth_xor_reduction(2, 0b10, 0, DistributionTable::uniform(2));
    for (uint64_t x = 0; x < 4; x++) {
        auto sa = generate_query_state(a, x);
        auto sb = generate_query_state(b, x);
        ASSERT_NEAR(std::abs(inner(sa, sb)), 1.0, kTol);
    }
}

TEST(build_smooth_xor_reduction, marginal_equals_table) {
    DistributionTable d(2, {0.5, 0.25, 0.125, 0.125});
    auto r = build_smooth_xor_reduction(2, 0b01, 1, d);
    for (uint64_t x = 0; x < 4; x++) {
        auto dist = marginal(r.generator(x).apply(StateVector::basis(r.layout())), "q0");
        for (uint64_t q = 0; q < 4; q++) {
            ASSERT_NEAR(dist[q], d[q], kTol);
        }
        ASSERT_NEAR(decision_probability(r, x, r.language(x)), 1.0, kTol);
    }
}

TEST(build_smooth_xor_reduction, rejects_non_smooth) {
    DistributionTable d(2, {1.0, 0.0, 0.0, 0.0});
    ASSERT_THROW(build_smooth_xor_reduction(2, 0, 0, d), InvariantError);
}

TEST(add_noise, zero_is_unchanged) {
    auto r = build_xor_reduction(2, 0b01, 0);
    auto n = add_noise(r, 0);
    ASSERT_NEAR((n.decider_unitary().matrix() - r.decider_unitary().matrix()).norm(), 0.0, kTol);
}

TEST(add_noise, correct_probability_is_one_minus_eps) {
    for (double eps : {0.1, 0.25, 1.0 / 3.0, 0.49}) {
        auto r = add_noise(build_xor_reduction(2, 0b01, 1), eps);
        for (uint64_t x = 0; x < 4; x++) {
            ASSERT_NEAR(decision_probability(r, x, r.language(x)), 1.0 - eps, kTol);
            ASSERT_NEAR(decision_error(r, x, r.permutation()), eps, kTol);
        }
    }
}

TEST(add_noise, range_checked) {
    auto r = build_xor_reduction(2, 0, 0);
    ASSERT_THROW(add_noise(r, 0.5), InvariantError);
    ASSERT_THROW(add_noise(r, -0.1), InvariantError);
}

TEST(amplify, seven_over_twenty_seven) {
    ASSERT_NEAR(binomial_tail(1.0 / 3.0, 3), 7.0 / 27.0, 1e-15);
    auto r = amplify(add_noise(build_xor_reduction(1, 1, 0), 1.0 / 3.0), 3);
    ASSERT_EQ(r.k(), 3);
    for (uint64_t x = 0; x < 2; x++) {
        ASSERT_NEAR(decision_error_full(r, x, r.permutation()), 7.0 / 27.0, kTol);
        ASSERT_NEAR(decision_error(r, x, r.permutation()), 7.0 / 27.0, kTol);
    }
}

TEST(amplify, binomial_tail_matches_enumeration) {
    for (int t : {1, 3, 5, 7, 9, 11}) {
        for (double eps : {0.0, 0.05, 0.2, 1.0 / 3.0, 0.45}) {
            ASSERT_NEAR(binomial_tail(eps, t), enumerated_majority_error(eps, t), 1e-14);
        }
    }
}

TEST(amplify, simulated_error_matches_formula) {
    for (int t : {3, 5, 7}) {
        auto r = amplify(add_noise(build_xor_reduction(2, 0b10, 0), 1.0 / 3.0), t);
        ASSERT_NEAR(r.epsilon(), binomial_tail(1.0 / 3.0, t), 1e-15);
        for (uint64_t x = 0; x < 4; x++) {
            ASSERT_NEAR(decision_error(r, x, r.permutation()), enumerated_majority_error(1.0 / 3.0, t), kTol);
        }
    }
}

TEST(amplify, zero_error_stays_zero) {
    auto r = amplify(build_xor_reduction(1, 0, 0), 5);
    ASSERT_NEAR(decision_error(r, 1, r.permutation()), 0.0, kTol);
}

TEST(amplify, decreasing_tail_reaches_one_percent) {
    double prev = 1;
    int first = 0;
    for (int t = 1; t <= 51; t += 2) {
        double e = binomial_tail(1.0 / 3.0, t);
        ASSERT_LT(e, prev);
        if (!first && e <= 0.01) {
            first = t;
        }
        prev = e;
    }
    ASSERT_NEAR(binomial_tail(1.0 / 3.0, 25), 0.041513678407789696, 1e-12);
    ASSERT_EQ(first, 47);
}

TEST(amplify, rejects_even_and_nested) {
    auto r = build_xor_reduction(1, 0, 0);
    ASSERT_THROW(amplify(r, 2), InvariantError);
    ASSERT_THROW(amplify(amplify(r, 3), 3), InvariantError);
}

TEST(generate_query_state, zero_input_mirrors_query) {
    auto r = build_xor_reduction(2, 0b11, 0);
    auto s = generate_query_state(r, 0);
    const auto &layout = s.layout();
    for (uint64_t q = 0; q < 4; q++) {
        uint64_t idx = layout.index_of({{"q0", q}, {"w0", q}, {"c0", q}});
        ASSERT_NEAR(s.amplitude(idx).real(), 0.5, kTol);
    }
}

TEST(generate_query_state, message_marginal_is_mixed_query_and_clean_answer) {
    auto r = build_xor_reduction(2, 0b01, 1);
    for (uint64_t x = 0; x < 4; x++) {
        auto s = generate_query_state(r, x);
        ASSERT_NEAR(s.norm_squared(), 1.0, kTol);
        auto rho = partial_trace(s, {"q0", "a0"});
        Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(16, 16);
        for (Eigen::Index q = 0; q < 4; q++) {
            expect(q * 4, q * 4) = 0.25;
        }
        ASSERT_NEAR((rho.matrix() - expect).norm(), 0.0, kTol);
    }
}

TEST(honest_answer_state, identity_answers_equal_query) {
    auto r = build_xor_reduction(2, 0, 0);
    auto s = honest_answer_state(r, 0b10, Permutation::identity(2));
    for (uint64_t i = 0; i < s.dimension(); i++) {
        if (std::abs(s.amplitude(i)) > kTol) {
            ASSERT_EQ(s.layout().value_of(i, "q0"), s.layout().value_of(i, "a0"));
        }
    }
}

TEST(honest_answer_state, width_mismatch) {
    auto r = build_xor_reduction(2, 0, 0);
    ASSERT_THROW(honest_answer_state(r, 0, Permutation::identity(3)), DimensionError);
}

TEST(rearrange, round_trip) {
    auto r = amplify(build_xor_reduction(1, 1, 0), 3);
    RegisterLayout cm = r.layout().subset(copy_major_order(1, 3));
    Rng rng(1);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cm.dimension()));
    for (Eigen::Index i = 0; i < v.size(); i++) {
        v(i) = cplx(uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5);
    }
    auto s = StateVector::normalized(cm, v);
    auto back = unrearrange(rearrange(s, 3), 3);
    ASSERT_EQ(back.layout(), s.layout());
    ASSERT_NEAR((back.amplitudes() - s.amplitudes()).norm(), 0.0, kTol);
    ASSERT_EQ(rearrange(s, 3).layout(), r.layout());
}

TEST(rearrange, message_registers_lead) {
    auto names = mv_layout(2, 2).names();
    ASSERT_EQ(names, (std::vector<std::string>{"q0", "a0", "q1", "a1", "w0", "c0", "out0", "w1", "c1", "out1", "maj"}));
}

TEST(state_preparation, first_column_is_target) {
    Eigen::VectorXd t(4);
    t << std::sqrt(0.5), std::sqrt(0.25), std::sqrt(0.125), std::sqrt(0.125);
    auto u = state_preparation(t);
    ASSERT_NEAR((u.col(0).real() - t).norm(), 0.0, kTol);
    ASSERT_NEAR((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).norm(), 0.0, kTol);
}

TEST(distribution_table, smoothness_and_validation) {
    DistributionTable d(2, {0.5, 0.25, 0.125, 0.125}, 2.0);
    ASSERT_TRUE(d.is_smooth());
    ASSERT_FALSE(DistributionTable(2, {0.7, 0.1, 0.1, 0.1}, 2.0).is_smooth());
    ASSERT_THROW(DistributionTable(2, {0.5, 0.5, 0.5, -0.5}), InvariantError);
    ASSERT_THROW(DistributionTable(2, {0.5, 0.25, 0.125, 0.126}), InvariantError);
    ASSERT_TRUE(DistributionTable::uniform(3).is_uniform());
}

TEST(distribution_table, text_round_trip) {
    std::stringstream ss("# comment\n00 0.5\n01 0.25\n\n10 0.125\n11 0.125\n");
    auto d = read_distribution(ss);
    ASSERT_EQ(d.width(), 2);
    ASSERT_DOUBLE_EQ(d[1], 0.25);
    std::stringstream out;
    write_distribution(out, d);
    auto e = read_distribution(out);
    ASSERT_EQ(e.probabilities(), d.probabilities());
}
