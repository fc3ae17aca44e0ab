#include "trapsim/rejection_sampling.h"

#include <cmath>

#include "trapsim/errors.h"
#include "trapsim/random.h"

namespace trapsim {

namespace {

const char *kFlag = "qrs_flag";

Eigen::MatrixXcd rotation_matrix(const QrsPlan &plan) {
    uint64_t n = plan.source.size();
    auto dim = static_cast<Eigen::Index>(2 * n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (uint64_t q = 0; q < n; q++) {
        auto i = static_cast<Eigen::Index>(2 * q);
        double d = plan.source[q];
        if (d == 0.0) {
            m(i, i) = 1.0;
            m(i + 1, i + 1) = 1.0;
            continue;
        }
        double a = std::min(plan.alpha[q], d);
        double keep = std::sqrt((d - a) / d);
        double move = std::sqrt(a / d);
        m(i, i) = keep;
        m(i, i + 1) = -move;
        m(i + 1, i) = move;
        m(i + 1, i + 1) = keep;
    }
    return m;
}

}  // namespace

int QrsPlan::round_budget() const {
    double b = beta();
    return static_cast<int>(std::ceil(4.0 * b * b - 1e-9));
}

QrsPlan make_qrs_plan(const DistributionTable &source, const DistributionTable &target) {
    if (source.width() != target.width()) {
        throw DimensionError("resampling between distributions of different widths");
    }
    double inv_beta = INFINITY;
    for (uint64_t q = 0; q < source.size(); q++) {
        if (target[q] > 0) {
            if (source[q] == 0) {
                throw InvariantError("target has mass where the source has none (beta is infinite)");
            }
            inv_beta = std::min(inv_beta, source[q] / target[q]);
        }
    }
    std::vector<double> alpha(source.size());
    for (uint64_t q = 0; q < source.size(); q++) {
        alpha[q] = target[q] * inv_beta;
    }
    return QrsPlan{source, target, inv_beta, std::move(alpha)};
}

uint64_t qrs_gamma(const DistributionTable &d) {
    double v = std::ceil(1.0 / (static_cast<double>(d.size()) * d.d_min()) - 1e-9);
    return static_cast<uint64_t>(v * v);
}

uint64_t qrs_gamma_prime(const DistributionTable &d) {
    double v = std::ceil(static_cast<double>(d.size()) * d.d_max() - 1e-9);
    return static_cast<uint64_t>(v * v);
}

UnitaryOperator qrs_rotation(const QrsPlan &plan) {
    RegisterLayout layout({{"index", plan.width()}, {"flag", 1}});
    return UnitaryOperator(std::move(layout), rotation_matrix(plan));
}

Circuit qrs_gate(const QrsPlan &plan, const std::string &index, const std::string &flag) {
    Circuit c;
    c.dense({index, flag}, rotation_matrix(plan));
    return c;
}

QrsRound qrs_round(const StateVector &state, const QrsPlan &plan, const std::string &index) {
    if (state.layout().at(index).qubits != plan.width()) {
        throw DimensionError("index register width differs from the plan");
    }
    auto dist = marginal(state, index);
    for (uint64_t q = 0; q < dist.size(); q++) {
        if (std::abs(dist[q] - plan.source[q]) > kTol) {
            throw InvariantError("input state does not carry the source distribution on '" + index + "'");
        }
    }
    StateVector with_flag = tensor_product(state, StateVector::basis(RegisterLayout::single(kFlag, 1)));
    StateVector rotated = qrs_gate(plan, index, kFlag).apply(with_flag);
    Postselection ps = postselect(rotated, kFlag, 1);
    return {ps.probability, std::move(ps.state)};
}

QrsRun qrs_run(const std::function<StateVector()> &prepare, const QrsPlan &plan, const std::string &index,
               int max_rounds, uint64_t seed) {
    if (max_rounds < 1) {
        throw InvariantError("round budget must be at least 1");
    }
    Rng rng(seed);
    for (int round = 1; round <= max_rounds; round++) {
        QrsRound r = qrs_round(prepare(), plan, index);
        if (r.state && uniform_unit(rng) < r.success_probability) {
            return {std::move(r.state), round};
        }
    }
    return {std::nullopt, max_rounds};
}

}  // namespace trapsim
