#include "trapsim/analysis.h"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "trapsim/circuit.h"
#include "trapsim/errors.h"
#include "trapsim/linalg.h"
#include "trapsim/measures.h"
#include "trapsim/random.h"

namespace trapsim {

LemmaReport LemmaReport::make(std::string lemma, std::string inputs, double left, double right, double tolerance,
                              Relation relation) {
    bool pass = relation == Relation::Equal ? std::abs(left - right) <= tolerance : left <= right + tolerance;
    return {std::move(lemma), std::move(inputs), left, right, tolerance, relation, pass};
}

std::string LemmaReport::to_json() const {
    nlohmann::ordered_json j;
    j["lemma"] = lemma;
    j["inputs"] = inputs;
    j["left"] = left;
    j["right"] = right;
    j["relation"] = relation == Relation::Equal ? "equal" : "at_most";
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j.dump();
}

double channel_self_overlap(const KrausChannel &channel, const StateVector &phi,
                            const std::vector<std::string> &system) {
    const auto &layout = phi.layout();
    std::vector<int> targets = layout.qubits_of(system);
    if (channel.dimension() != (Eigen::Index{1} << targets.size())) {
        throw DimensionError("channel dimension does not match the system registers");
    }
    double total = 0;
    for (const auto &e : channel.operators()) {
        Eigen::VectorXcd v = phi.amplitudes();
        kernel::apply_matrix(v, layout.num_qubits(), targets, e);
        total += std::norm(phi.amplitudes().dot(v));
    }
    return total;
}

LemmaReport purification_invariance(const KrausChannel &channel, const StateVector &phi, const StateVector &psi,
                                    std::vector<std::string> system) {
    if (!(phi.layout() == psi.layout())) {
        throw LayoutError("purifications must share a layout");
    }
    if (system.empty()) {
        system = {phi.layout().registers().front().name};
    }
    DensityOperator rho_a = partial_trace(phi, system);
    DensityOperator sigma_a = partial_trace(psi, system);
    if ((rho_a.matrix() - sigma_a.matrix()).cwiseAbs().maxCoeff() > kTol) {
        throw InvariantError("states are not purifications of the same reduced state");
    }
    double left = channel_self_overlap(channel, phi, system);
    double right = channel_self_overlap(channel, psi, system);
    std::string inputs = "dim_system=" + std::to_string(rho_a.layout().dimension()) +
                         ",dim_total=" + std::to_string(phi.dimension()) +
                         ",kraus=" + std::to_string(channel.operators().size());
    return LemmaReport::make("purification_invariance", inputs, left, right, kTol);
}

void check_projector(const Eigen::MatrixXcd &projector) {
    if (projector.rows() != projector.cols()) {
        throw DimensionError("projector must be square");
    }
    if ((projector - projector.adjoint()).cwiseAbs().maxCoeff() > kTol ||
        (projector * projector - projector).cwiseAbs().maxCoeff() > kTol) {
        throw InvariantError("matrix is not an orthogonal projector");
    }
}

namespace {

double projected_mass(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi) {
    check_projector(projector);
    if (phi.size() != projector.rows()) {
        throw DimensionError("state dimension differs from projector dimension");
    }
    if (std::abs(phi.squaredNorm() - 1.0) > kTol) {
        throw InvariantError("state is not normalized");
    }
    return std::clamp(phi.dot(projector * phi).real(), 0.0, 1.0);
}

}  // namespace

double maxproj_closed_form(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi) {
    return 1.0 + std::sqrt(projected_mass(projector, phi));
}

double maxproj_eigen_oracle(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi) {
    if (phi.size() != projector.rows()) {
        throw DimensionError("state dimension differs from projector dimension");
    }
    return largest_eigenvalue(projector + phi * phi.adjoint());
}

double maxproj_objective(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi,
                         const Eigen::VectorXcd &psi) {
    return psi.dot(projector * psi).real() + std::norm(phi.dot(psi));
}

Eigen::VectorXcd maxproj_optimizer_state(const Eigen::MatrixXcd &projector, const Eigen::VectorXcd &phi) {
    double s2 = projected_mass(projector, phi);
    Eigen::VectorXcd inside = projector * phi;
    Eigen::VectorXcd outside = phi - inside;
    if (inside.norm() < 1e-12 || outside.norm() < 1e-12) {
        throw InvariantError("optimizer state undefined: phi lies inside or orthogonal to the subspace");
    }
    Eigen::VectorXcd v0 = inside / inside.norm();
    Eigen::VectorXcd vk = outside / outside.norm();
    double theta = std::asin(std::sqrt(s2));
    double theta0 = 0.5 * (M_PI / 2 - theta);
    return std::cos(theta0) * v0 + std::sin(theta0) * vk;
}

StateVector epr_with_oracle(const Permutation &f) {
    int m = f.width();
    RegisterLayout layout({{"r1", m}, {"r2", m}, {"r3", m}});
    Circuit c;
    c.hadamard("r1", m);
    c.xor_into("r1", "r2", m);
    c.append(inversion_gate(f, "r2", "r3"));
    return c.apply(StateVector::basis(layout));
}

StateVector epr_without_oracle(const Permutation &f) {
    int m = f.width();
    RegisterLayout layout({{"r1", m}, {"r2", m}, {"r3", m}});
    uint64_t mask = (uint64_t{1} << m) - 1;
    Circuit c;
    c.hadamard("r1", m);
    c.append(forward_gate(f, "r1", "r2"));
    c.xor_into("r2", "r3", m);
    c.classical({"r1", "r3"}, 2 * m, [m, mask](uint64_t v) { return ((v & mask) << m) | (v >> m); });
    return c.apply(StateVector::basis(layout));
}

LemmaReport epr_trivialization(const Permutation &f) {
    double fid = fidelity(epr_with_oracle(f), epr_without_oracle(f));
    std::string inputs = "m=" + std::to_string(f.width());
    return LemmaReport::make("epr_trivialization", inputs, fid, 1.0, kTol);
}

std::vector<LemmaReport> purification_suite(int instances, uint64_t seed) {
    Rng rng(seed);
    std::vector<LemmaReport> out;
    for (int i = 0; i < instances; i++) {
        int a = 1 + static_cast<int>(uniform_below(rng, 2));
        auto dim = Eigen::Index{1} << a;
        auto rank = 1 + static_cast<Eigen::Index>(uniform_below(rng, static_cast<uint64_t>(dim)));
        Eigen::MatrixXcd rho = random_density(dim, rank, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        // phi = sum_i sqrt(lambda_i)|e_i>|i>, psi = (I (x) U_B) phi.
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(dim * dim);
        for (Eigen::Index k = 0; k < dim; k++) {
            double lam = std::max(es.eigenvalues()(k), 0.0);
            for (Eigen::Index j = 0; j < dim; j++) {
                phi(j * dim + k) += std::sqrt(lam) * es.eigenvectors()(j, k);
            }
        }
        RegisterLayout layout({{"A", a}, {"B", a}});
        StateVector phi_s = StateVector::normalized(layout, phi);
        UnitaryOperator ub(RegisterLayout::single("B", a), haar_unitary(dim, rng));
        StateVector psi_s = apply_on_registers(phi_s, ub, {"B"});
        KrausChannel channel = random_channel(dim, 2, rng);
        LemmaReport r = purification_invariance(channel, phi_s, psi_s, {"A"});
        r.inputs = "seed=" + std::to_string(seed) + ",instance=" + std::to_string(i) + "," + r.inputs;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<LemmaReport> maxproj_suite(int instances, uint64_t seed) {
    Rng rng(seed);
    std::vector<LemmaReport> out;
    for (int i = 0; i < instances; i++) {
        auto dim = 2 + static_cast<Eigen::Index>(uniform_below(rng, 15));
        auto rank = 1 + static_cast<Eigen::Index>(uniform_below(rng, static_cast<uint64_t>(dim - 1)));
        Eigen::MatrixXcd p = random_projector(dim, rank, rng);
        Eigen::VectorXcd phi = haar_state(dim, rng);
        std::string inputs = "seed=" + std::to_string(seed) + ",instance=" + std::to_string(i) +
                             ",dim=" + std::to_string(dim) + ",rank=" + std::to_string(rank);
        double closed = maxproj_closed_form(p, phi);
        out.push_back(LemmaReport::make("maxproj_eigen_oracle", inputs, maxproj_eigen_oracle(p, phi), closed, kTol));
        Eigen::VectorXcd best = maxproj_optimizer_state(p, phi);
        out.push_back(LemmaReport::make("maxproj_optimizer", inputs, maxproj_objective(p, phi, best), closed, kTol));
    }
    return out;
}

std::vector<LemmaReport> epr_suite(int instances, uint64_t seed) {
    std::vector<LemmaReport> out;
    for (int i = 0; i < instances; i++) {
        LemmaReport r = epr_trivialization(random_permutation(3, seed + static_cast<uint64_t>(i)));
        r.inputs = "seed=" + std::to_string(seed + static_cast<uint64_t>(i)) + "," + r.inputs;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace trapsim
