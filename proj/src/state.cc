#include "trapsim/state.h"

#include <cmath>
#include <set>

#include "trapsim/errors.h"

namespace trapsim {

namespace {

void check_statevector_cap(const RegisterLayout &layout) {
    if (layout.num_qubits() > max_qubits()) {
        throw ResourceCapError("statevector of " + std::to_string(layout.num_qubits()) +
                               " qubits exceeds the cap of " + std::to_string(max_qubits()));
    }
}

void check_density_cap(const RegisterLayout &layout) {
    if (layout.num_qubits() > kMaxDensityQubits) {
        throw ResourceCapError("density operator of " + std::to_string(layout.num_qubits()) +
                               " qubits exceeds the cap of " + std::to_string(kMaxDensityQubits));
    }
}

// Bit patterns of every value of the qubits at `positions`, indexed by value.
std::vector<uint64_t> patterns(int n, const std::vector<int> &positions) {
    std::vector<uint64_t> out(uint64_t{1} << positions.size());
    for (uint64_t v = 0; v < out.size(); v++) {
        out[v] = scatter_bits(v, n, positions);
    }
    return out;
}

std::vector<int> complement_positions(int n, const std::vector<int> &positions) {
    std::set<int> used(positions.begin(), positions.end());
    std::vector<int> out;
    for (int q = 0; q < n; q++) {
        if (!used.count(q)) {
            out.push_back(q);
        }
    }
    return out;
}

}  // namespace

StateVector::StateVector(RegisterLayout layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    check_statevector_cap(layout_);
    if (static_cast<uint64_t>(amps_.size()) != layout_.dimension()) {
        throw DimensionError("amplitude vector length does not match layout dimension");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > kTol) {
        throw InvariantError("statevector is not normalized (|psi|^2 = " + std::to_string(amps_.squaredNorm()) +
                             ")");
    }
}

StateVector StateVector::basis(const RegisterLayout &layout,
                               const std::vector<std::pair<std::string, uint64_t>> &values) {
    check_statevector_cap(layout);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
    v(static_cast<Eigen::Index>(layout.index_of(values))) = 1.0;
    return StateVector(layout, std::move(v));
}

StateVector StateVector::normalized(RegisterLayout layout, Eigen::VectorXcd amplitudes) {
    double n = amplitudes.norm();
    if (n < 1e-300) {
        throw InvariantError("cannot normalize the zero vector");
    }
    amplitudes /= n;
    return StateVector(std::move(layout), std::move(amplitudes));
}

StateVector StateVector::reorder(const std::vector<std::string> &order) const {
    RegisterLayout target = layout_.subset(order);
    if (target.num_qubits() != layout_.num_qubits()) {
        throw LayoutError("reorder must list every register exactly once");
    }
    int n = layout_.num_qubits();
    std::vector<int> src = layout_.qubits_of(order);
    Eigen::VectorXcd out(amps_.size());
    for (uint64_t i = 0; i < layout_.dimension(); i++) {
        out(static_cast<Eigen::Index>(gather_bits(i, n, src))) = amps_(static_cast<Eigen::Index>(i));
    }
    return StateVector(std::move(target), std::move(out));
}

StateVector StateVector::rename(const std::vector<std::pair<std::string, std::string>> &renames) const {
    std::vector<Register> regs = layout_.registers();
    for (const auto &[from, to] : renames) {
        bool found = false;
        for (auto &r : regs) {
            if (r.name == from) {
                r.name = to;
                found = true;
            }
        }
        if (!found) {
            throw LayoutError("unknown register '" + from + "'");
        }
    }
    return StateVector(RegisterLayout(std::move(regs)), amps_);
}

DensityOperator::DensityOperator(RegisterLayout layout, Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), m_(std::move(matrix)) {
    check_density_cap(layout_);
    auto d = static_cast<Eigen::Index>(layout_.dimension());
    if (m_.rows() != d || m_.cols() != d) {
        throw DimensionError("density matrix size does not match layout dimension");
    }
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTol) {
        throw InvariantError("density matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - cplx(1.0)) > kTol) {
        throw InvariantError("density matrix trace differs from 1");
    }
}

DensityOperator DensityOperator::from_pure(const StateVector &psi) {
    const auto &a = psi.amplitudes();
    return DensityOperator(psi.layout(), a * a.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(const RegisterLayout &layout) {
    auto d = static_cast<Eigen::Index>(layout.dimension());
    return DensityOperator(layout, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

bool DensityOperator::is_positive(double tol) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

StateVector tensor_product(const StateVector &a, const StateVector &b) {
    RegisterLayout layout = a.layout().concat(b.layout());
    check_statevector_cap(layout);
    const auto &x = a.amplitudes();
    const auto &y = b.amplitudes();
    Eigen::VectorXcd out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); i++) {
        out.segment(i * y.size(), y.size()) = x(i) * y;
    }
    return StateVector(std::move(layout), std::move(out));
}

DensityOperator tensor_product(const DensityOperator &a, const DensityOperator &b) {
    RegisterLayout layout = a.layout().concat(b.layout());
    check_density_cap(layout);
    const auto &x = a.matrix();
    const auto &y = b.matrix();
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        for (Eigen::Index j = 0; j < x.cols(); j++) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return DensityOperator(std::move(layout), std::move(out));
}

cplx inner(const StateVector &a, const StateVector &b) {
    if (!(a.layout() == b.layout())) {
        throw DimensionError("inner product of states with different layouts");
    }
    return a.amplitudes().dot(b.amplitudes());
}

DensityOperator partial_trace(const StateVector &psi, const std::vector<std::string> &keep) {
    const auto &layout = psi.layout();
    int n = layout.num_qubits();
    std::vector<int> kept = layout.qubits_of(keep);
    std::vector<int> traced = complement_positions(n, kept);
    auto kp = patterns(n, kept);
    auto tp = patterns(n, traced);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(kp.size()), static_cast<Eigen::Index>(tp.size()));
    for (size_t r = 0; r < kp.size(); r++) {
        for (size_t c = 0; c < tp.size(); c++) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi.amplitude(kp[r] | tp[c]);
        }
    }
    Eigen::MatrixXcd rho = m * m.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityOperator(layout.subset(keep), std::move(rho));
}

DensityOperator partial_trace(const DensityOperator &rho, const std::vector<std::string> &keep) {
    const auto &layout = rho.layout();
    int n = layout.num_qubits();
    std::vector<int> kept = layout.qubits_of(keep);
    std::vector<int> traced = complement_positions(n, kept);
    auto kp = patterns(n, kept);
    auto tp = patterns(n, traced);
    const auto &m = rho.matrix();
    auto dk = static_cast<Eigen::Index>(kp.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; r++) {
        for (Eigen::Index c = 0; c < dk; c++) {
            cplx acc = 0;
            for (uint64_t t : tp) {
                acc += m(static_cast<Eigen::Index>(kp[r] | t), static_cast<Eigen::Index>(kp[c] | t));
            }
            out(r, c) = acc;
        }
    }
    return DensityOperator(layout.subset(keep), std::move(out));
}

std::vector<double> marginal(const StateVector &psi, const std::string &reg) {
    const auto &layout = psi.layout();
    std::vector<double> p(uint64_t{1} << layout.at(reg).qubits, 0.0);
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        p[layout.value_of(i, reg)] += std::norm(psi.amplitude(i));
    }
    return p;
}

double probability(const StateVector &psi, const std::string &reg, uint64_t value) {
    const auto &layout = psi.layout();
    double p = 0;
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        if (layout.value_of(i, reg) == value) {
            p += std::norm(psi.amplitude(i));
        }
    }
    return p;
}

double probability_all_zero(const StateVector &psi, const std::vector<std::string> &regs) {
    const auto &layout = psi.layout();
    uint64_t mask = 0;
    for (auto q : layout.qubits_of(regs)) {
        mask |= uint64_t{1} << (layout.num_qubits() - 1 - q);
    }
    double p = 0;
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        if ((i & mask) == 0) {
            p += std::norm(psi.amplitude(i));
        }
    }
    return p;
}

Postselection postselect(const StateVector &psi, const std::string &reg, uint64_t value) {
    const auto &layout = psi.layout();
    RegisterLayout rest = layout.without({reg});
    int n = layout.num_qubits();
    std::vector<int> rest_q = layout.qubits_of(rest.names());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rest.dimension()));
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        if (layout.value_of(i, reg) == value) {
            out(static_cast<Eigen::Index>(gather_bits(i, n, rest_q))) = psi.amplitude(i);
        }
    }
    double p = out.squaredNorm();
    if (p < 1e-24) {
        return {p, std::nullopt};
    }
    out /= std::sqrt(p);
    return {p, StateVector(std::move(rest), std::move(out))};
}

}  // namespace trapsim
