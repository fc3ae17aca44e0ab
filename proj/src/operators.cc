#include "trapsim/operators.h"

#include <cmath>

#include "trapsim/errors.h"

namespace trapsim {

namespace kernel {

namespace {

std::vector<uint64_t> offsets_for(int n, const std::vector<int> &targets) {
    std::vector<uint64_t> off(uint64_t{1} << targets.size());
    for (uint64_t j = 0; j < off.size(); j++) {
        off[j] = scatter_bits(j, n, targets);
    }
    return off;
}

uint64_t mask_for(int n, const std::vector<int> &targets) {
    uint64_t mask = 0;
    for (int t : targets) {
        mask |= uint64_t{1} << (n - 1 - t);
    }
    return mask;
}

}  // namespace

void apply_matrix(Eigen::VectorXcd &vec, int num_qubits, const std::vector<int> &targets,
                  const Eigen::MatrixXcd &m, uint64_t control_mask, uint64_t control_value) {
    auto off = offsets_for(num_qubits, targets);
    auto k = static_cast<Eigen::Index>(off.size());
    if (m.rows() != k || m.cols() != k) {
        throw DimensionError("matrix size does not match the number of target qubits");
    }
    uint64_t tmask = mask_for(num_qubits, targets);
    if (tmask & control_mask) {
        throw LayoutError("control and target qubits overlap");
    }
    uint64_t dim = uint64_t{1} << num_qubits;
    Eigen::VectorXcd in(k), out(k);
    for (uint64_t base = 0; base < dim; base++) {
        if ((base & tmask) != 0 || (base & control_mask) != control_value) {
            continue;
        }
        for (Eigen::Index j = 0; j < k; j++) {
            in(j) = vec(static_cast<Eigen::Index>(base | off[static_cast<size_t>(j)]));
        }
        out.noalias() = m * in;
        for (Eigen::Index j = 0; j < k; j++) {
            vec(static_cast<Eigen::Index>(base | off[static_cast<size_t>(j)])) = out(j);
        }
    }
}

void apply_table(Eigen::VectorXcd &vec, int num_qubits, const std::vector<int> &targets,
                 const std::vector<uint64_t> &table, uint64_t control_mask, uint64_t control_value) {
    auto off = offsets_for(num_qubits, targets);
    if (table.size() != off.size()) {
        throw DimensionError("permutation table size does not match the number of target qubits");
    }
    uint64_t tmask = mask_for(num_qubits, targets);
    if (tmask & control_mask) {
        throw LayoutError("control and target qubits overlap");
    }
    uint64_t dim = uint64_t{1} << num_qubits;
    std::vector<cplx> in(off.size());
    for (uint64_t base = 0; base < dim; base++) {
        if ((base & tmask) != 0 || (base & control_mask) != control_value) {
            continue;
        }
        for (size_t j = 0; j < off.size(); j++) {
            in[j] = vec(static_cast<Eigen::Index>(base | off[j]));
        }
        for (size_t j = 0; j < off.size(); j++) {
            vec(static_cast<Eigen::Index>(base | off[table[j]])) = in[j];
        }
    }
}

void apply_matrix_left(Eigen::MatrixXcd &rho, int num_qubits, const std::vector<int> &targets,
                       const Eigen::MatrixXcd &m) {
    for (Eigen::Index c = 0; c < rho.cols(); c++) {
        Eigen::VectorXcd col = rho.col(c);
        apply_matrix(col, num_qubits, targets, m);
        rho.col(c) = col;
    }
}

}  // namespace kernel

UnitaryOperator::UnitaryOperator(RegisterLayout layout, Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), m_(std::move(matrix)) {
    auto d = static_cast<Eigen::Index>(layout_.dimension());
    if (m_.rows() != d || m_.cols() != d) {
        throw DimensionError("unitary matrix size does not match layout dimension");
    }
    Eigen::MatrixXcd g = m_.adjoint() * m_;
    g -= Eigen::MatrixXcd::Identity(d, d);
    if (g.cwiseAbs().maxCoeff() > kTol) {
        throw InvariantError("operator is not unitary within tolerance");
    }
}

UnitaryOperator UnitaryOperator::identity(const RegisterLayout &layout) {
    auto d = static_cast<Eigen::Index>(layout.dimension());
    return UnitaryOperator(layout, Eigen::MatrixXcd::Identity(d, d));
}

UnitaryOperator UnitaryOperator::adjoint() const {
    return UnitaryOperator(layout_, m_.adjoint());
}

UnitaryOperator UnitaryOperator::compose(const UnitaryOperator &other) const {
    if (other.m_.rows() != m_.rows()) {
        throw DimensionError("cannot compose unitaries of different dimension");
    }
    return UnitaryOperator(layout_, m_ * other.m_);
}

bool UnitaryOperator::is_permutation_matrix() const {
    for (Eigen::Index c = 0; c < m_.cols(); c++) {
        int ones = 0;
        for (Eigen::Index r = 0; r < m_.rows(); r++) {
            cplx v = m_(r, c);
            if (v == cplx(1.0)) {
                ones++;
            } else if (v != cplx(0.0)) {
                return false;
            }
        }
        if (ones != 1) {
            return false;
        }
    }
    // Columns each carry one 1 and the matrix is unitary, so rows do too.
    return true;
}

KrausChannel::KrausChannel(std::vector<Eigen::MatrixXcd> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) {
        throw InvariantError("a channel needs at least one operation element");
    }
    auto d = ops_.front().rows();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &e : ops_) {
        if (e.rows() != d || e.cols() != d) {
            throw DimensionError("Kraus operators must share one square dimension");
        }
        sum += e.adjoint() * e;
    }
    if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > kTol) {
        throw InvariantError("Kraus operators are not trace preserving");
    }
}

KrausChannel KrausChannel::identity(uint64_t dim) {
    auto d = static_cast<Eigen::Index>(dim);
    return KrausChannel({Eigen::MatrixXcd::Identity(d, d)});
}

KrausChannel KrausChannel::unitary(const Eigen::MatrixXcd &u) {
    return KrausChannel({u});
}

namespace {

std::vector<int> bind_targets(const RegisterLayout &layout, const std::vector<std::string> &targets, int expected) {
    std::vector<int> q = layout.qubits_of(targets);
    if (static_cast<int>(q.size()) != expected) {
        throw DimensionError("operator acts on " + std::to_string(expected) + " qubits but targets span " +
                             std::to_string(q.size()));
    }
    return q;
}

int qubits_for_dim(Eigen::Index d) {
    int k = 0;
    while ((Eigen::Index{1} << k) < d) {
        k++;
    }
    if ((Eigen::Index{1} << k) != d) {
        throw DimensionError("operator dimension is not a power of two");
    }
    return k;
}

}  // namespace

StateVector apply_on_registers(const StateVector &s, const UnitaryOperator &u,
                               const std::vector<std::string> &targets) {
    auto q = bind_targets(s.layout(), targets, u.num_qubits());
    Eigen::VectorXcd v = s.amplitudes();
    kernel::apply_matrix(v, s.layout().num_qubits(), q, u.matrix());
    return StateVector(s.layout(), std::move(v));
}

DensityOperator apply_on_registers(const DensityOperator &rho, const UnitaryOperator &u,
                                   const std::vector<std::string> &targets) {
    return apply_channel(rho, KrausChannel::unitary(u.matrix()), targets);
}

DensityOperator apply_channel(const DensityOperator &rho, const KrausChannel &channel,
                              const std::vector<std::string> &targets) {
    int n = rho.layout().num_qubits();
    auto q = bind_targets(rho.layout(), targets, qubits_for_dim(channel.dimension()));
    const auto &m = rho.matrix();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    for (const auto &e : channel.operators()) {
        // E rho E^dag = (E (E rho)^dag)^dag
        Eigen::MatrixXcd t = m;
        kernel::apply_matrix_left(t, n, q, e);
        Eigen::MatrixXcd ta = t.adjoint();
        kernel::apply_matrix_left(ta, n, q, e);
        out += ta.adjoint();
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityOperator(rho.layout(), std::move(out));
}

}  // namespace trapsim
