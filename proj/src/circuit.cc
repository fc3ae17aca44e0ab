#include "trapsim/circuit.h"

#include <cmath>

#include "trapsim/errors.h"

namespace trapsim {

namespace {

void check_bijection(const std::vector<uint64_t> &table) {
    std::vector<bool> hit(table.size(), false);
    for (uint64_t v : table) {
        if (v >= table.size() || hit[v]) {
            throw InvariantError("classical gate table is not a bijection");
        }
        hit[v] = true;
    }
}

}  // namespace

Eigen::MatrixXcd hadamard_matrix(int qubits) {
    Eigen::MatrixXcd h(1, 1);
    h(0, 0) = 1.0;
    Eigen::MatrixXcd h1(2, 2);
    double r = 1.0 / std::sqrt(2.0);
    h1 << r, r, r, -r;
    for (int k = 0; k < qubits; k++) {
        Eigen::MatrixXcd next(h.rows() * 2, h.cols() * 2);
        for (Eigen::Index i = 0; i < h.rows(); i++) {
            for (Eigen::Index j = 0; j < h.cols(); j++) {
                next.block(2 * i, 2 * j, 2, 2) = h(i, j) * h1;
            }
        }
        h = next;
    }
    return h;
}

Eigen::MatrixXcd rotation_y(double angle) {
    Eigen::MatrixXcd r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

Circuit &Circuit::dense(std::vector<std::string> targets, Eigen::MatrixXcd matrix, std::vector<Control> controls) {
    ops_.push_back(Op{Op::Kind::Dense, std::move(targets), std::move(matrix), {}, std::move(controls)});
    return *this;
}

Circuit &Circuit::unitary(const UnitaryOperator &u, std::vector<std::string> targets, std::vector<Control> controls) {
    return dense(std::move(targets), u.matrix(), std::move(controls));
}

Circuit &Circuit::table(std::vector<std::string> targets, std::vector<uint64_t> table, std::vector<Control> controls) {
    check_bijection(table);
    ops_.push_back(Op{Op::Kind::Table, std::move(targets), {}, std::move(table), std::move(controls)});
    return *this;
}

Circuit &Circuit::classical(std::vector<std::string> targets, int width, const std::function<uint64_t(uint64_t)> &f,
                            std::vector<Control> controls) {
    if (width > 24) {
        throw ResourceCapError("classical gate wider than 24 qubits");
    }
    std::vector<uint64_t> t(uint64_t{1} << width);
    for (uint64_t v = 0; v < t.size(); v++) {
        t[v] = f(v);
    }
    return table(std::move(targets), std::move(t), std::move(controls));
}

Circuit &Circuit::hadamard(const std::string &reg, int qubits) {
    // One qubit at a time keeps the cost linear in the register width.
    Eigen::MatrixXcd h = hadamard_matrix(1);
    for (int k = 0; k < qubits; k++) {
        ops_.push_back(Op{Op::Kind::Dense, {reg + "#" + std::to_string(k)}, h, {}, {}});
    }
    return *this;
}

Circuit &Circuit::xor_into(const std::string &source, const std::string &target, int width) {
    uint64_t mask = (uint64_t{1} << width) - 1;
    return classical({source, target}, 2 * width, [=](uint64_t v) {
        uint64_t s = v >> width;
        uint64_t t = v & mask;
        return (s << width) | (t ^ s);
    });
}

Circuit &Circuit::append(const Circuit &other) {
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit out;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        Op op = *it;
        if (op.kind == Op::Kind::Dense) {
            op.matrix = it->matrix.adjoint();
        } else {
            for (uint64_t v = 0; v < it->table.size(); v++) {
                op.table[it->table[v]] = v;
            }
        }
        out.ops_.push_back(std::move(op));
    }
    return out;
}

namespace {

// Targets are register names, optionally suffixed "#k" to address the k-th
// qubit of a register.
std::vector<int> resolve_targets(const RegisterLayout &layout, const std::vector<std::string> &targets) {
    std::vector<int> out;
    for (const auto &t : targets) {
        auto hash = t.find('#');
        if (hash == std::string::npos) {
            auto q = layout.qubits_of({t});
            out.insert(out.end(), q.begin(), q.end());
        } else {
            std::string reg = t.substr(0, hash);
            int k = std::stoi(t.substr(hash + 1));
            if (k < 0 || k >= layout.at(reg).qubits) {
                throw LayoutError("qubit index out of range for register '" + reg + "'");
            }
            out.push_back(layout.offset(reg) + k);
        }
    }
    std::vector<bool> seen(static_cast<size_t>(layout.num_qubits()), false);
    for (int q : out) {
        if (seen[static_cast<size_t>(q)]) {
            throw LayoutError("gate targets overlap");
        }
        seen[static_cast<size_t>(q)] = true;
    }
    return out;
}

}  // namespace

void Circuit::apply_in_place(Eigen::VectorXcd &vec, const RegisterLayout &layout) const {
    int n = layout.num_qubits();
    for (const auto &op : ops_) {
        auto q = resolve_targets(layout, op.targets);
        uint64_t cmask = 0;
        uint64_t cval = 0;
        for (const auto &c : op.controls) {
            int len = layout.at(c.reg).qubits;
            int shift = n - layout.offset(c.reg) - len;
            cmask |= ((uint64_t{1} << len) - 1) << shift;
            cval |= c.value << shift;
        }
        if (op.kind == Op::Kind::Dense) {
            kernel::apply_matrix(vec, n, q, op.matrix, cmask, cval);
        } else {
            kernel::apply_table(vec, n, q, op.table, cmask, cval);
        }
    }
}

StateVector Circuit::apply(const StateVector &s) const {
    Eigen::VectorXcd v = s.amplitudes();
    apply_in_place(v, s.layout());
    return StateVector(s.layout(), std::move(v));
}

UnitaryOperator Circuit::to_unitary(const RegisterLayout &layout) const {
    if (layout.num_qubits() > 12) {
        throw ResourceCapError("refusing to materialize a unitary on more than 12 qubits");
    }
    auto d = static_cast<Eigen::Index>(layout.dimension());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index c = 0; c < d; c++) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(c) = 1.0;
        apply_in_place(v, layout);
        m.col(c) = v;
    }
    return UnitaryOperator(layout, std::move(m));
}

}  // namespace trapsim
