#include "trapsim/reduction.h"

#include <cmath>

#include "trapsim/errors.h"

namespace trapsim {

CopyRegisters CopyRegisters::of(int copy) {
    std::string i = std::to_string(copy);
    return {"q" + i, "a" + i, "w" + i, "c" + i, "out" + i};
}

RegisterLayout mv_layout(int m, int t) {
    std::vector<Register> regs;
    for (int i = 0; i < t; i++) {
        auto r = CopyRegisters::of(i);
        regs.push_back({r.q, m});
        regs.push_back({r.a, m});
    }
    for (int i = 0; i < t; i++) {
        auto r = CopyRegisters::of(i);
        regs.push_back({r.w, m});
        regs.push_back({r.c, m});
        regs.push_back({r.out, 1});
    }
    if (t > 1) {
        regs.push_back({kMajority, 1});
    }
    return RegisterLayout(std::move(regs));
}

std::vector<std::string> copy_major_order(int m, int t) {
    (void)m;
    std::vector<std::string> out;
    for (int i = 0; i < t; i++) {
        auto r = CopyRegisters::of(i);
        out.insert(out.end(), {r.q, r.a, r.w, r.c, r.out});
    }
    if (t > 1) {
        out.push_back(kMajority);
    }
    return out;
}

std::vector<std::string> message_first_order(int m, int t) {
    return mv_layout(m, t).names();
}

std::vector<std::string> message_registers(int t) {
    std::vector<std::string> out;
    for (int i = 0; i < t; i++) {
        auto r = CopyRegisters::of(i);
        out.push_back(r.q);
        out.push_back(r.a);
    }
    return out;
}

StateVector rearrange(const StateVector &copy_major, int t) {
    int m = copy_major.layout().at(CopyRegisters::of(0).q).qubits;
    return copy_major.reorder(message_first_order(m, t));
}

StateVector unrearrange(const StateVector &message_first, int t) {
    int m = message_first.layout().at(CopyRegisters::of(0).q).qubits;
    return message_first.reorder(copy_major_order(m, t));
}

double binomial_tail(double eps, int t) {
    double total = 0;
    for (int u = t / 2 + 1; u <= t; u++) {
        double c = std::exp(std::lgamma(t + 1.0) - std::lgamma(u + 1.0) - std::lgamma(t - u + 1.0));
        total += std::round(c) * std::pow(eps, u) * std::pow(1.0 - eps, t - u);
    }
    return total;
}

Eigen::MatrixXcd state_preparation(const Eigen::VectorXd &target) {
    auto n = target.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd u = -target;
    u(0) += 1.0;
    double uu = u.squaredNorm();
    if (uu > 1e-30) {
        h -= 2.0 * u * u.transpose() / uu;
    }
    return h.cast<cplx>();
}

double Reduction::epsilon() const {
    return t_ == 1 ? eps_ : binomial_tail(eps_, t_);
}

Permutation Reduction::permutation() const {
    return xor_shift_permutation(m_, s_);
}

void Reduction::check_input(uint64_t x) const {
    if (x >> m_) {
        throw DimensionError("input does not fit in " + std::to_string(m_) + " bits");
    }
}

int Reduction::language(uint64_t x) const {
    check_input(x);
    return bit_at(x ^ s_, m_, bit_);
}

Circuit Reduction::copy_generator(int copy, uint64_t x) const {
    check_input(x);
    auto r = CopyRegisters::of(copy);
    const auto &d = dists_[static_cast<size_t>(copy)];
    Circuit c;
    if (d.is_uniform()) {
        c.hadamard(r.q, m_);
    } else {
        Eigen::VectorXd amp(static_cast<Eigen::Index>(d.size()));
        for (uint64_t q = 0; q < d.size(); q++) {
            amp(static_cast<Eigen::Index>(q)) = std::sqrt(d[q]);
        }
        c.dense({r.q}, state_preparation(amp));
    }
    c.xor_into(r.q, r.w, m_);
    if (x != 0) {
        c.classical({r.w}, m_, [x](uint64_t v) { return v ^ x; });
    }
    return c;
}

Circuit Reduction::generator(uint64_t x) const {
    Circuit c;
    for (int i = 0; i < t_; i++) {
        c.append(copy_generator(i, x));
    }
    return c;
}

Circuit Reduction::copy_decider(int copy) const {
    auto r = CopyRegisters::of(copy);
    int m = m_;
    int b = bit_;
    Circuit c;
    c.xor_into(r.w, r.a, m);
    c.classical({r.a, r.out}, m + 1, [m, b](uint64_t v) { return v ^ static_cast<uint64_t>(bit_at(v >> 1, m, b)); });
    c.xor_into(r.w, r.a, m);
    if (eps_ > 0) {
        c.dense({r.out}, rotation_y(std::asin(std::sqrt(eps_))));
    }
    return c;
}

namespace {

std::vector<uint64_t> majority_table(int t) {
    std::vector<uint64_t> table(uint64_t{1} << (t + 1));
    for (uint64_t v = 0; v < table.size(); v++) {
        int ones = __builtin_popcountll(v >> 1);
        table[v] = v ^ (ones > t / 2 ? 1 : 0);
    }
    return table;
}

std::vector<std::string> decision_qubits(int t) {
    std::vector<std::string> out;
    for (int i = 0; i < t; i++) {
        out.push_back(CopyRegisters::of(i).out);
    }
    out.push_back(kMajority);
    return out;
}

}  // namespace

Circuit Reduction::decider() const {
    Circuit c;
    for (int i = 0; i < t_; i++) {
        c.append(copy_decider(i));
    }
    if (t_ > 1) {
        c.table(decision_qubits(t_), majority_table(t_));
    }
    return c;
}

UnitaryOperator Reduction::generator_unitary(uint64_t x) const {
    return generator(x).to_unitary(layout());
}

UnitaryOperator Reduction::decider_unitary() const {
    return decider().to_unitary(layout());
}

Reduction build_xor_reduction(int m, uint64_t s, int bit) {
    if (m < 1 || m > 8) {
        throw ResourceCapError("reduction width must be in [1, 8]");
    }
    if (bit < 0 || bit >= m) {
        throw InvariantError("decision bit must be in [0, m)");
    }
    if (s >> m) {
        throw InvariantError("shift does not fit in m bits");
    }
    Reduction r;
    r.family_ = "xor";
    r.m_ = m;
    r.s_ = s;
    r.bit_ = bit;
    r.dists_.push_back(DistributionTable::uniform(m));
    return r;
}

Reduction build_smooth_xor_reduction(int m, uint64_t s, int bit, const DistributionTable &d) {
    if (d.width() != m) {
        throw DimensionError("distribution width differs from reduction width");
    }
    if (!d.is_smooth()) {
        throw InvariantError("query distribution is not smooth");
    }
    Reduction r = build_xor_reduction(m, s, bit);
    r.family_ = "smooth-xor";
    r.dists_ = {d};
    return r;
}

Reduction add_noise(const Reduction &r, double eps) {
    if (!(eps >= 0.0 && eps < 0.5)) {
        throw InvariantError("noise must lie in [0, 1/2)");
    }
    if (eps == 0.0) {
        return r;
    }
    if (r.eps_ != 0.0 || r.t_ != 1) {
        throw InvariantError("noise can only be added to an exact, unamplified reduction");
    }
    Reduction out = r;
    out.eps_ = eps;
    return out;
}

Reduction amplify(const Reduction &r, int t) {
    if (t < 1 || t % 2 == 0) {
        throw InvariantError("repetition count must be odd and positive");
    }
    if (r.t_ != 1) {
        throw InvariantError("reduction is already amplified");
    }
    if (t == 1) {
        return r;
    }
    Reduction out = r;
    out.t_ = t;
    out.dists_.assign(static_cast<size_t>(t), r.dists_.front());
    return out;
}

StateVector generate_query_state(const Reduction &r, uint64_t x) {
    RegisterLayout layout = r.layout();
    Circuit c = r.generator(x);
    for (int i = 0; i < r.copies(); i++) {
        auto regs = CopyRegisters::of(i);
        c.xor_into(regs.q, regs.c, r.m());
    }
    return c.apply(StateVector::basis(layout));
}

StateVector honest_answer_state(const Reduction &r, uint64_t x, const Permutation &f) {
    if (f.width() != r.m()) {
        throw DimensionError("permutation width differs from reduction width");
    }
    Circuit c;
    for (int i = 0; i < r.copies(); i++) {
        auto regs = CopyRegisters::of(i);
        c.append(inversion_gate(f, regs.q, regs.a));
    }
    return c.apply(generate_query_state(r, x));
}

double decision_error(const Reduction &r, uint64_t x, const Permutation &f) {
    int t = r.copies();
    int wrong = 1 - r.language(x);
    if (f.width() != r.m()) {
        throw DimensionError("permutation width differs from reduction width");
    }
    // One copy on its own layout; every copy sees the same input and oracle.
    RegisterLayout single = mv_layout(r.m(), 1);
    auto regs = CopyRegisters::of(0);
    std::optional<DensityOperator> joint;
    for (int i = 0; i < t; i++) {
        Circuit c = r.copy_generator(0, x);
        c.xor_into(regs.q, regs.c, r.m());
        c.append(inversion_gate(f, regs.q, regs.a));
        c.append(r.copy_decider(0));
        StateVector psi = c.apply(StateVector::basis(single));
        DensityOperator out_i(RegisterLayout::single(CopyRegisters::of(i).out, 1),
                              partial_trace(psi, {regs.out}).matrix());
        joint = joint ? tensor_product(*joint, out_i) : out_i;
    }
    if (t == 1) {
        return std::real(joint->matrix()(wrong, wrong));
    }
    DensityOperator with_maj = tensor_product(*joint, DensityOperator::from_pure(StateVector::basis(
                                                          RegisterLayout::single(kMajority, 1))));
    Circuit vote;
    vote.table(decision_qubits(t), majority_table(t));
    UnitaryOperator u = vote.to_unitary(with_maj.layout());
    DensityOperator after = apply_on_registers(with_maj, u, with_maj.layout().names());
    DensityOperator maj = partial_trace(after, {kMajority});
    return std::real(maj.matrix()(wrong, wrong));
}

double decision_error_full(const Reduction &r, uint64_t x, const Permutation &f) {
    StateVector psi = r.decider().apply(honest_answer_state(r, x, f));
    return probability(psi, r.output_register(), static_cast<uint64_t>(1 - r.language(x)));
}

}  // namespace trapsim
