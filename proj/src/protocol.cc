#include "trapsim/protocol.h"

#include <cmath>

#include "trapsim/errors.h"
#include "trapsim/linalg.h"
#include "trapsim/random.h"
#include "trapsim/rejection_sampling.h"

namespace trapsim {

namespace {

const char *kQrsFlag = "qrs_flag";

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

uint64_t accept_value(Convention c) {
    return c == Convention::Complement ? 0 : 1;
}

RegisterLayout with_workspace(const RegisterLayout &mv, int p_qubits) {
    if (p_qubits == 0) {
        return mv;
    }
    return RegisterLayout::single(kProverWorkspace, p_qubits).concat(mv);
}

StateVector add_workspace(const StateVector &s, int p_qubits) {
    if (p_qubits == 0) {
        return s;
    }
    return tensor_product(StateVector::basis(RegisterLayout::single(kProverWorkspace, p_qubits)), s);
}

Circuit erase_copies(int m, int t) {
    Circuit c;
    for (int i = 0; i < t; i++) {
        auto regs = CopyRegisters::of(i);
        c.xor_into(regs.q, regs.c, m);
    }
    return c;
}

Circuit computation_check(const Reduction &r) {
    Circuit c = erase_copies(r.m(), r.copies());
    c.append(r.decider());
    return c;
}

Circuit trap_check(const Permutation &f, int t) {
    Circuit c;
    for (int i = 0; i < t; i++) {
        c.append(trap_verifier_gate(f, i));
    }
    return c;
}

Circuit add_control(const Circuit &in, const Control &ctrl) {
    Circuit out;
    for (const auto &op : in.ops()) {
        auto controls = op.controls;
        controls.push_back(ctrl);
        if (op.kind == Circuit::Op::Kind::Dense) {
            out.dense(op.targets, op.matrix, controls);
        } else {
            out.table(op.targets, op.table, controls);
        }
    }
    return out;
}

void check_widths(const Reduction &r, const Permutation &f) {
    if (f.width() != r.m()) {
        throw DimensionError("permutation width differs from reduction width");
    }
}

void draw_samples(ProtocolResult &res, const RunOptions &options) {
    if (options.samples <= 0) {
        return;
    }
    Rng rng(options.sample_seed);
    for (int i = 0; i < options.samples; i++) {
        bool trap = (rng() & 1) != 0;
        double p = trap ? res.p1 : res.p0;
        res.draws.push_back(uniform_unit(rng) < p ? 1 : 0);
    }
}

ProtocolResult base_result(const std::string &name, const Reduction &r, uint64_t x, const Prover &prover) {
    ProtocolResult res;
    res.protocol = name;
    res.m = r.m();
    res.k = r.k();
    res.t = r.copies();
    res.eps = r.base_epsilon();
    res.x = x;
    res.prover_kind = prover.kind_name();
    res.workspace_qubits = prover.workspace_qubits();
    return res;
}

void finish(ProtocolResult &res) {
    res.accept_prob = 0.5 * (res.p0 + res.p1);
    for (double p : {res.p0, res.p1}) {
        if (p < -kTol || p > 1 + kTol) {
            throw InvariantError("branch acceptance outside [0, 1]");
        }
    }
}

// Both branches on one statevector each, with the prover's workspace prepended.
void simulate_full(ProtocolResult &res, const Reduction &r, const Permutation &f, const Prover &prover,
                   const StateVector &query, const StateVector &trap, const RunOptions &options) {
    int p = prover.workspace_qubits();
    Circuit pc = prover.circuit(f, r.copies());
    StateVector comp = computation_check(r).apply(pc.apply(add_workspace(query, p)));
    StateVector tr = trap_check(f, r.copies()).apply(pc.apply(add_workspace(trap, p)));
    res.p0 = probability(comp, r.output_register(), accept_value(options.convention));
    res.p1 = probability_all_zero(tr, r.layout().names());
    if (options.keep_states) {
        res.computation_state = std::move(comp);
        res.trap_state = std::move(tr);
    }
}

// Per-copy provers leave the copies independent, so each copy is simulated on
// its own registers and only the decision qubits are combined.
void simulate_factorized(ProtocolResult &res, const Reduction &r, const Permutation &f, const Prover &prover,
                         const RunOptions &options) {
    int t = r.copies();
    RegisterLayout single = mv_layout(r.m(), 1);
    auto regs = CopyRegisters::of(0);
    Circuit prep = r.copy_generator(0, res.x);
    prep.xor_into(regs.q, regs.c, r.m());
    Circuit pc = prover.circuit(f, 1);
    Circuit comp = erase_copies(r.m(), 1);
    comp.append(r.copy_decider(0));
    StateVector after = comp.apply(pc.apply(prep.apply(StateVector::basis(single))));
    double one = probability(after, regs.out, 1);
    // Distribution of the number of copies deciding 1.
    std::vector<double> count(static_cast<size_t>(t) + 1, 0.0);
    count[0] = 1.0;
    for (int i = 0; i < t; i++) {
        for (int c = i + 1; c >= 0; c--) {
            double stay = count[static_cast<size_t>(c)] * (1 - one);
            double move = c > 0 ? count[static_cast<size_t>(c) - 1] * one : 0.0;
            count[static_cast<size_t>(c)] = stay + move;
        }
    }
    double maj_one = 0;
    for (int c = t / 2 + 1; c <= t; c++) {
        maj_one += count[static_cast<size_t>(c)];
    }
    res.p0 = options.convention == Convention::Complement ? 1 - maj_one : maj_one;
    StateVector tr = trap_verifier_gate(f, 0).apply(pc.apply(trap_state(r.m(), 1)));
    res.p1 = std::pow(probability_all_zero(tr, single.names()), t);
    res.factorized = true;
}

}  // namespace

Prover Prover::honest() {
    return Prover();
}

Prover Prover::unitary_cheat(Eigen::MatrixXcd u, int workspace_qubits) {
    if (workspace_qubits < 0 || workspace_qubits > 8) {
        throw ResourceCapError("prover workspace must be between 0 and 8 qubits");
    }
    if (u.rows() != u.cols()) {
        throw DimensionError("cheat matrix must be square");
    }
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > kTol) {
        throw InvariantError("cheat matrix is not unitary");
    }
    Prover p;
    p.kind_ = Kind::UnitaryCheat;
    p.p_qubits_ = workspace_qubits;
    p.u_ = std::move(u);
    return p;
}

Prover Prover::classical(std::vector<uint64_t> answers) {
    Prover p;
    p.kind_ = Kind::Classical;
    p.answers_ = std::move(answers);
    return p;
}

Prover Prover::corrupted(const Permutation &f, const CorruptionSet &s) {
    if (s.width() != f.width()) {
        throw DimensionError("corruption set width differs from permutation width");
    }
    std::vector<uint64_t> g = f.inverse_table();
    for (uint64_t q : s.members()) {
        g[q] ^= 1;
    }
    return classical(std::move(g));
}

std::string Prover::kind_name() const {
    switch (kind_) {
        case Kind::Honest:
            return "honest";
        case Kind::UnitaryCheat:
            return "unitary-cheat";
        case Kind::Classical:
            return "classical";
    }
    return "unknown";
}

Circuit Prover::circuit(const Permutation &f, int t) const {
    int m = f.width();
    Circuit c;
    if (kind_ == Kind::Classical) {
        if (answers_.size() != f.size()) {
            throw DimensionError("answer table needs 2^m entries");
        }
        for (uint64_t a : answers_) {
            if (a >> m) {
                throw InvariantError("answer does not fit in m bits");
            }
        }
        auto answers = answers_;
        for (int i = 0; i < t; i++) {
            auto regs = CopyRegisters::of(i);
            c.classical({regs.q, regs.a}, 2 * m, [answers, m](uint64_t v) { return v ^ answers[v >> m]; });
        }
        return c;
    }
    for (int i = 0; i < t; i++) {
        auto regs = CopyRegisters::of(i);
        c.append(inversion_gate(f, regs.q, regs.a));
    }
    if (kind_ == Kind::UnitaryCheat) {
        auto expected = Eigen::Index{1} << (p_qubits_ + 2 * m * t);
        if (u_.rows() != expected) {
            throw DimensionError("cheat matrix does not act on P and the message registers");
        }
        std::vector<std::string> targets;
        if (p_qubits_ > 0) {
            targets.push_back(kProverWorkspace);
        }
        for (const auto &name : message_registers(t)) {
            targets.push_back(name);
        }
        c.dense(targets, u_);
    }
    return c;
}

StateVector trap_state(int m, int t) {
    Circuit c;
    for (int i = 0; i < t; i++) {
        auto regs = CopyRegisters::of(i);
        c.hadamard(regs.q, m);
        c.xor_into(regs.q, regs.c, m);
    }
    return c.apply(StateVector::basis(mv_layout(m, t)));
}

StateVector trap_response(const Permutation &f, int t) {
    return Prover::honest().circuit(f, t).apply(trap_state(f.width(), t));
}

StateVector prepare_superposed_query(const Reduction &r, uint64_t x) {
    if (r.copies() != 1) {
        throw InvariantError("the superposed query is built for one-copy reductions");
    }
    RegisterLayout layout = r.layout().concat(RegisterLayout::single(kBranch, 1));
    auto regs = CopyRegisters::of(0);
    Circuit c;
    c.hadamard(kBranch, 1);
    c.append(add_control(r.generator(x), {kBranch, 0}));
    Eigen::MatrixXcd h = hadamard_matrix(1);
    for (int k = 0; k < r.m(); k++) {
        c.dense({regs.q + "#" + std::to_string(k)}, h, {{kBranch, 1}});
    }
    c.xor_into(regs.q, regs.c, r.m());
    return c.apply(StateVector::basis(layout));
}

Circuit trap_verifier_gate(const Permutation &f, int copy) {
    auto regs = CopyRegisters::of(copy);
    Circuit c;
    c.xor_into(regs.q, regs.c, f.width());
    c.append(forward_gate(f, regs.a, regs.q));
    c.hadamard(regs.a, f.width());
    return c;
}

UnitaryOperator trap_verifier(const Permutation &f) {
    int m = f.width();
    if (3 * m > 12) {
        throw ResourceCapError("dense trap verifier is limited to m <= 4");
    }
    auto regs = CopyRegisters::of(0);
    RegisterLayout local({{regs.q, m}, {regs.a, m}, {regs.c, m}});
    UnitaryOperator u = trap_verifier_gate(f, 0).to_unitary(local);
    return UnitaryOperator(RegisterLayout({{"q", m}, {"a", m}, {"c", m}}), u.matrix());
}

StateVector rearranged_query_state(const Reduction &r, uint64_t x) {
    int t = r.copies();
    std::optional<StateVector> joint;
    for (int i = 0; i < t; i++) {
        auto regs = CopyRegisters::of(i);
        RegisterLayout copy({{regs.q, r.m()}, {regs.a, r.m()}, {regs.w, r.m()}, {regs.c, r.m()}, {regs.out, 1}});
        Circuit c = r.copy_generator(i, x);
        c.xor_into(regs.q, regs.c, r.m());
        StateVector s = c.apply(StateVector::basis(copy));
        joint = joint ? tensor_product(*joint, s) : s;
    }
    if (t > 1) {
        joint = tensor_product(*joint, StateVector::basis(RegisterLayout::single(kMajority, 1)));
    }
    return rearrange(*joint, t);
}

ProtocolResult run_protocol(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                            const RunOptions &options) {
    if (r.copies() != 1) {
        throw InvariantError("amplified reductions run through run_multiquery_protocol");
    }
    check_widths(r, f);
    ProtocolResult res = base_result("1", r, x, prover);
    simulate_full(res, r, f, prover, generate_query_state(r, x), trap_state(r.m(), 1), options);
    finish(res);
    draw_samples(res, options);
    return res;
}

ProtocolResult run_multiquery_protocol(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                                       const RunOptions &options) {
    check_widths(r, f);
    ProtocolResult res = base_result("2", r, x, prover);
    int total = r.layout().num_qubits() + prover.workspace_qubits();
    bool per_copy_ok = prover.kind() != Prover::Kind::UnitaryCheat;
    if (options.factorize && !per_copy_ok) {
        throw InvariantError("a cheating prover cannot be simulated copy by copy");
    }
    if (total <= max_qubits() && !options.factorize) {
        simulate_full(res, r, f, prover, rearranged_query_state(r, x), trap_state(r.m(), r.copies()), options);
    } else if (per_copy_ok) {
        simulate_factorized(res, r, f, prover, options);
    } else {
        throw ResourceCapError("cheating prover over " + std::to_string(total) + " qubits exceeds the cap of " +
                               std::to_string(max_qubits()));
    }
    finish(res);
    draw_samples(res, options);
    return res;
}

ProtocolResult run_smooth_protocol(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                                   uint64_t gamma, uint64_t gamma_prime, const RunOptions &options) {
    if (r.copies() != 1) {
        throw InvariantError("the smooth protocol is simulated for one-copy reductions");
    }
    check_widths(r, f);
    const DistributionTable &d = r.distribution();
    if (!d.is_smooth()) {
        throw InvariantError("query distribution is not smooth");
    }
    ProtocolResult res = base_result("3", r, x, prover);
    res.gamma = gamma ? gamma : qrs_gamma(d);
    res.gamma_prime = gamma_prime ? gamma_prime : qrs_gamma_prime(d);
    DistributionTable uniform = DistributionTable::uniform(r.m(), d.smoothness());
    QrsPlan send = make_qrs_plan(d, uniform);
    QrsPlan receive = make_qrs_plan(uniform, d);
    auto regs = CopyRegisters::of(0);

    StateVector query_d = generate_query_state(r, x);
    QrsRound sent = qrs_round(query_d, send, regs.q);
    res.send_success = sent.success_probability;
    if (!sent.state) {
        throw InvariantError("rejection sampling toward uniform cannot succeed");
    }

    int p = prover.workspace_qubits();
    Circuit pc = prover.circuit(f, 1);
    StateVector replied = erase_copies(r.m(), 1).apply(pc.apply(add_workspace(*sent.state, p)));
    StateVector flagged = tensor_product(replied, StateVector::basis(RegisterLayout::single(kQrsFlag, 1)));
    Postselection back = postselect(qrs_gate(receive, regs.q, kQrsFlag).apply(flagged), kQrsFlag, 1);
    res.receive_success = back.probability;
    if (back.state) {
        StateVector comp = r.decider().apply(*back.state);
        res.p0 = probability(comp, r.output_register(), accept_value(options.convention));
        if (options.keep_states) {
            res.computation_state = std::move(comp);
        }
    }
    StateVector tr = trap_check(f, 1).apply(pc.apply(add_workspace(trap_state(r.m(), 1), p)));
    res.p1 = probability_all_zero(tr, r.layout().names());
    if (options.keep_states) {
        res.trap_state = std::move(tr);
    }
    finish(res);

    if (options.samples > 0) {
        auto prepare = [&] { return query_d; };
        QrsRun run = qrs_run(prepare, send, regs.q, static_cast<int>(std::min<uint64_t>(res.gamma, 1 << 20)),
                             options.sample_seed);
        res.send_rounds = run.succeeded() ? run.rounds_used : -1;
        Rng rng(options.sample_seed ^ 0x9e3779b97f4a7c15ULL);
        res.receive_rounds = -1;
        for (uint64_t round = 1; round <= res.gamma_prime; round++) {
            if (uniform_unit(rng) < res.receive_success) {
                res.receive_rounds = static_cast<int>(round);
                break;
            }
        }
    }
    draw_samples(res, options);
    return res;
}

ProtocolResult run_classical_query_protocol(const Reduction &r, const Permutation &f, uint64_t x,
                                            const Prover &prover, const RunOptions &options) {
    check_widths(r, f);
    if (prover.kind() == Prover::Kind::UnitaryCheat) {
        throw InvariantError("classical-query protocol needs an honest or classical prover");
    }
    std::vector<uint64_t> answers = prover.kind() == Prover::Kind::Honest ? f.inverse_table() : prover.answers();
    if (answers.size() != f.size()) {
        throw DimensionError("answer table needs 2^m entries");
    }
    int m = r.m();
    int t = r.copies();
    if (m * t > 16) {
        throw ResourceCapError("too many query tuples to enumerate");
    }
    ProtocolResult res = base_result("classical", r, x, prover);

    // Measure the query of one copy, answer it, check it, run R.
    RegisterLayout single = mv_layout(m, 1);
    auto regs = CopyRegisters::of(0);
    Circuit prep = r.copy_generator(0, x);
    prep.xor_into(regs.q, regs.c, m);
    StateVector query = prep.apply(StateVector::basis(single));
    uint64_t n = f.size();
    std::vector<double> weight(n, 0.0);
    std::vector<bool> correct(n, false);
    std::vector<double> decides_one(n, 0.0);
    for (uint64_t q = 0; q < n; q++) {
        Postselection ps = postselect(query, regs.q, q);
        weight[q] = ps.probability;
        if (!ps.state) {
            continue;
        }
        StateVector measured = tensor_product(StateVector::basis(RegisterLayout::single(regs.q, m), {{regs.q, q}}),
                                              *ps.state);
        uint64_t a = answers[q] & ((uint64_t{1} << m) - 1);
        correct[q] = answers[q] == a && f(a) == q;
        Circuit answer;
        if (a != 0) {
            answer.classical({regs.a}, m, [a](uint64_t v) { return v ^ a; });
        }
        answer.xor_into(regs.q, regs.c, m);
        answer.append(r.copy_decider(0));
        decides_one[q] = probability(answer.apply(measured), regs.out, 1);
    }

    uint64_t tuples = uint64_t{1} << (m * t);
    uint64_t mask = n - 1;
    double total = 0;
    for (uint64_t tuple = 0; tuple < tuples; tuple++) {
        double w = 1;
        bool ok = true;
        std::vector<double> count(static_cast<size_t>(t) + 1, 0.0);
        count[0] = 1;
        for (int i = 0; i < t; i++) {
            uint64_t q = (tuple >> (m * (t - 1 - i))) & mask;
            w *= weight[q];
            ok = ok && correct[q];
            double one = decides_one[q];
            for (int c = i + 1; c >= 0; c--) {
                count[static_cast<size_t>(c)] =
                    count[static_cast<size_t>(c)] * (1 - one) + (c > 0 ? count[static_cast<size_t>(c) - 1] * one : 0.0);
            }
        }
        double maj_one = 0;
        for (int c = t / 2 + 1; c <= t; c++) {
            maj_one += count[static_cast<size_t>(c)];
        }
        double acc = ok ? (options.convention == Convention::Complement ? 1 - maj_one : maj_one) : 0.0;
        res.query_accept.push_back(acc);
        total += w * acc;
    }
    res.p0 = total;
    res.p1 = total;
    finish(res);
    draw_samples(res, options);
    return res;
}

double superposed_accept_probability(const Reduction &r, const Permutation &f, uint64_t x, const Prover &prover,
                                     Convention convention) {
    check_widths(r, f);
    StateVector s = add_workspace(prepare_superposed_query(r, x), prover.workspace_qubits());
    StateVector replied = prover.circuit(f, 1).apply(s);
    Postselection comp = postselect(replied, kBranch, 0);
    Postselection trap = postselect(replied, kBranch, 1);
    double acc = 0;
    if (comp.state) {
        acc += comp.probability *
               probability(computation_check(r).apply(*comp.state), r.output_register(), accept_value(convention));
    }
    if (trap.state) {
        acc += trap.probability * probability_all_zero(trap_check(f, 1).apply(*trap.state), r.layout().names());
    }
    return acc;
}

CheatBound cheat_upper_bound(const Reduction &r, const Permutation &f, uint64_t x, Convention convention) {
    StateVector qh = honest_answer_state(r, x, f);
    const RegisterLayout &layout = qh.layout();
    Circuit dec = r.decider();
    uint64_t acc = accept_value(convention);
    std::string out = r.output_register();
    double s2 = probability(dec.apply(qh), out, acc);

    CheatBound b;
    b.sin2_theta = s2;
    b.closed_form = 0.5 * (1.0 + std::sqrt(std::max(s2, 0.0)));
    std::vector<bool> accepting(layout.dimension());
    for (uint64_t i = 0; i < layout.dimension(); i++) {
        accepting[i] = layout.value_of(i, out) == acc;
    }
    const Eigen::VectorXcd &phi = qh.amplitudes();
    if (layout.num_qubits() <= 10) {
        Eigen::MatrixXcd u = r.decider_unitary().matrix();
        Eigen::MatrixXcd rows(u.rows() / 2, u.cols());
        Eigen::Index n = 0;
        for (Eigen::Index i = 0; i < u.rows(); i++) {
            if (accepting[static_cast<size_t>(i)]) {
                rows.row(n++) = u.row(i);
            }
        }
        Eigen::MatrixXcd proj = rows.adjoint() * rows;
        b.eigen_oracle = 0.5 * largest_eigenvalue(proj + phi * phi.adjoint());
        b.used_lanczos = false;
    } else {
        Circuit undo = dec.inverse();
        auto apply = [&](const Eigen::VectorXcd &v) {
            Eigen::VectorXcd w = v;
            dec.apply_in_place(w, layout);
            for (Eigen::Index i = 0; i < w.size(); i++) {
                if (!accepting[static_cast<size_t>(i)]) {
                    w(i) = 0;
                }
            }
            undo.apply_in_place(w, layout);
            return Eigen::VectorXcd(w + phi * phi.dot(v));
        };
        b.eigen_oracle = 0.5 * largest_eigenvalue(apply, static_cast<Eigen::Index>(layout.dimension()), 0x5eed);
        b.used_lanczos = true;
    }
    if (std::abs(b.closed_form - b.eigen_oracle) > kTol) {
        throw InvariantError("closed-form cheating bound disagrees with the eigenvalue oracle");
    }
    return b;
}

CheatEvaluator::CheatEvaluator(const Reduction &r, const Permutation &f, uint64_t x, int workspace_qubits,
                               Convention convention)
    : t_(r.copies()), p_qubits_(workspace_qubits) {
    check_widths(r, f);
    RegisterLayout mv = r.layout();
    dim_p_ = Eigen::Index{1} << workspace_qubits;
    dim_m_ = Eigen::Index{1} << (2 * r.m() * t_);
    dim_v_ = static_cast<Eigen::Index>(mv.dimension()) / dim_m_;
    full_ = with_workspace(mv, workspace_qubits);
    if (full_.num_qubits() > max_qubits()) {
        throw ResourceCapError("cheat evaluation exceeds the qubit cap");
    }
    output_shift_ = full_.num_qubits() - 1 - full_.offset(r.output_register());
    accept_value_ = accept_value(convention);
    StateVector qh = honest_answer_state(r, x, f);
    StateVector th = trap_response(f, t_);
    query_ = Eigen::Map<const RowMatrix>(qh.amplitudes().data(), dim_m_, dim_v_);
    trap_ = Eigen::Map<const RowMatrix>(th.amplitudes().data(), dim_m_, dim_v_);
    verify_ = computation_check(r);
}

CheatEvaluator::Value CheatEvaluator::evaluate(const Eigen::MatrixXcd &u) const {
    if (u.rows() != dimension() || u.cols() != dimension()) {
        throw DimensionError("cheat matrix does not act on P and the message registers");
    }
    auto w = u.leftCols(dim_m_);
    RowMatrix psi_q = w * query_;
    Eigen::MatrixXcd psi_t = w * trap_;
    double p1 = 0;
    double qov = 0;
    for (Eigen::Index p = 0; p < dim_p_; p++) {
        p1 += std::norm((trap_.conjugate().cwiseProduct(psi_t.middleRows(p * dim_m_, dim_m_))).sum());
        qov += std::norm((query_.conjugate().cwiseProduct(psi_q.middleRows(p * dim_m_, dim_m_))).sum());
    }
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(psi_q.data(), psi_q.size());
    verify_.apply_in_place(v, full_);
    double p0 = 0;
    for (Eigen::Index i = 0; i < v.size(); i++) {
        if (((static_cast<uint64_t>(i) >> output_shift_) & 1) == accept_value_) {
            p0 += std::norm(v(i));
        }
    }
    return {p0, p1, 0.5 * (p0 + p1), qov};
}

SearchResult prover_search(const Reduction &r, const Permutation &f, uint64_t x, int workspace_qubits, int iters,
                           uint64_t seed, Convention convention) {
    CheatEvaluator eval(r, f, x, workspace_qubits, convention);
    Eigen::Index dim = eval.dimension();
    Rng rng(seed);
    Eigen::MatrixXcd current = Eigen::MatrixXcd::Identity(dim, dim);
    auto cur = eval.evaluate(current);
    Eigen::MatrixXcd best = current;
    auto best_value = cur;
    std::vector<double> trace;
    for (int it = 0; it < iters; it++) {
        if (it > 0 && it % 250 == 0) {
            current = haar_unitary(dim, rng);
            cur = eval.evaluate(current);
        } else {
            auto i = static_cast<Eigen::Index>(uniform_below(rng, static_cast<uint64_t>(dim)));
            auto j = static_cast<Eigen::Index>(uniform_below(rng, static_cast<uint64_t>(dim - 1)));
            if (j >= i) {
                j++;
            }
            double angle = 0.6 * (uniform_unit(rng) - 0.5);
            cplx phase = std::polar(1.0, 2 * M_PI * uniform_unit(rng));
            Eigen::MatrixXcd cand = current;
            double c = std::cos(angle);
            double s = std::sin(angle);
            cand.row(i) = c * current.row(i) - s * phase * current.row(j);
            cand.row(j) = s * std::conj(phase) * current.row(i) + c * current.row(j);
            auto value = eval.evaluate(cand);
            if (value.accept > cur.accept) {
                current = std::move(cand);
                cur = value;
            }
        }
        if (cur.accept > best_value.accept) {
            best = current;
            best_value = cur;
        }
        trace.push_back(best_value.accept);
    }
    return {Prover::unitary_cheat(best, workspace_qubits), best_value.accept, best_value.p0, best_value.p1,
            std::move(trace)};
}

}  // namespace trapsim
