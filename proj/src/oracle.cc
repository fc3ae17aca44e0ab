#include "trapsim/oracle.h"

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "trapsim/distribution.h"
#include "trapsim/errors.h"
#include "trapsim/random.h"

namespace trapsim {

namespace {

void check_width(int m) {
    if (m < 1 || m > kMaxPermutationWidth) {
        throw ResourceCapError("permutation width must be in [1, " + std::to_string(kMaxPermutationWidth) + "]");
    }
}

// Answer function g of an oracle |q, y> -> |q, y ^ g(q)> as a table gate on 2m qubits.
std::vector<uint64_t> xor_write_table(int m, const std::vector<uint64_t> &g) {
    uint64_t n = uint64_t{1} << m;
    std::vector<uint64_t> t(n * n);
    for (uint64_t q = 0; q < n; q++) {
        for (uint64_t y = 0; y < n; y++) {
            t[q * n + y] = q * n + (y ^ g[q]);
        }
    }
    return t;
}

UnitaryOperator xor_write_unitary(int m, const std::vector<uint64_t> &g, const char *in, const char *out) {
    if (2 * m > 12) {
        throw ResourceCapError("dense oracle matrices are limited to m <= 6");
    }
    RegisterLayout layout({{in, m}, {out, m}});
    Circuit c;
    c.table({in, out}, xor_write_table(m, g));
    return c.to_unitary(layout);
}

std::vector<uint64_t> corrupted_answers(const Permutation &f, const CorruptionSet &s) {
    if (s.width() != f.width()) {
        throw DimensionError("corruption set width differs from permutation width");
    }
    std::vector<uint64_t> g = f.inverse_table();
    for (uint64_t q : s.members()) {
        g[q] ^= 1;
    }
    return g;
}

}  // namespace

Permutation::Permutation(int m, std::vector<uint64_t> forward) : m_(m), forward_(std::move(forward)) {
    check_width(m);
    if (forward_.size() != (uint64_t{1} << m)) {
        throw DimensionError("permutation table needs 2^m entries");
    }
    inverse_.assign(forward_.size(), forward_.size());
    for (uint64_t x = 0; x < forward_.size(); x++) {
        uint64_t y = forward_[x];
        if (y >= forward_.size() || inverse_[y] != forward_.size()) {
            throw InvariantError("permutation table is not a bijection");
        }
        inverse_[y] = x;
    }
}

Permutation Permutation::identity(int m) {
    check_width(m);
    std::vector<uint64_t> t(uint64_t{1} << m);
    std::iota(t.begin(), t.end(), uint64_t{0});
    return Permutation(m, std::move(t));
}

Permutation xor_shift_permutation(int m, uint64_t s) {
    check_width(m);
    if (s >> m) {
        throw InvariantError("shift does not fit in m bits");
    }
    std::vector<uint64_t> t(uint64_t{1} << m);
    for (uint64_t x = 0; x < t.size(); x++) {
        t[x] = x ^ s;
    }
    return Permutation(m, std::move(t));
}

Permutation random_permutation(int m, uint64_t seed) {
    check_width(m);
    std::vector<uint64_t> t(uint64_t{1} << m);
    std::iota(t.begin(), t.end(), uint64_t{0});
    Rng rng(seed);
    for (uint64_t i = t.size() - 1; i > 0; i--) {
        std::swap(t[i], t[uniform_below(rng, i + 1)]);
    }
    return Permutation(m, std::move(t));
}

void write_permutation(std::ostream &out, const Permutation &f) {
    std::ostringstream ss;
    ss << "m=" << f.width() << '\n';
    for (uint64_t x = 0; x < f.size(); x++) {
        ss << format_bits(x, f.width()) << ' ' << format_bits(f(x), f.width()) << '\n';
    }
    out << ss.str();
}

Permutation read_permutation(std::istream &in) {
    std::string line;
    int m = -1;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream ss(line);
        std::string head;
        ss >> head;
        if (head.rfind("m=", 0) != 0) {
            throw InvariantError("permutation file must start with 'm=<int>'");
        }
        try {
            size_t used = 0;
            m = std::stoi(head.substr(2), &used);
            if (used != head.size() - 2) {
                throw std::invalid_argument(head);
            }
        } catch (const std::logic_error &) {
            throw InvariantError("malformed permutation header '" + head + "'");
        }
        break;
    }
    if (m < 0) {
        throw InvariantError("permutation file is empty");
    }
    check_width(m);
    uint64_t n = uint64_t{1} << m;
    std::vector<uint64_t> t(n, n);
    uint64_t rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string xs;
        std::string ys;
        if (!(ss >> xs)) {
            continue;
        }
        std::string extra;
        if (!(ss >> ys) || (ss >> extra) || xs.size() != static_cast<size_t>(m) ||
            ys.size() != static_cast<size_t>(m)) {
            throw InvariantError("permutation row must be two " + std::to_string(m) + "-bit strings: '" + line + "'");
        }
        uint64_t x;
        uint64_t y;
        try {
            x = parse_bits(xs);
            y = parse_bits(ys);
        } catch (const std::invalid_argument &) {
            throw InvariantError("permutation row is not binary: '" + line + "'");
        }
        if (t[x] != n) {
            throw InvariantError("permutation row repeats input " + xs);
        }
        t[x] = y;
        rows++;
    }
    if (rows != n) {
        throw InvariantError("permutation file needs exactly 2^m rows");
    }
    return Permutation(m, std::move(t));
}

CorruptionSet::CorruptionSet(int m, std::set<uint64_t> members) : m_(m), members_(std::move(members)) {
    check_width(m);
    if (!members_.empty() && *members_.rbegin() >> m) {
        throw InvariantError("corruption set member does not fit in m bits");
    }
}

double CorruptionSet::weight(const DistributionTable &table) const {
    if (table.width() != m_) {
        throw DimensionError("distribution width differs from corruption set width");
    }
    double w = 0;
    for (uint64_t q : members_) {
        w += table[q];
    }
    return w;
}

bool CorruptionSet::is_delta_close(const DistributionTable &table, double delta) const {
    return weight(table) < delta;
}

UnitaryOperator permutation_unitary(const Permutation &f) {
    return xor_write_unitary(f.width(), f.forward_table(), "x", "y");
}

UnitaryOperator inversion_oracle(const Permutation &f) {
    return xor_write_unitary(f.width(), f.inverse_table(), "q", "y");
}

UnitaryOperator corrupted_inversion_oracle(const Permutation &f, const CorruptionSet &s) {
    return xor_write_unitary(f.width(), corrupted_answers(f, s), "q", "y");
}

Circuit forward_gate(const Permutation &f, const std::string &input, const std::string &output) {
    Circuit c;
    c.table({input, output}, xor_write_table(f.width(), f.forward_table()));
    return c;
}

Circuit inversion_gate(const Permutation &f, const std::string &query, const std::string &answer) {
    Circuit c;
    c.table({query, answer}, xor_write_table(f.width(), f.inverse_table()));
    return c;
}

Circuit corrupted_inversion_gate(const Permutation &f, const CorruptionSet &s, const std::string &query,
                                 const std::string &answer) {
    Circuit c;
    c.table({query, answer}, xor_write_table(f.width(), corrupted_answers(f, s)));
    return c;
}

}  // namespace trapsim
