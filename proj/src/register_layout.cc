#include "trapsim/register_layout.h"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "trapsim/errors.h"

namespace trapsim {

int max_qubits() {
    static const int cap = [] {
        if (const char *env = std::getenv("TRAPSIM_MAX_QUBITS")) {
            char *end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0 && v <= 30) {
                return static_cast<int>(v);
            }
        }
        return kDefaultMaxQubits;
    }();
    return cap;
}

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
    std::set<std::string> seen;
    for (const auto &r : registers_) {
        if (r.name.empty()) {
            throw LayoutError("register name must be non-empty");
        }
        if (r.qubits <= 0) {
            throw LayoutError("register '" + r.name + "' must have at least one qubit");
        }
        if (!seen.insert(r.name).second) {
            throw LayoutError("duplicate register name '" + r.name + "'");
        }
        num_qubits_ += r.qubits;
    }
    if (num_qubits_ > 62) {
        throw ResourceCapError("layout exceeds 62 qubits");
    }
}

RegisterLayout RegisterLayout::single(const std::string &name, int qubits) {
    return RegisterLayout({{name, qubits}});
}

bool RegisterLayout::contains(const std::string &name) const {
    return std::any_of(registers_.begin(), registers_.end(), [&](const Register &r) { return r.name == name; });
}

const Register &RegisterLayout::at(const std::string &name) const {
    for (const auto &r : registers_) {
        if (r.name == name) {
            return r;
        }
    }
    throw LayoutError("unknown register '" + name + "'");
}

int RegisterLayout::offset(const std::string &name) const {
    int pos = 0;
    for (const auto &r : registers_) {
        if (r.name == name) {
            return pos;
        }
        pos += r.qubits;
    }
    throw LayoutError("unknown register '" + name + "'");
}

std::vector<int> RegisterLayout::qubits_of(const std::vector<std::string> &names) const {
    std::vector<int> out;
    std::set<std::string> seen;
    for (const auto &n : names) {
        if (!seen.insert(n).second) {
            throw LayoutError("register '" + n + "' listed twice");
        }
        int start = offset(n);
        for (int k = 0; k < at(n).qubits; k++) {
            out.push_back(start + k);
        }
    }
    return out;
}

std::vector<std::string> RegisterLayout::names() const {
    std::vector<std::string> out;
    for (const auto &r : registers_) {
        out.push_back(r.name);
    }
    return out;
}

uint64_t RegisterLayout::value_of(uint64_t index, const std::string &name) const {
    int start = offset(name);
    int len = at(name).qubits;
    int shift = num_qubits_ - start - len;
    return (index >> shift) & ((uint64_t{1} << len) - 1);
}

uint64_t RegisterLayout::index_of(const std::vector<std::pair<std::string, uint64_t>> &values) const {
    uint64_t index = 0;
    for (const auto &[name, v] : values) {
        int start = offset(name);
        int len = at(name).qubits;
        if (len < 64 && v >> len) {
            throw LayoutError("value does not fit in register '" + name + "'");
        }
        index |= v << (num_qubits_ - start - len);
    }
    return index;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout &other) const {
    auto regs = registers_;
    regs.insert(regs.end(), other.registers_.begin(), other.registers_.end());
    return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::subset(const std::vector<std::string> &names) const {
    std::vector<Register> regs;
    for (const auto &n : names) {
        regs.push_back(at(n));
    }
    return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::without(const std::vector<std::string> &names) const {
    for (const auto &n : names) {
        at(n);
    }
    std::vector<Register> regs;
    for (const auto &r : registers_) {
        if (std::find(names.begin(), names.end(), r.name) == names.end()) {
            regs.push_back(r);
        }
    }
    return RegisterLayout(std::move(regs));
}

uint64_t gather_bits(uint64_t index, int num_qubits, const std::vector<int> &positions) {
    uint64_t v = 0;
    for (int p : positions) {
        v = (v << 1) | ((index >> (num_qubits - 1 - p)) & 1);
    }
    return v;
}

uint64_t scatter_bits(uint64_t value, int num_qubits, const std::vector<int> &positions) {
    uint64_t idx = 0;
    int k = static_cast<int>(positions.size());
    for (int b = 0; b < k; b++) {
        if ((value >> (k - 1 - b)) & 1) {
            idx |= uint64_t{1} << (num_qubits - 1 - positions[b]);
        }
    }
    return idx;
}

uint64_t parse_bits(const std::string &text) {
    if (text.empty() || text.size() > 63) {
        throw std::invalid_argument("bad binary literal '" + text + "'");
    }
    uint64_t v = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bad binary literal '" + text + "'");
        }
        v = (v << 1) | static_cast<uint64_t>(c - '0');
    }
    return v;
}

std::string format_bits(uint64_t value, int width) {
    std::string s(static_cast<size_t>(width), '0');
    for (int b = 0; b < width; b++) {
        if (bit_at(value, width, b)) {
            s[static_cast<size_t>(b)] = '1';
        }
    }
    return s;
}

}  // namespace trapsim
