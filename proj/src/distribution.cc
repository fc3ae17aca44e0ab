#include "trapsim/distribution.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "trapsim/errors.h"
#include "trapsim/register_layout.h"

namespace trapsim {

DistributionTable::DistributionTable(int m, std::vector<double> probabilities, double smoothness)
    : m_(m), p_(std::move(probabilities)), c_(smoothness) {
    if (m < 1 || m > 16) {
        throw ResourceCapError("distribution width must be in [1, 16]");
    }
    if (p_.size() != (uint64_t{1} << m)) {
        throw DimensionError("distribution table needs 2^m entries");
    }
    if (!(c_ >= 1.0)) {
        throw InvariantError("smoothness constant must be at least 1");
    }
    double total = 0;
    for (double p : p_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InvariantError("distribution entries must be finite and non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvariantError("distribution does not sum to 1");
    }
}

DistributionTable DistributionTable::uniform(int m, double smoothness) {
    std::vector<double> p(uint64_t{1} << m, std::ldexp(1.0, -m));
    return DistributionTable(m, std::move(p), smoothness);
}

double DistributionTable::d_min() const {
    return *std::min_element(p_.begin(), p_.end());
}

double DistributionTable::d_max() const {
    return *std::max_element(p_.begin(), p_.end());
}

bool DistributionTable::is_smooth() const {
    double n = static_cast<double>(p_.size());
    double lo = n * d_min();
    return lo > 0 && lo >= 1.0 / c_ && n * d_max() <= c_;
}

bool DistributionTable::is_uniform(double tol) const {
    double u = 1.0 / static_cast<double>(p_.size());
    return std::all_of(p_.begin(), p_.end(), [&](double p) { return std::abs(p - u) <= tol; });
}

DistributionTable read_distribution(std::istream &in, double smoothness) {
    std::map<uint64_t, double> entries;
    int width = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        std::string key;
        std::string value;
        if (!(ss >> key)) {
            continue;
        }
        std::string extra;
        if (!(ss >> value) || (ss >> extra)) {
            throw InvariantError("distribution line " + std::to_string(line_no) + ": expected 'q d_q'");
        }
        uint64_t q;
        bool binary = key.find_first_not_of("01") == std::string::npos && key.size() > 1;
        try {
            if (binary) {
                q = parse_bits(key);
                width = std::max(width, static_cast<int>(key.size()));
            } else {
                size_t used = 0;
                q = std::stoull(key, &used);
                if (used != key.size()) {
                    throw std::invalid_argument(key);
                }
            }
            size_t used = 0;
            double p = std::stod(value, &used);
            if (used != value.size()) {
                throw std::invalid_argument(value);
            }
            if (!entries.emplace(q, p).second) {
                throw InvariantError("distribution line " + std::to_string(line_no) + ": duplicate entry");
            }
        } catch (const std::logic_error &) {
            throw InvariantError("distribution line " + std::to_string(line_no) + ": malformed number");
        }
    }
    if (entries.empty()) {
        throw InvariantError("distribution file has no entries");
    }
    uint64_t largest = entries.rbegin()->first;
    int m = std::max(width, 1);
    while ((uint64_t{1} << m) <= largest) {
        m++;
    }
    // A table listing only some entries leaves the rest at 0 (never smooth, but valid).
    while ((uint64_t{1} << m) < entries.size()) {
        m++;
    }
    if (m > 16) {
        throw ResourceCapError("distribution width must be in [1, 16]");
    }
    std::vector<double> p(uint64_t{1} << m, 0.0);
    for (const auto &[q, v] : entries) {
        p[q] = v;
    }
    return DistributionTable(m, std::move(p), smoothness);
}

void write_distribution(std::ostream &out, const DistributionTable &d) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    for (uint64_t q = 0; q < d.size(); q++) {
        ss << format_bits(q, d.width()) << ' ' << d[q] << '\n';
    }
    out << ss.str();
}

}  // namespace trapsim
