#ifndef TRAPSIM_DISTRIBUTION_H
#define TRAPSIM_DISTRIBUTION_H

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace trapsim {

/// Probabilities d_q over m-bit strings with a smoothness constant c.
class DistributionTable {
   public:
    /// Throws InvariantError unless the entries are non-negative and sum to 1 within 1e-12.
    DistributionTable(int m, std::vector<double> probabilities, double smoothness = 8.0);

    static DistributionTable uniform(int m, double smoothness = 8.0);

    int width() const {
        return m_;
    }
    uint64_t size() const {
        return p_.size();
    }
    double operator[](uint64_t q) const {
        return p_[q];
    }
    const std::vector<double> &probabilities() const {
        return p_;
    }
    double d_min() const;
    double d_max() const;
    double smoothness() const {
        return c_;
    }
    /// 2^m d_min >= 1/c and 2^m d_max <= c. A zero entry is never smooth.
    bool is_smooth() const;
    bool is_uniform(double tol = 1e-12) const;

   private:
    int m_;
    std::vector<double> p_;
    double c_;
};

/// Text form: one line "q d_q" per entry, q in binary (width m) or decimal.
/// Lines starting with '#' and blank lines are ignored.
DistributionTable read_distribution(std::istream &in, double smoothness = 8.0);
void write_distribution(std::ostream &out, const DistributionTable &d);

}  // namespace trapsim

#endif
