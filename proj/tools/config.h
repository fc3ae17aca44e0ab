#ifndef TRAPSIM_TOOLS_CONFIG_H
#define TRAPSIM_TOOLS_CONFIG_H

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace trapsim_cli {

/// Malformed or inconsistent configuration (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat INI-style configuration: `[section]` headers and `key = value` lines.
class Config {
   public:
    static Config load(const std::string &path);
    static Config parse(const std::string &text);

    /// Fails on sections or keys outside `allowed` (section -> keys).
    void restrict_to(const std::map<std::string, std::set<std::string>> &allowed) const;

    bool has(const std::string &section, const std::string &key) const;
    std::string text(const std::string &section, const std::string &key, const std::string &fallback) const;
    int64_t integer(const std::string &section, const std::string &key, int64_t fallback) const;
    double real(const std::string &section, const std::string &key, double fallback) const;
    std::optional<double> optional_real(const std::string &section, const std::string &key) const;

    /// Range values: "a, b, c" or "start:stop:step" (stop inclusive); empty text is the empty range.
    std::vector<double> real_range(const std::string &section, const std::string &key,
                                   const std::vector<double> &fallback) const;
    std::vector<int64_t> integer_range(const std::string &section, const std::string &key,
                                       const std::vector<int64_t> &fallback) const;

    void set(const std::string &section, const std::string &key, const std::string &value);
    /// FNV-1a over the sorted "section.key=value" lines, as 16 hex digits.
    std::string digest() const;

   private:
    const std::string *find(const std::string &section, const std::string &key) const;
    std::map<std::string, std::map<std::string, std::string>> values_;
};

int64_t parse_integer(const std::string &text, const std::string &what);
double parse_real(const std::string &text, const std::string &what);
std::vector<double> parse_range(const std::string &text, const std::string &what);

}  // namespace trapsim_cli

#endif
