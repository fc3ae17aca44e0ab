#include "config.h"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trapsim_cli {

namespace {

// Top-level keys (outside any section) land in this section.
const std::string kTopLevel = "";

Config from_stream(std::istream &in, const std::string &origin) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    Config c;
    for (const auto &[name, node] : tree) {
        if (node.empty()) {
            c.set(kTopLevel, name, node.data());
            continue;
        }
        for (const auto &[key, leaf] : node) {
            c.set(name, key, leaf.data());
        }
    }
    return c;
}

std::string full_name(const std::string &section, const std::string &key) {
    return section.empty() ? key : section + "." + key;
}

}  // namespace

Config Config::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    return from_stream(in, path);
}

Config Config::parse(const std::string &text) {
    std::istringstream in(text);
    return from_stream(in, "config");
}

void Config::restrict_to(const std::map<std::string, std::set<std::string>> &allowed) const {
    for (const auto &[section, keys] : values_) {
        auto it = allowed.find(section);
        if (it == allowed.end()) {
            throw ConfigError(section.empty() ? "keys outside a section are not allowed"
                                              : "unknown config section [" + section + "]");
        }
        for (const auto &[key, value] : keys) {
            if (!it->second.count(key)) {
                throw ConfigError("unknown config key " + full_name(section, key));
            }
        }
    }
}

const std::string *Config::find(const std::string &section, const std::string &key) const {
    auto s = values_.find(section);
    if (s == values_.end()) {
        return nullptr;
    }
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

bool Config::has(const std::string &section, const std::string &key) const {
    return find(section, key) != nullptr;
}

std::string Config::text(const std::string &section, const std::string &key, const std::string &fallback) const {
    const std::string *v = find(section, key);
    return v ? *v : fallback;
}

int64_t Config::integer(const std::string &section, const std::string &key, int64_t fallback) const {
    const std::string *v = find(section, key);
    return v ? parse_integer(*v, full_name(section, key)) : fallback;
}

double Config::real(const std::string &section, const std::string &key, double fallback) const {
    const std::string *v = find(section, key);
    return v ? parse_real(*v, full_name(section, key)) : fallback;
}

std::optional<double> Config::optional_real(const std::string &section, const std::string &key) const {
    const std::string *v = find(section, key);
    if (!v) {
        return std::nullopt;
    }
    return parse_real(*v, full_name(section, key));
}

std::vector<double> Config::real_range(const std::string &section, const std::string &key,
                                       const std::vector<double> &fallback) const {
    const std::string *v = find(section, key);
    return v ? parse_range(*v, full_name(section, key)) : fallback;
}

std::vector<int64_t> Config::integer_range(const std::string &section, const std::string &key,
                                           const std::vector<int64_t> &fallback) const {
    const std::string *v = find(section, key);
    if (!v) {
        return fallback;
    }
    std::vector<int64_t> out;
    for (double d : parse_range(*v, full_name(section, key))) {
        if (d != std::floor(d)) {
            throw ConfigError(full_name(section, key) + " must hold integers");
        }
        out.push_back(static_cast<int64_t>(d));
    }
    return out;
}

void Config::set(const std::string &section, const std::string &key, const std::string &value) {
    values_[section][key] = value;
}

std::string Config::digest() const {
    uint64_t h = 14695981039346656037ull;
    for (const auto &[section, keys] : values_) {
        for (const auto &[key, value] : keys) {
            for (char ch : full_name(section, key) + "=" + value + "\n") {
                h ^= static_cast<unsigned char>(ch);
                h *= 1099511628211ull;
            }
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int64_t parse_integer(const std::string &text, const std::string &what) {
    std::string t = boost::algorithm::trim_copy(text);
    try {
        size_t used = 0;
        int64_t v = std::stoll(t, &used, 0);
        if (used == t.size()) {
            return v;
        }
    } catch (const std::logic_error &) {
    }
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
}

double parse_real(const std::string &text, const std::string &what) {
    std::string t = boost::algorithm::trim_copy(text);
    // Exact fractions such as 1/3 are accepted.
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        double num = parse_real(t.substr(0, slash), what);
        double den = parse_real(t.substr(slash + 1), what);
        if (den == 0) {
            throw ConfigError(what + ": zero denominator");
        }
        return num / den;
    }
    try {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used == t.size() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::logic_error &) {
    }
    throw ConfigError(what + ": expected a number, got '" + text + "'");
}

std::vector<double> parse_range(const std::string &text, const std::string &what) {
    std::string t = boost::algorithm::trim_copy(text);
    std::vector<double> out;
    if (t.empty()) {
        return out;
    }
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        boost::algorithm::split(parts, t, boost::is_any_of(":"));
        if (parts.size() != 3) {
            throw ConfigError(what + ": range must be start:stop:step");
        }
        double start = parse_real(parts[0], what);
        double stop = parse_real(parts[1], what);
        double step = parse_real(parts[2], what);
        if (step <= 0) {
            throw ConfigError(what + ": range step must be positive");
        }
        for (int64_t i = 0;; i++) {
            double v = start + static_cast<double>(i) * step;
            if (v > stop + 1e-9 * step) {
                break;
            }
            if (i >= 100000) {
                throw ConfigError(what + ": range has too many points");
            }
            out.push_back(v);
        }
        return out;
    }
    std::vector<std::string> parts;
    boost::algorithm::split(parts, t, boost::is_any_of(","));
    for (const auto &p : parts) {
        out.push_back(parse_real(p, what));
    }
    return out;
}

}  // namespace trapsim_cli
