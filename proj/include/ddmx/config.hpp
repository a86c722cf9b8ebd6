#ifndef DDMX_CONFIG_HPP
#define DDMX_CONFIG_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ddmx/errors.hpp"
#include "ddmx/grid.hpp"

namespace ddmx {

inline const std::vector<std::string>& known_check_names() {
    static const std::vector<std::string> names{
        "energy_identity", "growth_bound",  "gn",        "scalar_inequalities",
        "lp_log_bound",    "contraction",   "bernstein"};
    return names;
}

/// Parsed run configuration (key=value text format, '#' comments).
struct RunConfig {
    int grid_n = 128;
    double domain_length = 16.0 * Grid::pi; // 2*pi * 8
    std::optional<double> cutoff_n;         // lattice units
    double dt = 2e-3;
    double t_end = 1.0;
    double cfl_safety = 0.9;
    int record_every = 5;
    std::string preset = "dipole";
    std::uint64_t seed = 7;
    std::string timeseries_path = "timeseries.csv";
    std::string snapshot_dir;              // empty: no snapshots
    std::vector<std::string> verify_suite = known_check_names();
    bool calibrate = false;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw config_error("config line " + std::to_string(line) + ": key '" + key +
                           "' expects a number, got '" + v + "'");
    }
}

inline long parse_int(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw config_error("config line " + std::to_string(line) + ": key '" + key +
                           "' expects an integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("config line " + std::to_string(line) + ": key '" + key +
                       "' expects true/false, got '" + v + "'");
}

inline std::string format_double(double x) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", x);
    return buf.data();
}

} // namespace detail

inline const std::vector<std::string>& known_presets() {
    static const std::vector<std::string> names{"dipole", "gaussian_pair", "band_limited_random",
                                                "maxwell_only", "heat_only"};
    return names;
}

inline void validate_config(const RunConfig& c) {
    if (c.grid_n < 8 || c.grid_n % 2 != 0)
        throw config_error("config: grid.n must be even and >= 8");
    if (!(c.domain_length > 0.0)) throw config_error("config: domain.length must be positive");
    if (c.cutoff_n) {
        if (!(*c.cutoff_n > 0.0)) throw config_error("config: cutoff.n must be positive");
        const double dealias = std::floor(c.grid_n / 3.0);
        if (*c.cutoff_n > dealias) {
            std::ostringstream os;
            os << "config: cutoff.n = " << *c.cutoff_n << " violates the de-aliasing bound "
               << "n <= floor(grid.n/3) = " << dealias;
            throw config_error(os.str());
        }
    }
    if (!(c.dt > 0.0)) throw config_error("config: time.dt must be positive");
    if (!(c.t_end > 0.0)) throw config_error("config: time.t_end must be positive");
    if (!(c.cfl_safety > 0.0) || c.cfl_safety > 1.0)
        throw config_error("config: time.cfl_safety must be in (0, 1]");
    if (c.record_every < 1) throw config_error("config: record_every must be >= 1");
    bool preset_ok = false;
    for (const auto& p : known_presets()) preset_ok = preset_ok || p == c.preset;
    if (!preset_ok) throw config_error("config: unknown init.preset '" + c.preset + "'");
    for (const auto& s : c.verify_suite) {
        bool ok = false;
        for (const auto& k : known_check_names()) ok = ok || k == s;
        if (!ok) throw config_error("config: unknown check '" + s + "' in verify.suite");
    }
}

/// Parse the key=value config text; unknown keys, type mismatches and
/// constraint violations are reported with the key name and line number.
inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line) +
                               ": expected key=value, got '" + detail::trim(raw) + "'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));

        if (key == "grid.n") c.grid_n = static_cast<int>(detail::parse_int(val, key, line));
        else if (key == "domain.length") c.domain_length = detail::parse_double(val, key, line);
        else if (key == "cutoff.n") c.cutoff_n = detail::parse_double(val, key, line);
        else if (key == "time.dt") c.dt = detail::parse_double(val, key, line);
        else if (key == "time.t_end") c.t_end = detail::parse_double(val, key, line);
        else if (key == "time.cfl_safety") c.cfl_safety = detail::parse_double(val, key, line);
        else if (key == "record_every")
            c.record_every = static_cast<int>(detail::parse_int(val, key, line));
        else if (key == "init.preset") {
            // accept both "name" and "band_limited_random(seed=7)"
            std::string name = val;
            const auto paren = val.find('(');
            if (paren != std::string::npos) {
                name = val.substr(0, paren);
                if (val.back() != ')')
                    throw config_error("config line " + std::to_string(line) +
                                       ": malformed preset '" + val + "'");
                std::string arg = val.substr(paren + 1, val.size() - paren - 2);
                const auto eq2 = arg.find('=');
                if (eq2 == std::string::npos || detail::trim(arg.substr(0, eq2)) != "seed")
                    throw config_error("config line " + std::to_string(line) +
                                       ": malformed preset argument '" + arg + "'");
                c.seed = static_cast<std::uint64_t>(
                    detail::parse_int(detail::trim(arg.substr(eq2 + 1)), key, line));
            }
            c.preset = name;
        } else if (key == "init.seed")
            c.seed = static_cast<std::uint64_t>(detail::parse_int(val, key, line));
        else if (key == "output.timeseries_path") c.timeseries_path = val;
        else if (key == "output.snapshot_dir") c.snapshot_dir = val;
        else if (key == "verify.suite") {
            c.verify_suite.clear();
            std::istringstream items(val);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = detail::trim(item);
                if (!item.empty()) c.verify_suite.push_back(item);
            }
        } else if (key == "verify.calibrate") c.calibrate = detail::parse_bool(val, key, line);
        else
            throw config_error("config line " + std::to_string(line) + ": unknown key '" + key +
                               "'");
    }
    validate_config(c);
    return c;
}

/// Canonical text form; parse(serialize(c)) reproduces c bit-identically.
inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "grid.n=" << c.grid_n << "\n";
    os << "domain.length=" << detail::format_double(c.domain_length) << "\n";
    if (c.cutoff_n) os << "cutoff.n=" << detail::format_double(*c.cutoff_n) << "\n";
    os << "time.dt=" << detail::format_double(c.dt) << "\n";
    os << "time.t_end=" << detail::format_double(c.t_end) << "\n";
    os << "time.cfl_safety=" << detail::format_double(c.cfl_safety) << "\n";
    os << "record_every=" << c.record_every << "\n";
    os << "init.preset=" << c.preset << "\n";
    os << "init.seed=" << c.seed << "\n";
    os << "output.timeseries_path=" << c.timeseries_path << "\n";
    os << "output.snapshot_dir=" << c.snapshot_dir << "\n";
    os << "verify.suite=";
    for (size_t i = 0; i < c.verify_suite.size(); ++i)
        os << (i ? "," : "") << c.verify_suite[i];
    os << "\n";
    os << "verify.calibrate=" << (c.calibrate ? "true" : "false") << "\n";
    return os.str();
}

} // namespace ddmx

#endif
