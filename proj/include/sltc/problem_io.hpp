#pragma once

// Problem files (.slp) and right-hand-side files (.rhs), plus the CSV writers
// used by the command line tool.
//
// A problem file is INI-style: `[section]` headers, `key = value` pairs, `#`
// comments, bracketed lists.  Example:
//
//   [geometry]
//   a = 3.141592653589793
//   b = 3.141592653589793
//   [boundary]
//   alpha = 0
//   beta = 3.141592653589793
//   [potential]
//   kind = piecewise_constant
//   breaks = [-1, 1]
//   values = [0, 2, 0]
//   [mu]
//   slope = 0
//   offset = 0
//   poles = [1]
//   residue_squares = [1]
//   [nu]
//   slope = 0
//   offset = 1
//   poles = [0]
//   residue_squares = [1]
//   [scan]
//   window = [0, 12]
//   [output]
//   directory = out
//
// Unknown sections or keys are rejected, as is any value violating a model
// constraint; messages carry the file, the field path, and the constraint.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sltc/errors.hpp"
#include "sltc/problem.hpp"
#include "sltc/spectrum.hpp"

namespace sltc {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace detail

class IniFile {
public:
    static IniFile parse(std::istream& in, const std::string& origin) {
        IniFile f;
        f.origin_ = origin;
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) +
                                      ": malformed section header '" + line + "'");
                section = detail::trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
                f.sections_[section];
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": key outside of any section");
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            f.sections_[section][key] = value;
        }
        return f;
    }

    static IniFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError(path + ": cannot open file");
        return parse(in, path);
    }

    const std::string& origin() const { return origin_; }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    // strict-mode guards used by the loaders
    void require_known_sections(const std::vector<std::string>& known) const {
        for (const auto& [name, kv] : sections_) {
            bool ok = false;
            for (const std::string& k : known) ok = ok || k == name;
            if (!ok) throw ConfigError(origin_ + ": unknown section [" + name + "]");
        }
    }
    void require_known_keys(const std::string& section, const std::vector<std::string>& known) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return;
        for (const auto& [key, val] : s->second) {
            bool ok = false;
            for (const std::string& k : known) ok = ok || k == key;
            if (!ok)
                throw ConfigError(origin_ + ": unknown key '" + key + "' in [" + section + "]");
        }
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        auto v = get(section, key);
        return v ? parse_double(section, key, *v) : fallback;
    }
    std::optional<double> get_double_opt(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        if (!v) return std::nullopt;
        return parse_double(section, key, *v);
    }
    std::vector<double> get_list(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        if (!v) return {};
        return parse_list(section, key, *v);
    }

    double parse_double(const std::string& section, const std::string& key,
                        const std::string& text) const {
        try {
            std::size_t used = 0;
            double d = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("");
            if (!std::isfinite(d)) throw std::invalid_argument("");
            return d;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": [" + section + "] " + key + " = '" + text +
                              "': not a finite number");
        }
    }

    std::vector<double> parse_list(const std::string& section, const std::string& key,
                                   const std::string& text) const {
        std::string t = detail::trim(text);
        if (t.size() < 2 || t.front() != '[' || t.back() != ']')
            throw ConfigError(origin_ + ": [" + section + "] " + key +
                              ": expected a bracketed list like [1, 2]");
        t = t.substr(1, t.size() - 2);
        std::vector<double> out;
        std::string item;
        std::stringstream ss(t);
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty())
                throw ConfigError(origin_ + ": [" + section + "] " + key + ": empty list entry");
            out.push_back(parse_double(section, key, item));
        }
        return out;
    }

private:
    std::string origin_;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct OutputConfig {
    std::string directory = ".";
    int precision = 17;
};

struct ProblemConfig {
    ProblemSpec prob;
    ScanOptions scan;
    bool window_given = false;
    OutputConfig output;
};

namespace detail {

inline RationalCoupling load_coupling(const IniFile& f, const std::string& section,
                                      CouplingKind kind) {
    f.require_known_keys(section, {"slope", "offset", "poles", "residue_squares"});
    double slope = f.get_double(section, "slope", 0.0);
    double offset = f.get_double(section, "offset", 0.0);
    std::vector<double> poles = f.get_list(section, "poles");
    std::vector<double> rs = f.get_list(section, "residue_squares");
    const std::string path = f.origin() + ": [" + section + "] ";
    if (slope < 0.0)
        throw ConfigError(path + "slope = " + std::to_string(slope) + ": must be >= 0");
    if (poles.size() != rs.size())
        throw ConfigError(path + "poles and residue_squares must have equal length");
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (!(rs[i] > 0.0))
            throw ConfigError(path + "residue_squares[" + std::to_string(i) +
                              "] = " + std::to_string(rs[i]) + ": every residue square must be positive");
    for (std::size_t i = 0; i + 1 < poles.size(); ++i)
        if (!(poles[i] < poles[i + 1]))
            throw ConfigError(path + "poles must be strictly increasing");
    return kind == CouplingKind::Mu ? RationalCoupling::mu(slope, offset, poles, rs)
                                    : RationalCoupling::nu(slope, offset, poles, rs);
}

inline Potential load_potential(const IniFile& f) {
    if (!f.has_section("potential")) return Potential::zero();
    f.require_known_keys("potential", {"kind", "breaks", "values", "grid"});
    std::string kind = f.get("potential", "kind").value_or("zero");
    const std::string path = f.origin() + ": [potential] ";
    if (kind == "zero") return Potential::zero();
    if (kind == "piecewise_constant") {
        std::vector<double> breaks = f.get_list("potential", "breaks");
        std::vector<double> values = f.get_list("potential", "values");
        if (values.size() != breaks.size() + 1)
            throw ConfigError(path + "values must have exactly one more entry than breaks");
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            if (!(breaks[i] < breaks[i + 1]))
                throw ConfigError(path + "breaks must be strictly increasing");
        return Potential::piecewise_constant(breaks, values);
    }
    if (kind == "sampled") {
        std::vector<double> grid = f.get_list("potential", "grid");
        std::vector<double> values = f.get_list("potential", "values");
        if (grid.size() != values.size() || grid.size() < 2)
            throw ConfigError(path + "grid and values must have equal length >= 2");
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            if (!(grid[i] < grid[i + 1]))
                throw ConfigError(path + "grid must be strictly increasing");
        return Potential::sampled(grid, values);
    }
    throw ConfigError(path + "kind = '" + kind +
                      "': expected zero, piecewise_constant, or sampled");
}

}  // namespace detail

inline ProblemConfig load_problem(const std::string& path) {
    IniFile f = IniFile::load(path);
    f.require_known_sections({"geometry", "boundary", "potential", "mu", "nu", "scan", "output"});
    f.require_known_keys("geometry", {"a", "b"});
    f.require_known_keys("boundary", {"alpha", "beta"});
    f.require_known_keys("scan", {"window", "grid_points_per_unit", "refine_tol",
                                  "pole_exclusion_radius"});
    f.require_known_keys("output", {"directory", "precision"});

    ProblemConfig cfg;
    cfg.prob.a = f.get_double("geometry", "a", cfg.prob.a);
    cfg.prob.b = f.get_double("geometry", "b", cfg.prob.b);
    cfg.prob.alpha = f.get_double("boundary", "alpha", cfg.prob.alpha);
    cfg.prob.beta = f.get_double("boundary", "beta", cfg.prob.beta);
    cfg.prob.q = detail::load_potential(f);
    if (f.has_section("mu")) cfg.prob.mu = detail::load_coupling(f, "mu", CouplingKind::Mu);
    if (f.has_section("nu")) cfg.prob.nu = detail::load_coupling(f, "nu", CouplingKind::Nu);
    try {
        cfg.prob.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }

    if (auto w = f.get("scan", "window")) {
        std::vector<double> win = f.parse_list("scan", "window", *w);
        if (win.size() != 2 || !(win[0] < win[1]))
            throw ConfigError(path + ": [scan] window: expected [lo, hi] with lo < hi");
        cfg.scan.window_lo = win[0];
        cfg.scan.window_hi = win[1];
        cfg.window_given = true;
    }
    cfg.scan.grid_points_per_unit =
        f.get_double("scan", "grid_points_per_unit", cfg.scan.grid_points_per_unit);
    if (cfg.scan.grid_points_per_unit <= 0.0)
        throw ConfigError(path + ": [scan] grid_points_per_unit: must be positive");
    cfg.scan.refine_tol = f.get_double("scan", "refine_tol", cfg.scan.refine_tol);
    if (cfg.scan.refine_tol <= 0.0)
        throw ConfigError(path + ": [scan] refine_tol: must be positive");
    cfg.scan.pole_exclusion_radius =
        f.get_double("scan", "pole_exclusion_radius", cfg.scan.pole_exclusion_radius);
    if (cfg.scan.pole_exclusion_radius <= 0.0)
        throw ConfigError(path + ": [scan] pole_exclusion_radius: must be positive");

    if (auto d = f.get("output", "directory")) cfg.output.directory = *d;
    double prec = f.get_double("output", "precision", cfg.output.precision);
    if (prec < 1 || prec > 17 || prec != std::floor(prec))
        throw ConfigError(path + ": [output] precision: must be an integer in [1, 17]");
    cfg.output.precision = static_cast<int>(prec);
    return cfg;
}

// Right-hand-side data for the resolvent subcommand.
struct RhsConfig {
    bool h_zero = true;
    std::vector<double> grid, values;  // sampled h, linear interpolation
    std::vector<double> v1, v2;        // block data
};

inline RhsConfig load_rhs(const std::string& path) {
    IniFile f = IniFile::load(path);
    f.require_known_sections({"h", "h1", "h2"});
    f.require_known_keys("h", {"kind", "grid", "values"});
    f.require_known_keys("h1", {"values"});
    f.require_known_keys("h2", {"values"});
    RhsConfig r;
    if (f.has_section("h")) {
        std::string kind = f.get("h", "kind").value_or("zero");
        if (kind == "sampled") {
            r.grid = f.get_list("h", "grid");
            r.values = f.get_list("h", "values");
            if (r.grid.size() != r.values.size() || r.grid.size() < 2)
                throw ConfigError(path + ": [h] grid and values must have equal length >= 2");
            for (std::size_t i = 0; i + 1 < r.grid.size(); ++i)
                if (!(r.grid[i] < r.grid[i + 1]))
                    throw ConfigError(path + ": [h] grid must be strictly increasing");
            r.h_zero = false;
        } else if (kind != "zero") {
            throw ConfigError(path + ": [h] kind = '" + kind + "': expected zero or sampled");
        }
    }
    r.v1 = f.get_list("h1", "values");
    r.v2 = f.get_list("h2", "values");
    return r;
}

// ── CSV output ───────────────────────────────────────────────────────────────

namespace detail {

inline void csv_number(std::ostream& os, double x, int precision) {
    std::ostringstream tmp;
    tmp.precision(precision);
    tmp << x;
    os << tmp.str();
}

}  // namespace detail

inline void write_spectrum_csv(std::ostream& os, const std::vector<EigenvalueRecord>& recs,
                               int precision) {
    os << "lambda,multiplicity,classification,residual\n";
    for (const EigenvalueRecord& r : recs) {
        detail::csv_number(os, r.lambda, precision);
        os << ',' << r.multiplicity << ',' << to_string(r.classification) << ',';
        detail::csv_number(os, r.residual, 6);
        os << '\n';
    }
}

inline void write_greens_csv(std::ostream& os, const std::vector<double>& xs,
                             const std::vector<double>& ts,
                             const std::vector<std::vector<Complex>>& g, int precision) {
    os << "x,t,re_g,im_g\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) {
            detail::csv_number(os, xs[i], precision);
            os << ',';
            detail::csv_number(os, ts[j], precision);
            os << ',';
            detail::csv_number(os, g[i][j].real(), precision);
            os << ',';
            detail::csv_number(os, g[i][j].imag(), precision);
            os << '\n';
        }
}

inline void write_function_csv(std::ostream& os, const std::vector<double>& xs,
                               const std::vector<Complex>& f, int precision) {
    os << "x,re_f,im_f\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        detail::csv_number(os, xs[i], precision);
        os << ',';
        detail::csv_number(os, f[i].real(), precision);
        os << ',';
        detail::csv_number(os, f[i].imag(), precision);
        os << '\n';
    }
}

inline void write_blocks_csv(std::ostream& os, const std::vector<Complex>& v1,
                             const std::vector<Complex>& v2, int precision) {
    os << "component,index,re,im\n";
    for (std::size_t i = 0; i < v1.size(); ++i) {
        os << "mu," << i << ',';
        detail::csv_number(os, v1[i].real(), precision);
        os << ',';
        detail::csv_number(os, v1[i].imag(), precision);
        os << '\n';
    }
    for (std::size_t j = 0; j < v2.size(); ++j) {
        os << "nu," << j << ',';
        detail::csv_number(os, v2[j].real(), precision);
        os << ',';
        detail::csv_number(os, v2[j].imag(), precision);
        os << '\n';
    }
}

}  // namespace sltc
