#pragma once

// Run configuration: INI-style text with [section] headers and key = value
// lines. Every key has a default; unknown keys are errors. serialize() emits
// every key in a fixed order so parse(serialize(c)) == c and the text can be
// hashed to identify a run.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/format.hpp"

namespace qreg {

class ConfigError : public std::runtime_error {
public:
    // Syntax error at a position (1-based line and column).
    ConfigError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("config:" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    // Semantic error for a named key.
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& key() const { return key_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
    std::string key_;
};

struct StateEntry {
    std::string label;
    double re = 0.0;
    double im = 0.0;
    bool operator==(const StateEntry&) const = default;
};

struct RunConfig {
    struct Geometry {
        long long l1 = 4, l2 = 1, l3 = 1;
        double d = 1.0;
        double delta = 0.0;
        std::uint64_t seed = 1;
        bool operator==(const Geometry&) const = default;
    } geometry;

    struct Bath {
        double v = 1.0;
        double T = 0.0;
        double omega0 = 0.0;
        int dimensionality = 1;
        bool operator==(const Bath&) const = default;
    } bath;

    struct Coupling {
        std::string form = "power";  // power | gaussian
        double A = 0.05;
        double p = 1.0;
        double cutoff = 1.0;
        double center_k = 1.0;  // gaussian peak position (wavenumber)
        double width_k = 0.05;  // gaussian standard deviation (wavenumber)
        bool operator==(const Coupling&) const = default;
    } coupling;

    struct Grid {
        long long modes = 2000;
        double omega_max = 10.0;
        long long directions = 16;
        bool operator==(const Grid&) const = default;
    } grid;

    struct State {
        std::string preset = "cat";  // cat | single-flip | entries | file
        std::vector<StateEntry> entries;
        std::string file;
        bool operator==(const State&) const = default;
    } state;

    struct Run {
        double t0 = 0.0;
        double t1 = 10.0;
        long long steps = 100;
        std::string pairs;  // "i:j,i:j" label pairs reported by simulate
        long long m = 1;
        std::string code = "adjacent";  // adjacent | modulated
        double kbar = 0.0;              // 0: taken from the bath
        long long m_max = 16;
        double eps_tol = 0.05;
        double delta_min = 0.0;
        double delta_max = 1.0;
        long long delta_steps = 10;
        long long samples = 1000;
        std::string label_i;
        std::string label_j;
        double k = 1.0;
        std::string suite = "default";  // default | quick
        bool operator==(const Run&) const = default;
    } run;

    struct Output {
        std::string dir = ".";
        long long precision = 12;
        bool positions = false;
        bool modes = false;
        bool operator==(const Output&) const = default;
    } output;

    std::size_t register_size() const {
        return static_cast<std::size_t>(geometry.l1 * geometry.l2 * geometry.l3);
    }

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

struct ConfigField {
    std::string section;
    std::string key;
    bool repeatable;
    std::function<void(RunConfig&, std::string_view, const std::string& name)> set;
    std::function<std::vector<std::string>(const RunConfig&)> get;
};

inline double need_double(std::string_view v, const std::string& name) {
    if (auto x = parse_double(v)) return *x;
    throw ConfigError(name, "expected a number, got '" + std::string(v) + "'");
}

inline long long need_integer(std::string_view v, const std::string& name) {
    if (auto x = parse_integer(v)) return *x;
    throw ConfigError(name, "expected an integer, got '" + std::string(v) + "'");
}

inline bool need_bool(std::string_view v, const std::string& name) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(name, "expected true or false, got '" + std::string(v) + "'");
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

template <typename T>
auto num_field(std::string section, std::string key, T RunConfig::*block, double T::*member) {
    return ConfigField{section, key, false,
                       [block, member](RunConfig& c, std::string_view v, const std::string& n) {
                           (c.*block).*member = need_double(v, n);
                       },
                       [block, member](const RunConfig& c) {
                           return std::vector<std::string>{format_exact((c.*block).*member)};
                       }};
}

template <typename T>
auto int_field(std::string section, std::string key, T RunConfig::*block, long long T::*member) {
    return ConfigField{section, key, false,
                       [block, member](RunConfig& c, std::string_view v, const std::string& n) {
                           (c.*block).*member = need_integer(v, n);
                       },
                       [block, member](const RunConfig& c) {
                           return std::vector<std::string>{std::to_string((c.*block).*member)};
                       }};
}

template <typename T>
auto str_field(std::string section, std::string key, T RunConfig::*block, std::string T::*member) {
    return ConfigField{section, key, false,
                       [block, member](RunConfig& c, std::string_view v, const std::string&) {
                           (c.*block).*member = std::string(v);
                       },
                       [block, member](const RunConfig& c) {
                           return std::vector<std::string>{(c.*block).*member};
                       }};
}

template <typename T>
auto bool_field(std::string section, std::string key, T RunConfig::*block, bool T::*member) {
    return ConfigField{section, key, false,
                       [block, member](RunConfig& c, std::string_view v, const std::string& n) {
                           (c.*block).*member = need_bool(v, n);
                       },
                       [block, member](const RunConfig& c) {
                           return std::vector<std::string>{(c.*block).*member ? "true" : "false"};
                       }};
}

inline const std::vector<ConfigField>& config_schema() {
    using C = RunConfig;
    static const std::vector<ConfigField> schema = [] {
        std::vector<ConfigField> f;
        f.push_back({"geometry", "dims", false,
                     [](C& c, std::string_view v, const std::string& n) {
                         const auto parts = split_ws(v);
                         if (parts.empty() || parts.size() > 3)
                             throw ConfigError(n, "expected 1 to 3 integers");
                         long long d[3] = {1, 1, 1};
                         for (std::size_t i = 0; i < parts.size(); ++i) d[i] = need_integer(parts[i], n);
                         c.geometry.l1 = d[0];
                         c.geometry.l2 = d[1];
                         c.geometry.l3 = d[2];
                     },
                     [](const C& c) {
                         return std::vector<std::string>{std::to_string(c.geometry.l1) + " " +
                                                         std::to_string(c.geometry.l2) + " " +
                                                         std::to_string(c.geometry.l3)};
                     }});
        f.push_back(num_field("geometry", "d", &C::geometry, &C::Geometry::d));
        f.push_back(num_field("geometry", "delta", &C::geometry, &C::Geometry::delta));
        f.push_back({"geometry", "seed", false,
                     [](C& c, std::string_view v, const std::string& n) {
                         std::uint64_t s = 0;
                         const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
                         if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
                             throw ConfigError(n, "expected a non-negative integer, got '" + std::string(v) + "'");
                         c.geometry.seed = s;
                     },
                     [](const C& c) { return std::vector<std::string>{std::to_string(c.geometry.seed)}; }});

        f.push_back(num_field("bath", "v", &C::bath, &C::Bath::v));
        f.push_back(num_field("bath", "T", &C::bath, &C::Bath::T));
        f.push_back(num_field("bath", "omega0", &C::bath, &C::Bath::omega0));
        f.push_back({"bath", "dimensionality", false,
                     [](C& c, std::string_view v, const std::string& n) {
                         c.bath.dimensionality = static_cast<int>(need_integer(v, n));
                     },
                     [](const C& c) { return std::vector<std::string>{std::to_string(c.bath.dimensionality)}; }});

        f.push_back(str_field("coupling", "form", &C::coupling, &C::Coupling::form));
        f.push_back(num_field("coupling", "A", &C::coupling, &C::Coupling::A));
        f.push_back(num_field("coupling", "p", &C::coupling, &C::Coupling::p));
        f.push_back(num_field("coupling", "cutoff", &C::coupling, &C::Coupling::cutoff));
        f.push_back(num_field("coupling", "center_k", &C::coupling, &C::Coupling::center_k));
        f.push_back(num_field("coupling", "width_k", &C::coupling, &C::Coupling::width_k));

        f.push_back(int_field("grid", "modes", &C::grid, &C::Grid::modes));
        f.push_back(num_field("grid", "omega_max", &C::grid, &C::Grid::omega_max));
        f.push_back(int_field("grid", "directions", &C::grid, &C::Grid::directions));

        f.push_back(str_field("state", "preset", &C::state, &C::State::preset));
        f.push_back({"state", "entry", true,
                     [](C& c, std::string_view v, const std::string& n) {
                         const auto parts = split_ws(v);
                         if (parts.size() < 2 || parts.size() > 3)
                             throw ConfigError(n, "expected '<label> <re> [<im>]'");
                         StateEntry e;
                         e.label = std::string(parts[0]);
                         try {
                             (void)BasisLabel::parse(e.label);
                         } catch (const std::invalid_argument& ex) {
                             throw ConfigError(n, ex.what());
                         }
                         e.re = need_double(parts[1], n);
                         e.im = parts.size() == 3 ? need_double(parts[2], n) : 0.0;
                         c.state.entries.push_back(e);
                     },
                     [](const C& c) {
                         std::vector<std::string> out;
                         for (const auto& e : c.state.entries)
                             out.push_back(e.label + " " + format_exact(e.re) + " " + format_exact(e.im));
                         return out;
                     }});
        f.push_back(str_field("state", "file", &C::state, &C::State::file));

        f.push_back(num_field("run", "t0", &C::run, &C::Run::t0));
        f.push_back(num_field("run", "t1", &C::run, &C::Run::t1));
        f.push_back(int_field("run", "steps", &C::run, &C::Run::steps));
        f.push_back(str_field("run", "pairs", &C::run, &C::Run::pairs));
        f.push_back(int_field("run", "m", &C::run, &C::Run::m));
        f.push_back(str_field("run", "code", &C::run, &C::Run::code));
        f.push_back(num_field("run", "kbar", &C::run, &C::Run::kbar));
        f.push_back(int_field("run", "m_max", &C::run, &C::Run::m_max));
        f.push_back(num_field("run", "eps_tol", &C::run, &C::Run::eps_tol));
        f.push_back(num_field("run", "delta_min", &C::run, &C::Run::delta_min));
        f.push_back(num_field("run", "delta_max", &C::run, &C::Run::delta_max));
        f.push_back(int_field("run", "delta_steps", &C::run, &C::Run::delta_steps));
        f.push_back(int_field("run", "samples", &C::run, &C::Run::samples));
        f.push_back(str_field("run", "label_i", &C::run, &C::Run::label_i));
        f.push_back(str_field("run", "label_j", &C::run, &C::Run::label_j));
        f.push_back(num_field("run", "k", &C::run, &C::Run::k));
        f.push_back(str_field("run", "suite", &C::run, &C::Run::suite));

        f.push_back(str_field("output", "dir", &C::output, &C::Output::dir));
        f.push_back(int_field("output", "precision", &C::output, &C::Output::precision));
        f.push_back(bool_field("output", "positions", &C::output, &C::Output::positions));
        f.push_back(bool_field("output", "modes", &C::output, &C::Output::modes));
        return f;
    }();
    return schema;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline void require(bool ok, const char* key, const std::string& why) {
    if (!ok) throw ConfigError(key, why);
}

}  // namespace detail

// Semantic checks; throws ConfigError naming the offending key.
inline void validate(const RunConfig& c) {
    using detail::require;
    const auto& g = c.geometry;
    require(g.l1 >= 1 && g.l2 >= 1 && g.l3 >= 1, "geometry.dims", "every dimension must be >= 1");
    require(g.l1 * g.l2 * g.l3 <= 4096, "geometry.dims", "register larger than 4096 sites");
    require(g.d > 0.0, "geometry.d", "must be > 0");
    require(g.delta >= 0.0, "geometry.delta", "must be >= 0");
    require(c.bath.v > 0.0, "bath.v", "must be > 0");
    require(c.bath.T >= 0.0, "bath.T", "must be >= 0");
    require(c.bath.dimensionality == 1 || c.bath.dimensionality == 3, "bath.dimensionality", "must be 1 or 3");
    require(c.coupling.form == "power" || c.coupling.form == "gaussian", "coupling.form",
            "must be 'power' or 'gaussian'");
    require(c.coupling.A >= 0.0, "coupling.A", "must be >= 0");
    require(c.coupling.cutoff > 0.0, "coupling.cutoff", "must be > 0");
    require(c.coupling.center_k > 0.0, "coupling.center_k", "must be > 0");
    require(c.coupling.width_k > 0.0, "coupling.width_k", "must be > 0");
    require(c.grid.modes >= 1, "grid.modes", "must be >= 1");
    require(c.grid.omega_max > 0.0, "grid.omega_max", "must be > 0");
    require(c.grid.directions >= 2 && c.grid.directions % 2 == 0, "grid.directions", "must be even and >= 2");
    const auto& s = c.state;
    require(s.preset == "cat" || s.preset == "single-flip" || s.preset == "entries" || s.preset == "file",
            "state.preset", "must be cat, single-flip, entries or file");
    require(s.preset != "entries" || !s.entries.empty(), "state.entry", "preset 'entries' needs at least one entry");
    require(s.preset != "file" || !s.file.empty(), "state.file", "preset 'file' needs a path");
    for (const auto& e : s.entries)
        require(e.label.size() == c.register_size(), "state.entry",
                "label '" + e.label + "' does not match register size " + std::to_string(c.register_size()));
    const auto& r = c.run;
    require(r.t0 >= 0.0, "run.t0", "must be >= 0");
    require(r.t1 >= r.t0, "run.t1", "must be >= run.t0");
    require(r.steps >= 0, "run.steps", "must be >= 0");
    require(r.m >= 1, "run.m", "must be >= 1");
    require(r.code == "adjacent" || r.code == "modulated", "run.code", "must be 'adjacent' or 'modulated'");
    require(r.kbar >= 0.0, "run.kbar", "must be >= 0");
    require(r.m_max >= 1, "run.m_max", "must be >= 1");
    require(r.eps_tol > 0.0, "run.eps_tol", "must be > 0");
    require(r.delta_min >= 0.0, "run.delta_min", "must be >= 0");
    require(r.delta_max >= r.delta_min, "run.delta_max", "must be >= run.delta_min");
    require(r.delta_steps >= 0, "run.delta_steps", "must be >= 0");
    require(r.samples >= 2, "run.samples", "must be >= 2");
    require(r.k >= 0.0, "run.k", "must be >= 0");
    require(r.suite == "default" || r.suite == "quick", "run.suite", "must be 'default' or 'quick'");
    for (const auto* lbl : {&r.label_i, &r.label_j})
        if (!lbl->empty()) {
            const char* key = lbl == &r.label_i ? "run.label_i" : "run.label_j";
            try {
                require(BasisLabel::parse(*lbl).size() == c.register_size(), key,
                        "label length does not match register size");
            } catch (const std::invalid_argument& ex) {
                throw ConfigError(key, ex.what());
            }
        }
    require(c.output.precision >= 1 && c.output.precision <= 17, "output.precision", "must be in 1..17");
}

inline RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    const auto& schema = detail::config_schema();
    std::vector<std::string> seen;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        const std::string_view line = detail::trim(raw);
        const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data()) + 1;
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            if (eol == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            const std::size_t close = line.find(']');
            if (close == std::string_view::npos)
                throw ConfigError(line_no, indent + line.size(), "missing ']' in section header");
            if (!detail::trim(line.substr(close + 1)).empty())
                throw ConfigError(line_no, indent + close + 1, "unexpected text after section header");
            section = std::string(detail::trim(line.substr(1, close - 1)));
            const bool known = std::any_of(schema.begin(), schema.end(),
                                           [&](const detail::ConfigField& f) { return f.section == section; });
            if (!known) throw ConfigError(line_no, indent + 1, "unknown section [" + section + "]");
            if (eol == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, indent, "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, indent, "missing key before '='");
        if (section.empty()) throw ConfigError(line_no, indent, "key '" + key + "' appears before any [section]");
        const std::string name = section + "." + key;
        auto it = std::find_if(schema.begin(), schema.end(), [&](const detail::ConfigField& f) {
            return f.section == section && f.key == key;
        });
        if (it == schema.end()) throw ConfigError(name, "unknown key");
        if (!it->repeatable) {
            if (std::find(seen.begin(), seen.end(), name) != seen.end())
                throw ConfigError(line_no, indent, "duplicate key '" + name + "'");
            seen.push_back(name);
        }
        it->set(cfg, value, name);
        if (eol == text.size()) break;
    }
    validate(cfg);
    return cfg;
}

// Canonical text: every key, fixed order, numbers in shortest round-trip form.
inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    std::string section;
    for (const auto& f : detail::config_schema()) {
        if (f.section != section) {
            if (!section.empty()) os << '\n';
            section = f.section;
            os << '[' << section << "]\n";
        }
        for (const auto& v : f.get(cfg)) os << f.key << (v.empty() ? " =" : " = ") << v << '\n';
    }
    return os.str();
}

inline std::string config_hash(const RunConfig& cfg) { return hex64(fnv1a64(serialize_config(cfg))); }

}  // namespace qreg
