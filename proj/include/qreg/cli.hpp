#pragma once

// Command layer behind the qreg executable. run_command() is pure: it turns a
// validated config into output artifacts and a stdout report. run() adds the
// file handling, error-to-exit-code mapping and atomic writes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "qreg/basis.hpp"
#include "qreg/bath.hpp"
#include "qreg/codes.hpp"
#include "qreg/config.hpp"
#include "qreg/dephasing.hpp"
#include "qreg/format.hpp"
#include "qreg/geometry.hpp"
#include "qreg/oracle.hpp"
#include "qreg/regimes.hpp"
#include "qreg/state_io.hpp"
#include "qreg/validation.hpp"

#ifndef QREG_VERSION
#define QREG_VERSION "1.0.0"
#endif

namespace qreg::cli {

enum class Exit : int { ok = 0, validation = 1, tolerance = 2, io = 3 };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"simulate", "classify", "encode",
                                                "pairing", "disorder-scan", "validate-oracle"};
    return c;
}

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Artifact {
    std::string name;  // file name inside the output directory
    std::string body;  // contents after the comment header
};

struct CommandResult {
    Exit status = Exit::ok;
    std::vector<Artifact> files;
    std::string report;  // stdout text following the run header
};

struct Context {
    std::filesystem::path base_dir = ".";  // relative state-file paths resolve here
    std::size_t threads = 1;
};

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading " + path.string());
    return ss.str();
}

// ---------------------------------------------------------------- builders

inline RegisterGeometry build_geometry(const RunConfig& c) {
    return RegisterGeometry::make({c.geometry.l1, c.geometry.l2, c.geometry.l3}, c.geometry.d, c.geometry.delta,
                                  c.geometry.seed);
}

// Gaussian center and width are given as wavenumbers and converted with w = v k.
inline BathSpectrum build_bath(const RunConfig& c) {
    CouplingForm form;
    if (c.coupling.form == "gaussian") {
        form = CouplingForm::gaussian(c.coupling.A, c.bath.v * c.coupling.center_k, c.bath.v * c.coupling.width_k);
    } else {
        form.A = c.coupling.A;
        form.p = c.coupling.p;
        form.cutoff = c.coupling.cutoff;
    }
    auto bath = discretize_spectrum(form, c.bath.v, c.bath.T, c.bath.dimensionality,
                                    static_cast<std::size_t>(c.grid.modes), c.grid.omega_max,
                                    static_cast<std::size_t>(c.grid.directions));
    bath.qubit_splitting = c.bath.omega0;
    return bath;
}

inline RegisterState build_state(const RunConfig& c, const Context& ctx, std::size_t qubits) {
    const auto& s = c.state;
    RegisterState state;
    if (s.preset == "cat") {
        state = RegisterState::cat(qubits);
    } else if (s.preset == "single-flip") {
        state = RegisterState::single_flip(qubits);
    } else if (s.preset == "entries") {
        std::string text;
        for (const auto& e : s.entries) text += e.label + " " + format_exact(e.re) + " " + format_exact(e.im) + "\n";
        state = parse_state_text(text);
    } else {
        std::filesystem::path p = s.file;
        if (p.is_relative()) p = ctx.base_dir / p;
        state = parse_state_text(read_text_file(p));
    }
    if (state.qubits() != qubits)
        throw ConfigError("state", "state has " + std::to_string(state.qubits()) + " qubits, register has " +
                                       std::to_string(qubits));
    return state;
}

// Effective bath wavenumber used for pairing: run.kbar if set, else the
// Gaussian peak, else the Lamb-weighted mean frequency over v.
inline double effective_kbar(const RunConfig& c) {
    if (c.run.kbar > 0.0) return c.run.kbar;
    if (c.coupling.form == "gaussian") return c.coupling.center_k;
    return spectral_moments(build_bath(c)).mean2 / c.bath.v;
}

inline std::vector<std::pair<BasisLabel, BasisLabel>> parse_pairs(const std::string& text, std::size_t qubits) {
    std::vector<std::pair<BasisLabel, BasisLabel>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item(detail::trim(std::string_view(text).substr(pos, end - pos)));
        pos = end + 1;
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("run.pairs", "expected 'label:label', got '" + item + "'");
        try {
            BasisLabel i = BasisLabel::parse(detail::trim(std::string_view(item).substr(0, colon)));
            BasisLabel j = BasisLabel::parse(detail::trim(std::string_view(item).substr(colon + 1)));
            if (i.size() != qubits || j.size() != qubits)
                throw ConfigError("run.pairs", "label length does not match register size in '" + item + "'");
            out.emplace_back(std::move(i), std::move(j));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("run.pairs", e.what());
        }
    }
    return out;
}

inline std::vector<double> time_grid(const RunConfig& c) {
    std::vector<double> t;
    const auto n = c.run.steps;
    for (long long s = 0; s <= n; ++s)
        t.push_back(n == 0 ? c.run.t0
                           : c.run.t0 + (c.run.t1 - c.run.t0) * static_cast<double>(s) / static_cast<double>(n));
    return t;
}

inline void add_geometry_artifacts(const RunConfig& c, const RegisterGeometry& g, const BathSpectrum& bath,
                                   CommandResult& r) {
    const int p = static_cast<int>(c.output.precision);
    if (c.output.positions) {
        std::string body = "index,x,y,z\n";
        for (std::size_t l = 0; l < g.positions.size(); ++l) {
            const auto& x = g.positions[l];
            body += std::to_string(l) + "," + format_number(x[0], p) + "," + format_number(x[1], p) + "," +
                    format_number(x[2], p) + "\n";
        }
        r.files.push_back({"positions.csv", std::move(body)});
    }
    if (c.output.modes) {
        std::string body = "omega,g2,kx,ky,kz\n";
        for (const Mode& m : bath.modes())
            body += format_number(m.omega, p) + "," + format_number(m.g2, p) + "," + format_number(m.k[0], p) + "," +
                    format_number(m.k[1], p) + "," + format_number(m.k[2], p) + "\n";
        r.files.push_back({"modes.csv", std::move(body)});
    }
}

// ---------------------------------------------------------------- commands

inline CommandResult cmd_simulate(const RunConfig& c, const Context& ctx) {
    CommandResult r;
    const int p = static_cast<int>(c.output.precision);
    const auto geometry = build_geometry(c);
    const auto bath = build_bath(c);
    const auto state = build_state(c, ctx, geometry.size());
    const auto pairs = parse_pairs(c.run.pairs, geometry.size());

    const CoherenceKernel kernel(state.labels(), bath, geometry.positions);
    std::vector<BasisLabel> pair_labels;
    for (const auto& [i, j] : pairs) {
        pair_labels.push_back(i);
        pair_labels.push_back(j);
    }
    const CoherenceKernel pair_kernel(pair_labels, bath, geometry.positions);

    std::string body = "t,F";
    for (const auto& [i, j] : pairs) body += ",eta[" + i.str() + "|" + j.str() + "],phi[" + i.str() + "|" + j.str() + "]";
    body += "\n";
    const auto grid = time_grid(c);
    double last = 1.0;
    for (double t : grid) {
        last = fidelity(kernel, state, t);
        body += format_number(t, p) + "," + format_number(last, p);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            const PairFactors f = pair_kernel.pair(2 * q, 2 * q + 1, t);
            body += "," + format_number(f.eta, p) + "," + format_number(f.phi(), p);
        }
        body += "\n";
    }
    r.files.push_back({"simulate.csv", std::move(body)});
    add_geometry_artifacts(c, geometry, bath, r);
    r.report = "qubits=" + std::to_string(geometry.size()) + "\nmodes=" + std::to_string(bath.size()) +
               "\nrows=" + std::to_string(grid.size()) + "\nF_final=" + format_number(last, p) + "\n";
    return r;
}

inline CommandResult cmd_classify(const RunConfig& c, const Context&) {
    CommandResult r;
    const int p = static_cast<int>(c.output.precision);
    const auto geometry = build_geometry(c);
    const auto bath = build_bath(c);
    const SpectralMoments mom = spectral_moments(bath);
    const RegimeReport rep = classify(geometry, mom, c.bath.v, c.run.m);

    const std::vector<std::pair<std::string, double>> values = {
        {"p_ind1a", rep.p_ind1a}, {"p_ind1b", rep.p_ind1b},   {"p_ind2a", rep.p_ind2a},
        {"p_ind2b", rep.p_ind2b}, {"p_coll1a", rep.p_coll1a}, {"p_coll1b", rep.p_coll1b},
        {"p_coll2", rep.p_coll2}, {"mean1", mom.mean1},       {"width1", mom.width1},
        {"mean2", mom.mean2},     {"width2", mom.width2}};
    std::string kv, json = "{";
    for (const auto& [k, v] : values) {
        kv += k + "=" + format_number(v, p) + "\n";
        json += "\"" + k + "\":" + format_number(v, p) + ",";
    }
    const std::string cls(to_string(rep.classification));
    kv += "m=" + std::to_string(rep.m) + "\nclassification=" + cls + "\n";
    json += "\"m\":" + std::to_string(rep.m) + ",\"classification\":\"" + cls + "\"}\n";
    r.files.push_back({"classify.txt", kv});
    r.files.push_back({"classify.json", json});
    add_geometry_artifacts(c, geometry, bath, r);
    r.report = kv + json;
    return r;
}

inline PairCode code_for(const RunConfig& c, std::size_t logical, PairingResult* pairing = nullptr) {
    if (c.run.code == "adjacent") return adjacent_code(logical);
    const auto res = find_pairing(effective_kbar(c), c.geometry.d, c.run.m_max, c.run.eps_tol, logical);
    if (pairing) *pairing = res;
    if (!res.found()) return {};
    return modulated_code(*res.plan);
}

inline CommandResult cmd_encode(const RunConfig& c, const Context& ctx) {
    CommandResult r;
    const auto state = build_state(c, ctx, c.register_size());
    PairingResult pairing;
    const PairCode code = code_for(c, state.qubits(), &pairing);
    if (code.pairs.empty()) {
        r.status = Exit::tolerance;
        r.report = "no pairing within eps_tol=" + format_number(c.run.eps_tol, 12) +
                   " (best m=" + std::to_string(pairing.best_m) + " residual=" +
                   format_number(pairing.best_residual, 12) + ")\n";
        return r;
    }
    const RegisterState encoded = encode(code, state);
    const std::string body = format_state(encoded, static_cast<int>(c.output.precision));
    r.files.push_back({"encoded.state", body});
    r.report = "code=" + c.run.code + "\nlogical_qubits=" + std::to_string(state.qubits()) +
               "\nphysical_qubits=" + std::to_string(code.physical_size) + "\n" + body;
    return r;
}

inline CommandResult cmd_pairing(const RunConfig& c, const Context&) {
    CommandResult r;
    const int p = static_cast<int>(c.output.precision);
    const double kbar = effective_kbar(c);
    const auto logical = c.register_size();
    const PairingResult res = find_pairing(kbar, c.geometry.d, c.run.m_max, c.run.eps_tol, logical);
    std::string kv = "kbar=" + format_number(kbar, p) + "\nd=" + format_number(c.geometry.d, p) +
                     "\neps_tol=" + format_number(c.run.eps_tol, p) + "\nfound=" + (res.found() ? "true" : "false") + "\n";
    if (res.found()) {
        const auto& plan = *res.plan;
        kv += "m=" + std::to_string(plan.m) + "\nn=" + std::to_string(plan.n) +
              "\nepsilon=" + format_number(plan.residual, p) + "\nlogical_qubits=" + std::to_string(plan.logical_qubits) +
              "\nphysical_qubits=" + std::to_string(plan.physical_size) +
              "\npartner_sign=" + std::to_string(modulated_code(plan).partner_sign) + "\npairs=";
        for (std::size_t q = 0; q < plan.pairs.size(); ++q)
            kv += (q ? ";" : "") + std::to_string(plan.pairs[q].first) + ":" + std::to_string(plan.pairs[q].second);
        kv += "\n";
        r.files.push_back({"pairing.txt", kv});
    } else {
        kv += "best_m=" + std::to_string(res.best_m) + "\nbest_n=" + std::to_string(res.best_n) +
              "\nbest_epsilon=" + format_number(res.best_residual, p) + "\n";
        r.status = Exit::tolerance;
    }
    r.report = kv;
    return r;
}

inline CommandResult cmd_disorder_scan(const RunConfig& c, const Context& ctx) {
    CommandResult r;
    const int p = static_cast<int>(c.output.precision);
    const std::size_t L = c.register_size();
    const BasisLabel i = c.run.label_i.empty() ? BasisLabel::uniform(L, 1) : BasisLabel::parse(c.run.label_i);
    const BasisLabel j = c.run.label_j.empty() ? BasisLabel::uniform(L, -1) : BasisLabel::parse(c.run.label_j);
    const Vec3 k{c.run.k, 0.0, 0.0};
    std::string body = "delta,mean_lambda1,stderr1,mean_lambda2,stderr2\n";
    const auto n = c.run.delta_steps;
    for (long long s = 0; s <= n; ++s) {
        const double delta = n == 0 ? c.run.delta_min
                                    : c.run.delta_min + (c.run.delta_max - c.run.delta_min) * static_cast<double>(s) /
                                                            static_cast<double>(n);
        const auto g = RegisterGeometry::make({c.geometry.l1, c.geometry.l2, c.geometry.l3}, c.geometry.d, delta,
                                              c.geometry.seed);
        const auto avg = disorder_average_lambdas(i, j, k, g, static_cast<std::size_t>(c.run.samples),
                                                  c.geometry.seed, ctx.threads);
        body += format_number(delta, p) + "," + format_number(avg.lambda1.mean, p) + "," +
                format_number(avg.lambda1.std_error, p) + "," + format_number(avg.lambda2.mean, p) + "," +
                format_number(avg.lambda2.std_error, p) + "\n";
    }
    r.files.push_back({"disorder_scan.csv", body});
    r.report = "label_i=" + i.str() + "\nlabel_j=" + j.str() + "\nrows=" + std::to_string(n + 1) + "\n";
    return r;
}

struct SuiteEntry {
    std::size_t qubits;
    std::size_t modes;
    double T;
};

inline std::vector<SuiteEntry> oracle_suite(const std::string& name) {
    if (name == "quick") return {{1, 1, 0.0}, {2, 2, 0.0}, {3, 3, 0.0}, {2, 2, 0.8}};
    return {{1, 1, 0.0}, {2, 2, 0.0}, {3, 3, 0.0}, {1, 4, 0.0}, {2, 3, 0.0},
            {3, 2, 0.0}, {2, 4, 0.0}, {3, 1, 0.0}, {2, 3, 0.8}};
}

inline CommandResult cmd_validate_oracle(const RunConfig& c, const Context&) {
    CommandResult r;
    const int p = static_cast<int>(c.output.precision);
    std::string body = "instance,qubits,modes,T,t,truncation,samples,max_deviation,max_z,tolerance,pass\n";
    bool ok = true;
    const auto suite = oracle_suite(c.run.suite);
    for (std::size_t s = 0; s < suite.size(); ++s) {
        const auto& e = suite[s];
        auto inst = random_oracle_instance(detail::mix_seed(c.geometry.seed, s), e.qubits, e.modes, e.T);
        inst.name = std::to_string(s) + "-" + inst.name;
        OracleComparison cmp;
        std::string note;
        try {
            cmp = compare_with_oracle(inst, static_cast<std::size_t>(c.run.samples), detail::mix_seed(c.geometry.seed, 1000 + s));
        } catch (const oracle::TruncationError& ex) {
            cmp.max_deviation = cmp.max_z = std::numeric_limits<double>::infinity();
            cmp.thermal = e.T > 0.0;
            note = ex.what();
        }
        const bool pass = note.empty() && cmp.passed();
        ok = ok && pass;
        const std::string tol = cmp.thermal ? "3se" : "1e-4";
        body += inst.name + "," + std::to_string(e.qubits) + "," + std::to_string(e.modes) + "," +
                format_number(e.T, p) + "," + format_number(inst.t, p) + "," + std::to_string(cmp.truncation) + "," +
                std::to_string(cmp.samples) + "," + format_number(cmp.max_deviation, p) + "," +
                format_number(cmp.max_z, p) + "," + tol + "," + (pass ? "true" : "false") + "\n";
        r.report += inst.name + " max_deviation=" + format_number(cmp.max_deviation, 6) +
                    (cmp.thermal ? " max_z=" + format_number(cmp.max_z, 4) : "") + (pass ? " PASS" : " FAIL") +
                    (note.empty() ? "" : " (" + note + ")") + "\n";
    }
    r.files.push_back({"validate_oracle.csv", body});
    if (!ok) r.status = Exit::tolerance;
    return r;
}

inline CommandResult run_command(const std::string& command, const RunConfig& config, const Context& ctx = {}) {
    if (command == "simulate") return cmd_simulate(config, ctx);
    if (command == "classify") return cmd_classify(config, ctx);
    if (command == "encode") return cmd_encode(config, ctx);
    if (command == "pairing") return cmd_pairing(config, ctx);
    if (command == "disorder-scan") return cmd_disorder_scan(config, ctx);
    if (command == "validate-oracle") return cmd_validate_oracle(config, ctx);
    throw std::invalid_argument("unknown command '" + command + "'");
}

// ---------------------------------------------------------------- driver

inline std::string output_header(const std::string& command, const RunConfig& c) {
    std::string h = "# qreg " QREG_VERSION "\n# command: " + command + "\n# seed: " + std::to_string(c.geometry.seed) +
                    "\n# config_hash: " + config_hash(c) + "\n";
    std::istringstream cfg(serialize_config(c));
    for (std::string line; std::getline(cfg, line);) h += line.empty() ? "#\n" : "#   " + line + "\n";
    return h;
}

// Writes every artifact through a temporary file and rename; on any failure
// the files already written by this call are removed.
inline void write_artifacts(const std::filesystem::path& dir, const std::string& header,
                            const std::vector<Artifact>& files) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
    std::vector<fs::path> done;
    try {
        for (const auto& f : files) {
            const fs::path target = dir / f.name;
            const fs::path tmp = dir / ("." + f.name + ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out) throw IoError("cannot write " + tmp.string());
                out << header << f.body;
                out.close();
                if (!out) {
                    fs::remove(tmp, ec);
                    throw IoError("cannot write " + tmp.string());
                }
            }
            fs::rename(tmp, target, ec);
            if (ec) {
                fs::remove(tmp, ec);
                throw IoError("cannot move output into place: " + target.string());
            }
            done.push_back(target);
        }
    } catch (...) {
        for (const auto& p : done) fs::remove(p, ec);
        throw;
    }
}

struct Options {
    std::string command;
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    bool quiet = false;
};

inline int run(const Options& opt, std::ostream& out, std::ostream& err) {
    try {
        const std::string text = read_text_file(opt.config_path);
        RunConfig cfg = parse_config(text);
        if (opt.seed) cfg.geometry.seed = *opt.seed;
        Context ctx;
        ctx.base_dir = std::filesystem::path(opt.config_path).parent_path();
        if (ctx.base_dir.empty()) ctx.base_dir = ".";
        ctx.threads = std::max<std::size_t>(1, opt.threads);

        const CommandResult res = run_command(opt.command, cfg, ctx);
        if (!opt.quiet)
            out << "qreg " << QREG_VERSION << " command=" << opt.command << " seed=" << cfg.geometry.seed
                << " config_hash=" << config_hash(cfg) << "\n"
                << res.report;
        if (res.status != Exit::ok) {
            err << "qreg: " << opt.command << ": tolerance breach, no output written\n";
            return static_cast<int>(res.status);
        }
        const std::filesystem::path dir = opt.output_dir ? *opt.output_dir : cfg.output.dir;
        write_artifacts(dir, output_header(opt.command, cfg), res.files);
        if (!opt.quiet)
            for (const auto& f : res.files) out << "wrote " << (dir / f.name).string() << "\n";
        return 0;
    } catch (const IoError& e) {
        err << "qreg: I/O error: " << e.what() << "\n";
        return static_cast<int>(Exit::io);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "qreg: I/O error: " << e.what() << "\n";
        return static_cast<int>(Exit::io);
    } catch (const ConfigError& e) {
        err << "qreg: invalid configuration: " << e.what() << "\n";
        return static_cast<int>(Exit::validation);
    } catch (const oracle::TruncationError& e) {
        err << "qreg: " << e.what() << "\n";
        return static_cast<int>(Exit::tolerance);
    } catch (const std::invalid_argument& e) {
        err << "qreg: invalid input: " << e.what() << "\n";
        return static_cast<int>(Exit::validation);
    } catch (const std::exception& e) {
        err << "qreg: error: " << e.what() << "\n";
        return static_cast<int>(Exit::validation);
    }
}

}  // namespace qreg::cli
