#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "qreg/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qreg: dephasing of qubit registers in a common bosonic bath"};
    app.set_version_flag("--version", std::string(QREG_VERSION));
    app.require_subcommand(1, 1);

    qreg::cli::Options opt;
    std::uint64_t seed = 0;
    const char* about[] = {"time series of the fidelity and of selected coherence factors",
                           "independent/collective regime classification",
                           "encode a state with a pairing code",
                           "find the modulated pairing (m, n) for the bath wavenumber",
                           "disorder averages of the geometric factors over a delta grid",
                           "compare against the truncated-Fock oracle"};
    for (std::size_t c = 0; c < qreg::cli::commands().size(); ++c) {
        const std::string& name = qreg::cli::commands()[c];
        auto* sub = app.add_subcommand(name, about[c]);
        sub->add_option("--config", opt.config_path, "configuration file")->required();
        sub->add_option("--output", opt.output_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "random seed (overrides geometry.seed)");
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", opt.quiet, "suppress stdout");
        sub->callback([&opt, name] { opt.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(qreg::cli::Exit::validation);
    }
    for (auto* sub : app.get_subcommands())
        if (sub->count("--seed") > 0) opt.seed = seed;
    return qreg::cli::run(opt, std::cout, std::cerr);
}
