#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfront/config.hpp"
#include "mfront/experiments.hpp"

namespace {

int run_kind(const std::string& kind, const std::string& config_path, const std::string& out_dir,
             int jobs) {
    const mfront::ExperimentConfig cfg = mfront::ExperimentConfig::load_file(config_path);
    if (cfg.experiment.kind != kind)
        throw mfront::ConfigError("experiment.kind: config declares '" + cfg.experiment.kind +
                                  "' but the '" + kind + "' subcommand was invoked");
    mfront::run_experiment_config(cfg, out_dir, jobs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfront: steady states, spectra, and interface dynamics for slow viscous fronts"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string preset;
    int jobs = 0;

    const std::vector<std::pair<std::string, std::string>> kinds = {
        {"steady", "compute the exact steady profile"},
        {"spectrum", "assemble the linearization about a front and solve for leading modes"},
        {"speedmap", "tabulate the projected interface speed over a range of positions"},
        {"slow-motion", "integrate the reduced interface law and report halving times"},
        {"simulate", "time-step the full equation and track the interface"},
        {"sweep", "repeat spectrum or speedmap runs over the configured viscosity list"},
    };
    for (const auto& [kind, help] : kinds) {
        CLI::App* sub = app.add_subcommand(kind, help);
        sub->add_option("--config", config_path, "JSON configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--jobs", jobs, "worker threads (default: logical cores)");
    }
    CLI::App* repro = app.add_subcommand("repro", "re-run a named preset study");
    repro->add_option("preset", preset,
                      "one of: eigen-scaling, residual-map, slow-motion, pde-vs-reduced")
        ->required();
    repro->add_option("--out", out_dir, "output directory (default: out)");
    repro->add_option("--jobs", jobs, "worker threads (default: logical cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (repro->parsed()) {
            mfront::run_preset(preset, out_dir, jobs);
            return 0;
        }
        for (const auto& [kind, help] : kinds) {
            (void)help;
            if (app.get_subcommand(kind)->parsed())
                return run_kind(kind, config_path, out_dir, jobs);
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const mfront::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
