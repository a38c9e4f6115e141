// knn-opinion: simulate, analyze, run disruption experiments and plot.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "knn_opinion/commands.hpp"

int main(int argc, char** argv) {
    namespace cli = knn_opinion::cli;

    CLI::App app{"k-nearest-neighbor opinion dynamics toolkit"};
    app.require_subcommand(1);

    std::string config, state, scenario, trajectory, events, plot_out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    double eps = 1e-6, tol = 1e-9;

    auto* sim = app.add_subcommand("simulate", "integrate a run described by a JSON config");
    sim->add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_option("--seed", seed, "override the random-init seed");
    sim->add_option("--out", out_dir, "output directory (default: config 'out', then $KNN_OPINION_OUT_DIR, then .)");

    auto* ana = app.add_subcommand("analyze", "classify a stored state");
    ana->add_option("--state", state, "state file {\"k\":K,\"opinions\":[...]}")->required()->check(CLI::ExistingFile);
    ana->add_option("--eps", eps, "cluster grouping tolerance")->capture_default_str();
    ana->add_option("--tol", tol, "equilibrium tolerance on sup|F|")->capture_default_str();

    auto* exp = app.add_subcommand("experiment", "run a disruption scenario");
    exp->add_option("--scenario", scenario, "scenario document (JSON)")->required()->check(CLI::ExistingFile);
    exp->add_option("--out", out_dir, "output directory");

    auto* plt = app.add_subcommand("plot", "render a trajectory table as SVG");
    plt->add_option("--trajectory", trajectory, "trajectory table (CSV)")->required()->check(CLI::ExistingFile);
    plt->add_option("--events", events, "optional switch-event table to mark on the time axis")->check(CLI::ExistingFile);
    plt->add_option("--out", plot_out, "output SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitInputError;
    }

    if (*sim) return cli::cmd_simulate(config, seed, out_dir, std::cerr);
    if (*ana) return cli::cmd_analyze(state, eps, tol, std::cout, std::cerr);
    if (*exp) return cli::cmd_experiment(scenario, out_dir, std::cerr);
    if (*plt)
        return cli::cmd_plot(trajectory, events.empty() ? std::nullopt : std::optional<std::filesystem::path>(events),
                             plot_out, std::cerr);
    return cli::kExitInputError;
}
