// commands.hpp - the work behind each CLI subcommand, callable without a
// process boundary.
//
// Exit codes:
//   0  success (simulate: converged)
//   1  usage, configuration or input format error
//   2  simulate/experiment: horizon reached before convergence
//   3  integration failure (order inversion at the minimum step)
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "analysis.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "perturbation.hpp"

namespace knn_opinion::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitHorizon = 2;
inline constexpr int kExitIntegrationFailure = 3;

inline constexpr const char* kOutDirEnv = "KNN_OPINION_OUT_DIR";

/// Flag, then config file, then environment, then the working directory.
inline std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag,
                                             const std::optional<std::string>& from_config) {
    if (flag) return *flag;
    if (from_config) return *from_config;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return ".";
}

namespace detail {

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << text;
}

template <class F>
void write_with(const std::filesystem::path& p, F&& f) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    f(out);
}

inline json run_summary(const RunConfig& rc, const Trajectory& traj, std::optional<std::string> failure) {
    const auto& xf = traj.final_state();
    const Velocity v = rc.model == ModelKind::topological ? apply_field(xf, compute_neighbors(xf, rc.k))
                                                          : metric_rhs(xf, rc.metric);
    const std::size_t min_cluster = rc.model == ModelKind::topological ? rc.k + 1 : 1;
    const auto sc = classify(xf, v, min_cluster, rc.cluster_eps, rc.sim.conv_tol);

    json j = {{"schema_version", kSchemaVersion},
              {"model", to_string(rc.model)},
              {"n", xf.size()},
              {"k", rc.k},
              {"status", failure ? "integration_failure" : to_string(traj.status)},
              {"final_time", traj.final_time()},
              {"convergence_time", nullptr},
              {"event_count", traj.events.size()},
              {"accepted_steps", traj.accepted_steps},
              {"diameter", diameter(xf)},
              {"class", to_json(sc)},
              {"cluster_sizes", sc.partition.sizes()},
              {"sim", to_json(rc.sim)}};
    if (traj.status == RunStatus::converged && !failure) j["convergence_time"] = traj.final_time();
    if (rc.model == ModelKind::metric) j["d"] = rc.metric.d;
    if (rc.random_count) j["seed"] = rc.seed;
    if (failure) j["failure"] = *failure;
    return j;
}

}  // namespace detail

/// Runs one simulation and writes the requested artifacts into the output
/// directory: trajectory.csv, events.csv, summary.json, plot.svg.
inline int cmd_simulate(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed,
                        std::optional<std::string> out_flag, std::ostream& log) {
    RunConfig rc;
    try {
        rc = parse_run_config(load_json_file(config_path), config_path.parent_path());
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    if (seed) rc.seed = *seed;

    const auto out_dir = resolve_out_dir(out_flag, rc.out_dir);
    std::filesystem::create_directories(out_dir);

    Trajectory traj;
    std::optional<std::string> failure;
    const auto x0 = rc.initial_opinions();
    try {
        traj = rc.model == ModelKind::topological
                   ? integrate(TopologicalModel{rc.k}, x0, rc.sim, rc.k)
                   : integrate(MetricModel{rc.metric}, x0, rc.sim, rc.k);
    } catch (const IntegrationError& e) {
        traj = e.trajectory;
        failure = e.what();
    }

    try {
        if (rc.wants(Artifact::trajectory))
            detail::write_with(out_dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory(os, traj.samples); });
        if (rc.wants(Artifact::events))
            detail::write_with(out_dir / "events.csv", [&](std::ostream& os) { write_events(os, traj.events); });
        if (rc.wants(Artifact::plot) && traj.samples.size() >= 2)
            detail::write_with(out_dir / "plot.svg",
                               [&](std::ostream& os) { write_svg_plot(os, traj.samples, traj.events); });
        const auto summary = detail::run_summary(rc, traj, failure);
        if (rc.wants(Artifact::summary)) detail::write_text(out_dir / "summary.json", summary.dump(2) + "\n");
        log << summary["status"].get<std::string>() << " at t=" << traj.final_time() << ", "
            << summary["class"]["kind"].get<std::string>() << ", " << traj.events.size()
            << " switch events\n";
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    if (failure) {
        log << "integration failure: " << *failure << '\n';
        return kExitIntegrationFailure;
    }
    return traj.status == RunStatus::converged ? kExitOk : kExitHorizon;
}

/// Classification and stability predicates of a stored state.
inline json analyze_state(const OpinionState& s, double eps, double tol) {
    const auto sc = classify_state(s, eps, tol);
    json j = {{"schema_version", kSchemaVersion},
              {"n", s.n()},
              {"k", s.k()},
              {"diameter", diameter(s)},
              {"class", to_json(sc)},
              {"cluster_sizes", sc.partition.sizes()},
              {"structurally_stable", nullptr},
              {"removal_stable", nullptr}};
    if (sc.partition.min_size() >= s.k() + 1) {
        j["structurally_stable"] = is_structurally_stable(sc.partition, s.k());
        j["removal_stable"] = is_removal_stable(sc.partition, s.k());
    }
    return j;
}

inline int cmd_analyze(const std::filesystem::path& state_path, double eps, double tol, std::ostream& out,
                       std::ostream& log) {
    try {
        const auto s = parse_state(load_json_file(state_path));
        if (!(eps >= 0.0) || !(tol >= 0.0)) throw ConfigError("--eps and --tol must be >= 0");
        out << analyze_state(s, eps, tol).dump(2) << '\n';
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

/// Runs a scenario; writes report.json and, when the document sets
/// "write_trajectories", one trajectory table per model.
inline int cmd_experiment(const std::filesystem::path& scenario_path, std::optional<std::string> out_flag,
                          std::ostream& log) {
    Scenario sc;
    bool write_traj = false;
    std::optional<std::string> out_cfg;
    try {
        const auto j = load_json_file(scenario_path);
        sc = parse_scenario(j);
        write_traj = j.value("write_trajectories", false);
        if (j.contains("out") && j["out"].is_string()) out_cfg = j["out"].get<std::string>();
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const json::type_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    const auto out_dir = resolve_out_dir(out_flag, out_cfg);
    std::filesystem::create_directories(out_dir);

    ExperimentReport rep;
    try {
        rep = run_experiment(sc);
    } catch (const IntegrationError& e) {
        log << "integration failure: " << e.what() << '\n';
        return kExitIntegrationFailure;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        detail::write_text(out_dir / "report.json", to_json(rep, sc).dump(2) + "\n");
        if (write_traj)
            for (const auto& r : rep.runs)
                detail::write_with(out_dir / (std::string("trajectory_") + to_string(r.model) + ".csv"),
                                   [&](std::ostream& os) { write_trajectory(os, r.trajectory.samples); });
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    bool all_converged = true;
    for (const auto& r : rep.runs) {
        log << to_string(r.model) << ": " << to_string(r.status) << ", final "
            << to_string(r.final_class.kind) << " with " << r.final_class.partition.count()
            << " clusters, partition_preserved=" << (r.partition_preserved ? "true" : "false")
            << ", original_agents_moved=" << r.original_agents_moved << '\n';
        all_converged = all_converged && r.status == RunStatus::converged;
    }
    return all_converged ? kExitOk : kExitHorizon;
}

/// Renders a trajectory table (and optionally an event table) as SVG.
inline int cmd_plot(const std::filesystem::path& trajectory_path,
                    const std::optional<std::filesystem::path>& events_path,
                    const std::filesystem::path& out_path, std::ostream& log) {
    try {
        std::ifstream in(trajectory_path);
        if (!in) throw ConfigError("cannot open '" + trajectory_path.string() + "'");
        const auto samples = read_trajectory(in);
        std::vector<SwitchEvent> events;
        if (events_path) {
            std::ifstream ev(*events_path);
            if (!ev) throw ConfigError("cannot open '" + events_path->string() + "'");
            events = read_events(ev);
        }
        if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
        detail::write_with(out_path, [&](std::ostream& os) { write_svg_plot(os, samples, events); });
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
    } catch (const FormatError& e) {
        log << "error: " << e.what() << '\n';
    }
    return kExitInputError;
}

}  // namespace knn_opinion::cli
