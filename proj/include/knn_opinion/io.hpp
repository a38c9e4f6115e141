// io.hpp - text formats: trajectory and event tables, JSON configs, summaries
// and reports, SVG plots. Agent indices are 1-based in every format.
#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "dynamics.hpp"
#include "perturbation.hpp"
#include "random.hpp"
#include "state.hpp"

namespace knn_opinion {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Numbers

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw FormatError("cannot format number");
    return std::string(buf, end);
}

inline double parse_double(std::string_view s, const std::string& where) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw FormatError(where + ": not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trajectory table: header `t,x_1,...,x_n`, one row per sample.

inline void write_trajectory(std::ostream& os, std::span<const Sample> samples) {
    if (samples.empty()) throw FormatError("trajectory has no samples");
    const std::size_t n = samples.front().x.size();
    os << 't';
    for (std::size_t i = 1; i <= n; ++i) os << ",x_" << i;
    os << '\n';
    for (const auto& s : samples) {
        os << format_double(s.t);
        for (double v : s.x) os << ',' << format_double(v);
        os << '\n';
    }
}

inline std::vector<Sample> read_trajectory(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("trajectory: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    if (header.empty() || header[0] != "t") throw FormatError("trajectory line 1: header must start with 't'");
    const std::size_t n = header.size() - 1;
    for (std::size_t i = 1; i <= n; ++i)
        if (header[i] != "x_" + std::to_string(i))
            throw FormatError("trajectory line 1: column " + std::to_string(i + 1) +
                              " must be x_" + std::to_string(i));

    std::vector<Sample> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        const std::string where = "trajectory line " + std::to_string(lineno);
        if (cells.size() != n + 1)
            throw FormatError(where + ": expected " + std::to_string(n + 1) + " columns, got " +
                              std::to_string(cells.size()));
        Sample s;
        s.t = parse_double(cells[0], where);
        s.x.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) s.x.push_back(parse_double(cells[i], where));
        if (!out.empty() && !(s.t > out.back().t))
            throw FormatError(where + ": sample times must increase");
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Event table: `t,agent,before,after`, neighbor lists space-separated.

inline std::string join_indices(std::span<const Index> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(v[i] + 1);
    }
    return s;
}

inline void write_events(std::ostream& os, std::span<const SwitchEvent> events) {
    os << "t,agent,before,after\n";
    for (const auto& e : events)
        os << format_double(e.t) << ',' << e.agent + 1 << ',' << join_indices(e.before) << ','
           << join_indices(e.after) << '\n';
}

inline std::vector<SwitchEvent> read_events(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("events: empty input");
    std::vector<SwitchEvent> out;
    std::size_t lineno = 1;
    auto indices = [](std::string_view cell, const std::string& where) {
        std::vector<Index> v;
        for (auto tok : split(cell, ' ')) {
            if (tok.empty()) continue;
            std::size_t one_based = 0;
            auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), one_based);
            if (ec != std::errc{} || end != tok.data() + tok.size() || one_based == 0)
                throw FormatError(where + ": bad agent index '" + std::string(tok) + "'");
            v.push_back(one_based - 1);
        }
        return v;
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "events line " + std::to_string(lineno);
        const auto cells = split(line, ',');
        if (cells.size() != 4) throw FormatError(where + ": expected 4 columns");
        SwitchEvent e;
        e.t = parse_double(cells[0], where);
        const auto agent = indices(cells[1], where);
        if (agent.size() != 1) throw FormatError(where + ": agent column must hold one index");
        e.agent = agent.front();
        e.before = indices(cells[2], where);
        e.after = indices(cells[3], where);
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON helpers with field context

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses JSON text; syntax errors name the line and column.
inline json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON syntax error: " + e.what());
    }
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json load_json_file(const std::filesystem::path& p) {
    return parse_json_text(read_file(p), p.string());
}

namespace detail {

inline const json* find_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline double get_number(const json& obj, const char* key, const std::string& ctx, double fallback) {
    const json* f = find_field(obj, key);
    if (!f) return fallback;
    if (!f->is_number()) throw ConfigError(ctx + key + ": expected a number");
    return f->get<double>();
}

inline std::uint64_t get_unsigned(const json& obj, const char* key, const std::string& ctx,
                                  std::uint64_t fallback) {
    const json* f = find_field(obj, key);
    if (!f) return fallback;
    if (!f->is_number_unsigned() && !(f->is_number_integer() && f->get<std::int64_t>() >= 0))
        throw ConfigError(ctx + key + ": expected a non-negative integer");
    return f->get<std::uint64_t>();
}

inline std::uint64_t require_unsigned(const json& obj, const char* key, const std::string& ctx) {
    if (!find_field(obj, key)) throw ConfigError(ctx + key + ": required field missing");
    return get_unsigned(obj, key, ctx, 0);
}

inline std::vector<double> get_numbers(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw ConfigError(ctx + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw ConfigError(ctx + "[" + std::to_string(i) + "]: expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

inline void require_object(const json& v, const std::string& ctx) {
    if (!v.is_object()) throw ConfigError(ctx + ": expected an object");
}

}  // namespace detail

inline SimConfig parse_sim_config(const json& j, const std::string& ctx = "sim.") {
    SimConfig c;
    detail::require_object(j, ctx.empty() ? "sim" : ctx.substr(0, ctx.size() - 1));
    c.step = detail::get_number(j, "step", ctx, c.step);
    c.t_max = detail::get_number(j, "t_max", ctx, c.t_max);
    c.conv_tol = detail::get_number(j, "conv_tol", ctx, c.conv_tol);
    c.stall_window = detail::get_number(j, "stall_window", ctx, c.stall_window);
    c.record_every = detail::get_number(j, "record_every", ctx, c.record_every);
    c.refine_levels = static_cast<int>(detail::get_unsigned(j, "refine_levels", ctx, 10));
    if (const json* s = detail::find_field(j, "scheme")) {
        if (*s == "rk4")
            c.scheme = Scheme::rk4;
        else if (*s == "euler")
            c.scheme = Scheme::euler;
        else
            throw ConfigError(ctx + "scheme: expected \"rk4\" or \"euler\"");
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline json to_json(const SimConfig& c) {
    return {{"step", c.step},
            {"t_max", c.t_max},
            {"conv_tol", c.conv_tol},
            {"stall_window", c.stall_window},
            {"record_every", c.record_every},
            {"scheme", c.scheme == Scheme::rk4 ? "rk4" : "euler"},
            {"refine_levels", c.refine_levels}};
}

/// State file: {"k": K, "opinions": [...]}.
inline OpinionState parse_state(const json& j, const std::string& ctx = "") {
    detail::require_object(j, ctx.empty() ? "state" : ctx);
    const auto k = detail::require_unsigned(j, "k", ctx);
    const json* ops = detail::find_field(j, "opinions");
    if (!ops) throw ConfigError(ctx + "opinions: required field missing");
    try {
        return OpinionState(detail::get_numbers(*ops, ctx + "opinions"), k);
    } catch (const InvalidState& e) {
        throw ConfigError(ctx + "opinions: " + e.what());
    }
}

inline json to_json(const OpinionState& s) {
    return {{"k", s.k()}, {"opinions", s.values()}};
}

inline json to_json(const ClusterPartition& p) {
    json clusters = json::array();
    for (const auto& c : p.clusters) {
        json members = json::array();
        for (Index i : c.members) members.push_back(i + 1);
        clusters.push_back({{"value", c.value}, {"size", c.size()}, {"members", members}});
    }
    return {{"eps", p.eps}, {"count", p.count()}, {"clusters", clusters}};
}

inline json to_json(const StateClass& sc) {
    return {{"kind", to_string(sc.kind)}, {"rhs_sup", sc.rhs_sup}, {"partition", to_json(sc.partition)}};
}

// ---------------------------------------------------------------------------
// Run configuration

enum class Artifact { trajectory, events, summary, plot };

struct RunConfig {
    ModelKind model = ModelKind::topological;
    std::size_t k = 1;
    MetricParams metric;
    std::vector<double> opinions;          // explicit init
    std::optional<std::size_t> random_count;  // seeded uniform init on [0, 1)
    std::uint64_t seed = 0;
    SimConfig sim;
    double cluster_eps = 1e-6;
    std::vector<Artifact> outputs{Artifact::trajectory, Artifact::events, Artifact::summary};
    std::optional<std::string> out_dir;

    bool wants(Artifact a) const { return std::find(outputs.begin(), outputs.end(), a) != outputs.end(); }

    std::vector<double> initial_opinions() const {
        return random_count ? random_opinions(*random_count, seed) : opinions;
    }
};

inline RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir = {}) {
    detail::require_object(j, "config");
    RunConfig rc;
    if (const json* m = detail::find_field(j, "model")) {
        if (*m == "topological")
            rc.model = ModelKind::topological;
        else if (*m == "metric")
            rc.model = ModelKind::metric;
        else
            throw ConfigError("model: expected \"topological\" or \"metric\"");
    }
    rc.k = detail::get_unsigned(j, "k", "", 1);
    if (rc.model == ModelKind::metric) {
        if (!detail::find_field(j, "d")) throw ConfigError("d: required for the metric model");
        rc.metric.d = detail::get_number(j, "d", "", 1.0);
        if (!(rc.metric.d > 0.0)) throw ConfigError("d: must be > 0");
    }

    const json* init = detail::find_field(j, "init");
    if (!init) throw ConfigError("init: required field missing");
    detail::require_object(*init, "init");
    const int sources = static_cast<int>(init->contains("opinions")) +
                        static_cast<int>(init->contains("random")) +
                        static_cast<int>(init->contains("file"));
    if (sources != 1)
        throw ConfigError("init: exactly one of \"opinions\", \"random\", \"file\" is required");
    if (init->contains("opinions")) {
        rc.opinions = detail::get_numbers(init->at("opinions"), "init.opinions");
    } else if (init->contains("random")) {
        const json& r = init->at("random");
        detail::require_object(r, "init.random");
        rc.random_count = detail::require_unsigned(r, "count", "init.random.");
        rc.seed = detail::get_unsigned(r, "seed", "init.random.", 0);
    } else {
        if (!init->at("file").is_string()) throw ConfigError("init.file: expected a path string");
        auto path = std::filesystem::path(init->at("file").get<std::string>());
        if (path.is_relative()) path = base_dir / path;
        if (!std::filesystem::exists(path))
            throw ConfigError("init.file: '" + path.string() + "' does not exist");
        const auto st = parse_state(load_json_file(path), "init.file: ");
        rc.opinions = st.values();
        if (!j.contains("k")) rc.k = st.k();
    }
    if (rc.model == ModelKind::topological && !j.contains("k") && !init->contains("file"))
        throw ConfigError("k: required field missing");

    if (const json* s = detail::find_field(j, "sim")) rc.sim = parse_sim_config(*s);
    if (const json* a = detail::find_field(j, "analysis")) {
        detail::require_object(*a, "analysis");
        rc.cluster_eps = detail::get_number(*a, "eps", "analysis.", rc.cluster_eps);
    }
    if (const json* o = detail::find_field(j, "outputs")) {
        if (!o->is_array()) throw ConfigError("outputs: expected an array");
        rc.outputs.clear();
        for (const auto& v : *o) {
            if (v == "trajectory") rc.outputs.push_back(Artifact::trajectory);
            else if (v == "events") rc.outputs.push_back(Artifact::events);
            else if (v == "summary") rc.outputs.push_back(Artifact::summary);
            else if (v == "plot") rc.outputs.push_back(Artifact::plot);
            else throw ConfigError("outputs: unknown artifact " + v.dump());
        }
    }
    if (const json* o = detail::find_field(j, "out")) {
        if (!o->is_string()) throw ConfigError("out: expected a directory string");
        rc.out_dir = o->get<std::string>();
    }

    const std::size_t n = rc.random_count ? *rc.random_count : rc.opinions.size();
    try {
        ModelParams{n, rc.k}.validate();
        require_finite(rc.opinions);
    } catch (const InvalidState& e) {
        throw ConfigError(std::string("init: ") + e.what());
    }
    return rc;
}

// ---------------------------------------------------------------------------
// Scenario documents

inline Scenario parse_scenario(const json& j) {
    detail::require_object(j, "scenario");
    Scenario sc;
    const json* kind = detail::find_field(j, "scenario");
    if (!kind || !kind->is_string()) throw ConfigError("scenario: required string field missing");
    const auto name = kind->get<std::string>();
    if (name == "perturb") sc.kind = ScenarioKind::perturb;
    else if (name == "split") sc.kind = ScenarioKind::split;
    else if (name == "add") sc.kind = ScenarioKind::add;
    else if (name == "remove") sc.kind = ScenarioKind::remove;
    else if (name == "contrast") sc.kind = ScenarioKind::contrast;
    else throw ConfigError("scenario: unknown kind \"" + name + "\"");

    const auto k = detail::require_unsigned(j, "k", "");
    try {
        if (const json* st = detail::find_field(j, "opinions")) {
            sc.initial = OpinionState(detail::get_numbers(*st, "opinions"), k);
        } else if (const json* cl = detail::find_field(j, "clusters")) {
            if (!cl->is_array()) throw ConfigError("clusters: expected an array");
            std::vector<double> values;
            std::vector<std::size_t> sizes;
            for (std::size_t c = 0; c < cl->size(); ++c) {
                const std::string ctx = "clusters[" + std::to_string(c) + "].";
                detail::require_object((*cl)[c], ctx);
                values.push_back(detail::get_number((*cl)[c], "value", ctx, 0.0));
                sizes.push_back(detail::require_unsigned((*cl)[c], "size", ctx));
            }
            sc.initial = make_clusterization(values, sizes, k);
        } else {
            throw ConfigError("scenario needs \"opinions\" or \"clusters\"");
        }
    } catch (const InvalidState& e) {
        throw ConfigError(std::string("initial state: ") + e.what());
    }

    if (const json* ms = detail::find_field(j, "models")) {
        if (!ms->is_array()) throw ConfigError("models: expected an array");
        sc.models.clear();
        for (const auto& m : *ms) {
            if (m == "topological") sc.models.push_back(ModelKind::topological);
            else if (m == "metric") sc.models.push_back(ModelKind::metric);
            else throw ConfigError("models: unknown model " + m.dump());
        }
    }
    sc.metric.d = detail::get_number(j, "d", "", sc.metric.d);
    if (!(sc.metric.d > 0.0)) throw ConfigError("d: must be > 0");

    sc.magnitude = detail::get_number(j, "magnitude", "", 0.0);
    sc.seed = detail::get_unsigned(j, "seed", "", 0);
    sc.split_eps = detail::get_number(j, "eps", "", sc.split_eps);
    sc.newcomer = detail::get_number(j, "newcomer", "", 0.0);
    sc.cluster_eps = detail::get_number(j, "cluster_eps", "", sc.cluster_eps);
    if (const json* s = detail::find_field(j, "sim")) sc.sim = parse_sim_config(*s);

    if (sc.kind == ScenarioKind::remove) {
        const auto agent = detail::require_unsigned(j, "agent", "");
        if (agent < 1 || agent > sc.initial.n()) throw ConfigError("agent: out of range");
        sc.removed = agent - 1;
    }
    if ((sc.kind == ScenarioKind::add || sc.kind == ScenarioKind::contrast) && !j.contains("newcomer"))
        throw ConfigError("newcomer: required for " + name + " scenarios");
    if (sc.kind == ScenarioKind::split) {
        if (const json* c = detail::find_field(j, "cluster")) {
            if (!c->is_array()) throw ConfigError("cluster: expected an array of agent indices");
            for (const auto& v : *c) {
                if (!v.is_number_unsigned() || v.get<std::size_t>() < 1 ||
                    v.get<std::size_t>() > sc.initial.n())
                    throw ConfigError("cluster: agent indices must lie in 1..n");
                sc.split_cluster.push_back(v.get<std::size_t>() - 1);
            }
        } else {
            const auto ordinal = detail::require_unsigned(j, "cluster_index", "");
            const auto part = find_clusters(sc.initial, 0.0);
            if (ordinal < 1 || ordinal > part.count())
                throw ConfigError("cluster_index: out of range");
            sc.split_cluster = part.clusters[ordinal - 1].members;
        }
    }
    return sc;
}

inline json to_json(const ModelRun& r) {
    return {{"model", to_string(r.model)},
            {"status", to_string(r.status)},
            {"final_time", r.final_time},
            {"event_count", r.event_count},
            {"original_agents_moved", r.original_agents_moved},
            {"partition_preserved", r.partition_preserved},
            {"baseline", to_json(r.baseline)},
            {"disrupted", to_json(r.disrupted)},
            {"final", to_json(r.final_class)}};
}

inline json to_json(const ExperimentReport& rep, const Scenario& sc) {
    json runs = json::array();
    for (const auto& r : rep.runs) runs.push_back(to_json(r));
    json conventions = {{"newcomer_index", "n+1"},
                        {"cluster_eps", sc.cluster_eps},
                        {"equilibrium_tol", sc.sim.conv_tol}};
    json out = {{"schema_version", kSchemaVersion},
                {"scenario", to_string(rep.scenario)},
                {"n", sc.initial.n()},
                {"k", sc.initial.k()},
                {"sim", to_json(sc.sim)},
                {"conventions", conventions},
                {"runs", runs}};
    if (sc.kind == ScenarioKind::perturb) {
        out["magnitude"] = sc.magnitude;
        out["seed"] = sc.seed;
    }
    if (sc.kind == ScenarioKind::add || sc.kind == ScenarioKind::contrast) out["newcomer"] = sc.newcomer;
    if (sc.kind == ScenarioKind::remove) out["removed_agent"] = sc.removed + 1;
    if (sc.kind == ScenarioKind::split) {
        json members = json::array();
        for (Index i : sc.split_cluster) members.push_back(i + 1);
        out["split_cluster"] = members;
        out["split_eps"] = sc.split_eps;
    }
    if (std::find(sc.models.begin(), sc.models.end(), ModelKind::metric) != sc.models.end() ||
        sc.kind == ScenarioKind::contrast)
        out["d"] = sc.metric.d;
    return out;
}

// ---------------------------------------------------------------------------
// SVG plot: one polyline per agent, optional event ticks along the time axis.

inline void write_svg_plot(std::ostream& os, std::span<const Sample> samples,
                           std::span<const SwitchEvent> events = {}) {
    if (samples.size() < 2) throw FormatError("plot needs a trajectory with at least 2 samples");
    const double width = 720, height = 440, left = 60, right = 20, top = 20, bottom = 50;
    const double t0 = samples.front().t, t1 = samples.back().t;
    double lo = samples.front().x.front(), hi = lo;
    for (const auto& s : samples)
        for (double v : s.x) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double t) { return left + pw * (t - t0) / (t1 - t0); };
    auto py = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

    std::ostringstream body;
    body << std::fixed << std::setprecision(2);
    static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    body << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
         << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    body << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
         << "\" fill=\"white\"/>\n";
    body << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
         << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (const auto& e : events) {
        if (e.t < t0 || e.t > t1) continue;
        body << "<line x1=\"" << px(e.t) << "\" y1=\"" << top + ph << "\" x2=\"" << px(e.t)
             << "\" y2=\"" << top + ph - 6 << "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
    }

    const std::size_t n = samples.front().x.size();
    for (std::size_t i = 0; i < n; ++i) {
        body << "<polyline fill=\"none\" stroke=\"" << palette[i % 10]
             << "\" stroke-width=\"1\" points=\"";
        for (std::size_t s = 0; s < samples.size(); ++s) {
            if (s) body << ' ';
            body << px(samples[s].t) << ',' << py(samples[s].x[i]);
        }
        body << "\"/>\n";
    }

    body << std::setprecision(3);
    body << "<text x=\"" << left << "\" y=\"" << height - 15 << "\" font-size=\"12\">" << t0 << "</text>\n";
    body << "<text x=\"" << left + pw << "\" y=\"" << height - 15
         << "\" font-size=\"12\" text-anchor=\"end\">" << t1 << "</text>\n";
    body << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
         << "\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";
    body << "<text x=\"" << left - 6 << "\" y=\"" << top + 10
         << "\" font-size=\"12\" text-anchor=\"end\">" << hi << "</text>\n";
    body << "<text x=\"" << left - 6 << "\" y=\"" << top + ph
         << "\" font-size=\"12\" text-anchor=\"end\">" << lo << "</text>\n";
    body << "<text x=\"15\" y=\"" << top + ph / 2 << "\" font-size=\"13\">x</text>\n";
    body << "</svg>\n";
    os << body.str();
}

}  // namespace knn_opinion
