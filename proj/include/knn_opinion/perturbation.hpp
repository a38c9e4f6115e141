// perturbation.hpp - disruption experiments on clusterizations and the
// metric bounded-confidence baseline they are contrasted with.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "dynamics.hpp"
#include "random.hpp"
#include "state.hpp"
#include "topology.hpp"

namespace knn_opinion {

struct MetricParams {
    double d = 1.0;

    void validate() const {
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::invalid_argument("metric radius d must be finite and > 0");
    }
};

/// Bounded confidence: agent i listens to every l != i with |x_l - x_i| < d.
/// Lists are in ascending index order.
struct MetricModel {
    MetricParams params;

    NeighborMap interactions(std::span<const double> x) const {
        params.validate();
        const auto order = sorted_order(x);
        NeighborMap nm;
        nm.lists.resize(x.size());
        std::size_t lo = 0, hi = 0;
        for (std::size_t p = 0; p < order.size(); ++p) {
            const double xi = x[order[p]];
            while (xi - x[order[lo]] >= params.d) ++lo;
            if (hi < p) hi = p;
            while (hi + 1 < order.size() && x[order[hi + 1]] - xi < params.d) ++hi;
            auto& list = nm.lists[order[p]];
            for (std::size_t q = lo; q <= hi; ++q)
                if (q != p) list.push_back(order[q]);
            std::sort(list.begin(), list.end());
        }
        return nm;
    }
    std::string name() const { return "metric"; }
};

inline Velocity metric_rhs(std::span<const double> x, const MetricParams& mp) {
    return apply_field(x, MetricModel{mp}.interactions(x));
}

inline Velocity metric_rhs(const OpinionState& s, const MetricParams& mp) {
    return metric_rhs(s.opinions(), mp);
}

/// Independent uniform noise in [-magnitude, magnitude] on every opinion.
inline OpinionState perturb(const OpinionState& s, double magnitude, std::uint64_t seed) {
    if (!(magnitude >= 0.0)) throw std::invalid_argument("perturbation magnitude must be >= 0");
    if (magnitude == 0.0) return s;
    UniformSource src(seed);
    auto x = s.values();
    for (auto& v : x) v += src.uniform(-magnitude, magnitude);
    return OpinionState(std::move(x), s.k());
}

/// Pushes the ceil(m/2) lowest-index members of an equal-opinion cluster of
/// m >= 2k+2 agents down by eps and the rest up by eps.
inline OpinionState split_perturbation(const OpinionState& s, std::vector<Index> cluster, double eps) {
    const std::size_t k = s.k();
    if (cluster.size() <= 2 * k + 1)
        throw std::invalid_argument("split needs a cluster of at least 2k+2 = " +
                                    std::to_string(2 * k + 2) + " agents, got " +
                                    std::to_string(cluster.size()));
    std::sort(cluster.begin(), cluster.end());
    if (std::adjacent_find(cluster.begin(), cluster.end()) != cluster.end())
        throw std::invalid_argument("split cluster lists an agent twice");
    for (Index i : cluster) {
        if (i >= s.n()) throw std::out_of_range("split cluster member out of range");
        if (s[i] != s[cluster.front()])
            throw std::invalid_argument("split cluster members must share one opinion");
    }
    if (!(eps >= 0.0)) throw std::invalid_argument("split offset must be >= 0");

    auto x = s.values();
    const std::size_t lower = (cluster.size() + 1) / 2;
    for (std::size_t r = 0; r < cluster.size(); ++r) x[cluster[r]] += r < lower ? -eps : eps;
    return OpinionState(std::move(x), k);
}

/// Appends a newcomer as agent n+1 (the lowest tie priority).
inline OpinionState add_agent(const OpinionState& s, double opinion) {
    auto x = s.values();
    x.push_back(opinion);
    return OpinionState(std::move(x), s.k());
}

/// Drops one agent; the others keep their relative order.
inline OpinionState remove_agent(const OpinionState& s, Index agent) {
    if (agent >= s.n()) throw std::out_of_range("removed agent out of range");
    if (s.n() - 1 <= s.k())
        throw InvalidState("removal would leave n - 1 = " + std::to_string(s.n() - 1) +
                           " agents, not more than k = " + std::to_string(s.k()));
    auto x = s.values();
    x.erase(x.begin() + static_cast<std::ptrdiff_t>(agent));
    return OpinionState(std::move(x), s.k());
}

/// Opinions of `sizes[c]` agents at `values[c]`, agents numbered cluster by
/// cluster.
inline OpinionState make_clusterization(std::span<const double> values,
                                        std::span<const std::size_t> sizes, std::size_t k) {
    if (values.size() != sizes.size())
        throw std::invalid_argument("cluster values and sizes differ in length");
    std::vector<double> x;
    for (std::size_t c = 0; c < values.size(); ++c) x.insert(x.end(), sizes[c], values[c]);
    return OpinionState(std::move(x), k);
}

// ---------------------------------------------------------------------------
// Scenarios

enum class ScenarioKind { perturb, split, add, remove, contrast };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::perturb: return "perturb";
        case ScenarioKind::split: return "split";
        case ScenarioKind::add: return "add";
        case ScenarioKind::remove: return "remove";
        case ScenarioKind::contrast: return "contrast";
    }
    return "unknown";
}

enum class ModelKind { topological, metric };

inline const char* to_string(ModelKind m) {
    return m == ModelKind::topological ? "topological" : "metric";
}

/// A disruption applied to `initial`, then integrated under each model.
/// `contrast` is an addition run under both models.
struct Scenario {
    ScenarioKind kind = ScenarioKind::add;
    OpinionState initial;
    std::vector<ModelKind> models{ModelKind::topological};
    MetricParams metric;

    double magnitude = 0.0;       // perturb
    std::uint64_t seed = 0;       // perturb
    std::vector<Index> split_cluster;  // split
    double split_eps = 0.01;      // split
    double newcomer = 0.0;        // add, contrast
    Index removed = 0;            // remove

    SimConfig sim;
    double cluster_eps = 1e-6;
};

struct ModelRun {
    ModelKind model = ModelKind::topological;
    StateClass baseline;   // undisrupted state
    StateClass disrupted;  // right after the disruption
    StateClass final_class;
    double original_agents_moved = 0.0;
    bool partition_preserved = false;
    std::size_t event_count = 0;
    RunStatus status = RunStatus::horizon_reached;
    double final_time = 0.0;
    Trajectory trajectory;
};

struct ExperimentReport {
    ScenarioKind scenario = ScenarioKind::add;
    std::vector<ModelRun> runs;
};

namespace detail {

// Position of each original agent in the disrupted state, or none if removed.
inline std::vector<std::optional<Index>> survivor_map(const Scenario& sc) {
    std::vector<std::optional<Index>> map(sc.initial.n());
    for (Index i = 0; i < map.size(); ++i) {
        if (sc.kind == ScenarioKind::remove) {
            if (i != sc.removed) map[i] = i < sc.removed ? i : i - 1;
        } else {
            map[i] = i;
        }
    }
    return map;
}

// Whether two partitions group the surviving original agents identically.
inline bool same_grouping(const ClusterPartition& before, std::size_t n_before,
                          const ClusterPartition& after, std::size_t n_after,
                          const std::vector<std::optional<Index>>& map) {
    const auto lb = before.labels(n_before);
    const auto la = after.labels(n_after);
    std::vector<Index> alive;
    for (Index i = 0; i < map.size(); ++i)
        if (map[i]) alive.push_back(i);
    for (std::size_t a = 0; a < alive.size(); ++a)
        for (std::size_t b = a + 1; b < alive.size(); ++b) {
            const Index i = alive[a], j = alive[b];
            if ((lb[i] == lb[j]) != (la[*map[i]] == la[*map[j]])) return false;
        }
    return true;
}

inline OpinionState disrupt(const Scenario& sc) {
    switch (sc.kind) {
        case ScenarioKind::perturb: return perturb(sc.initial, sc.magnitude, sc.seed);
        case ScenarioKind::split: return split_perturbation(sc.initial, sc.split_cluster, sc.split_eps);
        case ScenarioKind::add:
        case ScenarioKind::contrast: return add_agent(sc.initial, sc.newcomer);
        case ScenarioKind::remove: return remove_agent(sc.initial, sc.removed);
    }
    throw std::logic_error("unhandled scenario kind");
}

inline StateClass classify_for(ModelKind m, const Scenario& sc, std::span<const double> x,
                               std::size_t k) {
    const double tol = sc.sim.conv_tol;
    if (m == ModelKind::topological)
        return classify(x, apply_field(x, compute_neighbors(x, k)), k + 1, sc.cluster_eps, tol);
    // Any set of clusters pairwise at least d apart is at rest under the
    // metric model, so single agents count as clusters there.
    return classify(x, metric_rhs(x, sc.metric), 1, sc.cluster_eps, tol);
}

}  // namespace detail

inline ExperimentReport run_experiment(const Scenario& sc) {
    sc.sim.validate();
    std::vector<ModelKind> models = sc.models;
    if (sc.kind == ScenarioKind::contrast) models = {ModelKind::topological, ModelKind::metric};
    if (models.empty()) throw std::invalid_argument("scenario lists no models");

    const OpinionState disrupted = detail::disrupt(sc);
    const auto map = detail::survivor_map(sc);
    const std::size_t k = sc.initial.k();

    ExperimentReport rep;
    rep.scenario = sc.kind;
    for (ModelKind m : models) {
        ModelRun run;
        run.model = m;
        run.baseline = detail::classify_for(m, sc, sc.initial.opinions(), k);
        run.disrupted = detail::classify_for(m, sc, disrupted.opinions(), k);

        run.trajectory = m == ModelKind::topological
                             ? integrate(TopologicalModel{k}, disrupted.values(), sc.sim, k)
                             : integrate(MetricModel{sc.metric}, disrupted.values(), sc.sim, k);
        const auto& xf = run.trajectory.final_state();
        run.final_class = detail::classify_for(m, sc, xf, k);
        run.status = run.trajectory.status;
        run.final_time = run.trajectory.final_time();
        run.event_count = run.trajectory.events.size();

        for (Index i = 0; i < map.size(); ++i)
            if (map[i])
                run.original_agents_moved =
                    std::max(run.original_agents_moved, std::abs(xf[*map[i]] - sc.initial[i]));
        run.partition_preserved = detail::same_grouping(run.baseline.partition, sc.initial.n(),
                                                        run.final_class.partition, xf.size(), map);
        rep.runs.push_back(std::move(run));
    }
    return rep;
}

}  // namespace knn_opinion
