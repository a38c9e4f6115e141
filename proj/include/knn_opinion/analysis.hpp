// analysis.hpp - cluster extraction, state classification and the stability
// predicates for clusterizations.
#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "state.hpp"
#include "topology.hpp"

namespace knn_opinion {

struct Cluster {
    double value = 0.0;            // mean opinion of the members
    std::vector<Index> members;    // ascending agent indices

    std::size_t size() const { return members.size(); }
};

/// Clusters ordered by ascending opinion.
struct ClusterPartition {
    std::vector<Cluster> clusters;
    double eps = 0.0;

    std::size_t count() const { return clusters.size(); }

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s;
        for (const auto& c : clusters) s.push_back(c.size());
        return s;
    }

    std::size_t min_size() const {
        std::size_t m = clusters.empty() ? 0 : clusters.front().size();
        for (const auto& c : clusters) m = std::min(m, c.size());
        return m;
    }

    /// Cluster id of every agent.
    std::vector<std::size_t> labels(std::size_t n) const {
        std::vector<std::size_t> lab(n, 0);
        for (std::size_t c = 0; c < clusters.size(); ++c)
            for (Index i : clusters[c].members) lab[i] = c;
        return lab;
    }

    /// Same grouping of agents, opinion values ignored.
    bool same_membership(const ClusterPartition& other) const {
        if (count() != other.count()) return false;
        for (std::size_t c = 0; c < count(); ++c)
            if (clusters[c].members != other.clusters[c].members) return false;
        return true;
    }
};

/// Single-linkage grouping on the sorted opinions: neighbors in sorted order
/// whose gap is at most `eps` share a cluster.
inline ClusterPartition find_clusters(std::span<const double> x, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("cluster tolerance must be >= 0");
    ClusterPartition p;
    p.eps = eps;
    const auto order = sorted_order(x);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const Index i = order[pos];
        if (pos == 0 || x[i] - x[order[pos - 1]] > eps) p.clusters.emplace_back();
        p.clusters.back().members.push_back(i);
    }
    for (auto& c : p.clusters) {
        double sum = 0.0;
        for (Index i : c.members) sum += x[i];
        c.value = sum / static_cast<double>(c.size());
        std::sort(c.members.begin(), c.members.end());
    }
    return p;
}

inline ClusterPartition find_clusters(const OpinionState& s, double eps) {
    return find_clusters(s.opinions(), eps);
}

inline double diameter(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("diameter of an empty state");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

inline double diameter(const OpinionState& s) { return diameter(s.opinions()); }

inline bool is_equilibrium(const OpinionState& s, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("equilibrium tolerance must be >= 0");
    return sup_norm(rhs(s)) <= tol;
}

enum class StateKind { consensus, clusterization, equilibrium_non_clusterization, non_equilibrium };

inline const char* to_string(StateKind k) {
    switch (k) {
        case StateKind::consensus: return "consensus";
        case StateKind::clusterization: return "clusterization";
        case StateKind::equilibrium_non_clusterization: return "equilibrium_non_clusterization";
        case StateKind::non_equilibrium: return "non_equilibrium";
    }
    return "unknown";
}

struct StateClass {
    StateKind kind = StateKind::non_equilibrium;
    ClusterPartition partition;
    double rhs_sup = 0.0;
};

/// Classification given the field values and the minimum cluster size that
/// makes a cluster self-sustaining (k + 1 for the topological model).
inline StateClass classify(std::span<const double> x, std::span<const double> velocity,
                           std::size_t min_cluster, double eps, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("equilibrium tolerance must be >= 0");
    StateClass sc;
    sc.partition = find_clusters(x, eps);
    sc.rhs_sup = sup_norm(velocity);
    if (sc.partition.count() == 1)
        sc.kind = StateKind::consensus;
    else if (sc.partition.min_size() >= min_cluster)
        sc.kind = StateKind::clusterization;
    else if (sc.rhs_sup <= tol)
        sc.kind = StateKind::equilibrium_non_clusterization;
    else
        sc.kind = StateKind::non_equilibrium;
    return sc;
}

inline StateClass classify_state(const OpinionState& s, double eps, double tol) {
    const auto v = rhs(s);
    return classify(s.opinions(), v, s.k() + 1, eps, tol);
}

namespace detail {

inline void require_clusterization(const ClusterPartition& p, std::size_t k) {
    for (const auto& c : p.clusters)
        if (c.size() < k + 1)
            throw std::invalid_argument("partition is not a clusterization: cluster of size " +
                                        std::to_string(c.size()) + " < k+1 = " +
                                        std::to_string(k + 1));
}

}  // namespace detail

/// Small perturbations re-converge to the same clusters iff every cluster has
/// at most 2k+1 members.
inline bool is_structurally_stable(const ClusterPartition& p, std::size_t k) {
    detail::require_clusterization(p, k);
    return std::all_of(p.clusters.begin(), p.clusters.end(),
                       [k](const Cluster& c) { return c.size() <= 2 * k + 1; });
}

/// Removing any one agent leaves the others at rest iff every cluster has at
/// least k+2 members.
inline bool is_removal_stable(const ClusterPartition& p, std::size_t k) {
    detail::require_clusterization(p, k);
    return std::all_of(p.clusters.begin(), p.clusters.end(),
                       [k](const Cluster& c) { return c.size() >= k + 2; });
}

}  // namespace knn_opinion
