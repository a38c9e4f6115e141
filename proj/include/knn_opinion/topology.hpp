// topology.hpp - k-nearest-neighbor sets with lower-index tie breaking, the
// induced directed interaction graph, and its structural queries.
#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "state.hpp"

namespace knn_opinion {

/// Per-agent neighbor lists. For the topological model each list holds exactly
/// k indices ordered by (distance, index), so `lists[i][0]` is the closest
/// agent to i.
struct NeighborMap {
    std::vector<std::vector<Index>> lists;

    std::size_t size() const { return lists.size(); }
    const std::vector<Index>& operator[](Index i) const { return lists[i]; }

    friend bool operator==(const NeighborMap&, const NeighborMap&) = default;
};

/// Agent indices ordered by (opinion, index).
inline std::vector<Index> sorted_order(std::span<const double> x) {
    std::vector<Index> order(x.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return x[a] < x[b]; });
    return order;
}

namespace detail {

// Selects the k nearest agents of the agent sitting at sorted position `pos`.
// Walks outwards from `pos` on both sides; distances are monotone along each
// side, so all candidates at the current minimum distance form a contiguous
// run on each side. Such a run is a tie tier and is resolved by index.
inline void select_neighbors(std::span<const double> x, std::span<const Index> order,
                             std::size_t pos, std::size_t k, std::vector<Index>& out,
                             std::vector<Index>& tier) {
    const Index self = order[pos];
    const double xi = x[self];
    std::ptrdiff_t left = static_cast<std::ptrdiff_t>(pos) - 1;
    std::size_t right = pos + 1;
    const std::size_t n = order.size();

    out.clear();
    while (out.size() < k) {
        const bool has_left = left >= 0;
        const bool has_right = right < n;
        const double dl = has_left ? xi - x[order[static_cast<std::size_t>(left)]] : 0.0;
        const double dr = has_right ? x[order[right]] - xi : 0.0;
        double dmin;
        if (has_left && has_right)
            dmin = std::min(dl, dr);
        else
            dmin = has_left ? dl : dr;

        tier.clear();
        while (left >= 0 && xi - x[order[static_cast<std::size_t>(left)]] == dmin)
            tier.push_back(order[static_cast<std::size_t>(left--)]);
        while (right < n && x[order[right]] - xi == dmin) tier.push_back(order[right++]);

        std::sort(tier.begin(), tier.end());
        const std::size_t take = std::min(tier.size(), k - out.size());
        out.insert(out.end(), tier.begin(), tier.begin() + static_cast<std::ptrdiff_t>(take));
    }
}

}  // namespace detail

/// k nearest neighbors of every agent. Distances are compared exactly; equal
/// distances go to the lower index. Runs in O(n log n + n k) outside of large
/// tie tiers.
inline NeighborMap compute_neighbors(std::span<const double> x, std::size_t k) {
    ModelParams{x.size(), k}.validate();
    require_finite(x);

    const auto order = sorted_order(x);
    NeighborMap nm;
    nm.lists.resize(x.size());
    std::vector<Index> tier;
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        detail::select_neighbors(x, order, pos, k, nm.lists[order[pos]], tier);
    return nm;
}

inline NeighborMap compute_neighbors(const OpinionState& s) {
    return compute_neighbors(s.opinions(), s.k());
}

/// Directed graph G(x): edge (i, j) for every j in N_i.
struct InteractionGraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<Index, Index>> edges;  // sorted, unique

    std::vector<std::vector<Index>> out_adjacency() const {
        std::vector<std::vector<Index>> adj(vertex_count);
        for (auto [from, to] : edges) adj[from].push_back(to);
        return adj;
    }

    std::size_t out_degree(Index v) const {
        return static_cast<std::size_t>(std::count_if(
            edges.begin(), edges.end(), [v](const auto& e) { return e.first == v; }));
    }

    bool has_edge(Index from, Index to) const {
        return std::binary_search(edges.begin(), edges.end(), std::pair{from, to});
    }
};

inline InteractionGraph build_graph(const NeighborMap& nm) {
    InteractionGraph g;
    g.vertex_count = nm.size();
    for (Index i = 0; i < nm.size(); ++i)
        for (Index j : nm[i]) g.edges.emplace_back(i, j);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

/// Vertex sets of the weakly connected components, each sorted, ordered by
/// smallest member.
inline std::vector<std::vector<Index>> weak_components(const InteractionGraph& g) {
    std::vector<Index> parent(g.vertex_count);
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto [a, b] : g.edges) {
        const Index ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    std::vector<std::vector<Index>> comps;
    std::vector<std::ptrdiff_t> slot(g.vertex_count, -1);
    for (Index v = 0; v < g.vertex_count; ++v) {
        const Index r = find(v);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::ptrdiff_t>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<std::size_t>(slot[r])].push_back(v);
    }
    return comps;
}

/// Structure of G(x) for k = 1. `deltas[p]` is the sorted-position offset from
/// the agent at sorted position p to its closest agent.
struct K1StructureReport {
    std::vector<std::vector<Index>> components;
    std::vector<std::pair<Index, Index>> circuits;  // one per component, (lower, higher)
    std::vector<std::ptrdiff_t> deltas;
    bool valid = false;
};

inline K1StructureReport validate_k1_structure(const OpinionState& s) {
    if (s.k() != 1) throw InvalidState("validate_k1_structure requires k = 1");

    const auto nm = compute_neighbors(s);
    const auto g = build_graph(nm);
    const std::size_t n = s.n();

    K1StructureReport rep;
    rep.components = weak_components(g);

    const auto order = sorted_order(s.opinions());
    std::vector<std::size_t> pos_of(n);
    for (std::size_t p = 0; p < n; ++p) pos_of[order[p]] = p;
    rep.deltas.resize(n);
    for (std::size_t p = 0; p < n; ++p)
        rep.deltas[p] = static_cast<std::ptrdiff_t>(pos_of[nm[order[p]][0]]) -
                        static_cast<std::ptrdiff_t>(p);

    auto closest = [&](Index v) { return nm[v][0]; };
    rep.valid = true;
    for (const auto& comp : rep.components) {
        std::vector<std::pair<Index, Index>> mutual;
        for (Index v : comp) {
            const Index w = closest(v);
            if (v < w && closest(w) == v) mutual.emplace_back(v, w);
        }
        if (mutual.size() != 1) {
            rep.valid = false;
            rep.circuits.emplace_back(n, n);
            continue;
        }
        const auto circuit = mutual.front();
        rep.circuits.push_back(circuit);

        // Out-degree is one, so the successor chain from v either meets the
        // circuit within n hops or never does.
        for (Index v : comp) {
            Index cur = v;
            bool reached = false;
            for (std::size_t hop = 0; hop <= n && !reached; ++hop) {
                reached = cur == circuit.first || cur == circuit.second;
                cur = closest(cur);
            }
            if (!reached) rep.valid = false;
        }
    }
    return rep;
}

}  // namespace knn_opinion
