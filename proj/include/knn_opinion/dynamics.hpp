// dynamics.hpp - the opinion vector field, frozen-interaction time stepping and
// trajectory integration with switch localization.
//
// Between switches the field is affine in x, so a step evaluates every stage
// with the interaction map computed at the step's start. This realizes the
// right-derivative (semi-classical) solution: on a switching instant the
// trajectory leaves along the field of the map that holds at that instant.
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "state.hpp"
#include "topology.hpp"

namespace knn_opinion {

/// Any rule that maps a state to per-agent interaction lists. The field is then
/// v_i = sum over l in lists[i] of (x_l - x_i).
template <class M>
concept InteractionModel = requires(const M& m, std::span<const double> x) {
    { m.interactions(x) } -> std::same_as<NeighborMap>;
    { m.name() } -> std::convertible_to<std::string>;
};

/// k nearest neighbors, lower index wins ties.
struct TopologicalModel {
    std::size_t k = 1;

    NeighborMap interactions(std::span<const double> x) const { return compute_neighbors(x, k); }
    std::string name() const { return "topological"; }
};

namespace detail {

/// Exact running sum kept as non-overlapping partials (Shewchuk). The result is
/// zero exactly when the real sum of the inputs is zero.
class ExactSum {
public:
    void clear() { partials_.clear(); }

    void add(double x) {
        std::size_t used = 0;
        for (double y : partials_) {
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials_[used++] = lo;
            x = hi;
        }
        partials_.resize(used);
        partials_.push_back(x);
    }

    double value() const {
        double s = 0.0;
        for (double p : partials_) s += p;
        return s;
    }

private:
    std::vector<double> partials_;
};

}  // namespace detail

/// v_i = sum_{l in lists[i]} (x_l - x_i), summed exactly and rounded once, so
/// equilibria of the stored doubles evaluate to exact zeros.
inline void apply_field(std::span<const double> x, const NeighborMap& nm, std::span<double> v) {
    detail::ExactSum acc;
    for (Index i = 0; i < x.size(); ++i) {
        acc.clear();
        for (Index l : nm[i]) {
            acc.add(x[l]);
            acc.add(-x[i]);
        }
        v[i] = acc.value();
    }
}

inline Velocity apply_field(std::span<const double> x, const NeighborMap& nm) {
    Velocity v(x.size());
    apply_field(x, nm, v);
    return v;
}

inline Velocity rhs(const OpinionState& s) { return apply_field(s.opinions(), compute_neighbors(s)); }

/// d/dt (x_i - x_j) assembled from the neighbor-set differences:
///   sum_{l in N_i \ N_j} (x_l - x_i) - sum_{m in N_j \ N_i} (x_m - x_j) - |N_i n N_j| (x_i - x_j)
inline double pairwise_derivative(const OpinionState& s, Index i, Index j) {
    if (i == j) throw std::invalid_argument("pairwise_derivative requires distinct agents");
    if (i >= s.n() || j >= s.n()) throw std::out_of_range("agent index out of range");

    const auto nm = compute_neighbors(s);
    auto ni = nm[i], nj = nm[j];
    std::sort(ni.begin(), ni.end());
    std::sort(nj.begin(), nj.end());
    std::vector<Index> only_i, only_j, both;
    std::set_difference(ni.begin(), ni.end(), nj.begin(), nj.end(), std::back_inserter(only_i));
    std::set_difference(nj.begin(), nj.end(), ni.begin(), ni.end(), std::back_inserter(only_j));
    std::set_intersection(ni.begin(), ni.end(), nj.begin(), nj.end(), std::back_inserter(both));

    const auto x = s.opinions();
    double sum_i = 0.0, sum_j = 0.0;
    for (Index l : only_i) sum_i += x[l] - x[i];
    for (Index m : only_j) sum_j += x[m] - x[j];
    return sum_i - sum_j - static_cast<double>(both.size()) * (x[i] - x[j]);
}

/// Stable ascending reordering. `sigma[i]` is the new (0-based) position of
/// agent i, so sorted[sigma[i]] == x[i].
struct Canonical {
    OpinionState state;
    std::vector<Index> sigma;
};

inline Canonical canonicalize(const OpinionState& s) {
    const auto order = sorted_order(s.opinions());
    std::vector<double> sorted(s.n());
    std::vector<Index> sigma(s.n());
    for (Index p = 0; p < order.size(); ++p) {
        sorted[p] = s[order[p]];
        sigma[order[p]] = p;
    }
    return {OpinionState(std::move(sorted), s.k()), std::move(sigma)};
}

enum class Scheme { rk4, euler };

inline int scheme_order(Scheme s) { return s == Scheme::rk4 ? 4 : 1; }

/// One step of size h with the interaction map held fixed.
inline std::vector<double> frozen_step(std::span<const double> x, const NeighborMap& nm, double h,
                                       Scheme scheme) {
    const std::size_t n = x.size();
    std::vector<double> out(x.begin(), x.end());
    if (scheme == Scheme::euler) {
        const auto v = apply_field(x, nm);
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + h * v[i];
        return out;
    }

    std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
    apply_field(x, nm, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k1[i];
    apply_field(stage, nm, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k2[i];
    apply_field(stage, nm, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + h * k3[i];
    apply_field(stage, nm, k4);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Thrown when a step would invert a strict opinion ordering.
class StepRejected : public std::runtime_error {
public:
    StepRejected(const std::string& what, Index lower, Index upper)
        : std::runtime_error(what), lower_agent(lower), upper_agent(upper) {}
    Index lower_agent;
    Index upper_agent;
};

inline constexpr double kOrderTolerance = 1e-12;

/// Returns the first adjacent pair (in the sorted order of `before`) whose
/// strict ordering is inverted in `after` by more than `tol`.
inline std::optional<std::pair<Index, Index>> find_order_violation(std::span<const Index> order,
                                                                   std::span<const double> before,
                                                                   std::span<const double> after,
                                                                   double tol) {
    for (std::size_t p = 0; p + 1 < order.size(); ++p) {
        const Index a = order[p], b = order[p + 1];
        if (before[a] < before[b] && after[a] - after[b] > tol) return std::pair{a, b};
    }
    return std::nullopt;
}

/// Single frozen-map step of the topological model.
inline OpinionState step(const OpinionState& s, double h, Scheme scheme = Scheme::rk4) {
    if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
    const auto nm = compute_neighbors(s);
    auto next = frozen_step(s.opinions(), nm, h, scheme);
    const auto order = sorted_order(s.opinions());
    if (auto bad = find_order_violation(order, s.opinions(), next, kOrderTolerance))
        throw StepRejected("step inverts the order of agents " + std::to_string(bad->first + 1) +
                               " and " + std::to_string(bad->second + 1),
                           bad->first, bad->second);
    return OpinionState(std::move(next), s.k());
}

struct SimConfig {
    double step = 1e-3;
    double t_max = 100.0;
    double conv_tol = 1e-9;
    double stall_window = 1.0;
    double record_every = 0.01;  // 0 records every accepted step
    Scheme scheme = Scheme::rk4;
    int refine_levels = 10;  // h_min = step / 2^refine_levels
    double order_tol = kOrderTolerance;

    double h_min() const { return std::ldexp(step, -refine_levels); }

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("sim.step must be > 0");
        if (!(t_max > 0.0)) throw std::invalid_argument("sim.t_max must be > 0");
        if (!(conv_tol > 0.0)) throw std::invalid_argument("sim.conv_tol must be > 0");
        if (!(stall_window >= 0.0)) throw std::invalid_argument("sim.stall_window must be >= 0");
        if (!(record_every >= 0.0)) throw std::invalid_argument("sim.record_every must be >= 0");
        if (refine_levels < 0) throw std::invalid_argument("sim.refine_levels must be >= 0");
    }
};

/// An agent's interaction set changed. Lists are in ascending index order.
struct SwitchEvent {
    double t = 0.0;
    Index agent = 0;
    std::vector<Index> before;
    std::vector<Index> after;

    friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

struct Sample {
    double t = 0.0;
    std::vector<double> x;

    friend bool operator==(const Sample&, const Sample&) = default;
};

enum class RunStatus { converged, horizon_reached };

inline const char* to_string(RunStatus s) {
    return s == RunStatus::converged ? "converged" : "horizon_reached";
}

struct Trajectory {
    std::string model;
    std::size_t k = 0;  // 0 for models without a neighbor count
    std::vector<Sample> samples;
    std::vector<SwitchEvent> events;
    RunStatus status = RunStatus::horizon_reached;
    std::size_t accepted_steps = 0;
    std::size_t switch_instants = 0;
    std::size_t unlocalized_switches = 0;  // accepted at a full step, see integrate()

    double final_time() const { return samples.back().t; }
    const std::vector<double>& final_state() const { return samples.back().x; }
};

/// Integration gave up: a strict ordering inverted even at the minimum step.
/// Carries the trajectory computed so far.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, Trajectory partial)
        : std::runtime_error(what), trajectory(std::move(partial)) {}
    Trajectory trajectory;
};

inline constexpr int kMaxLocalizationMisses = 2;

namespace detail {

// Interaction sets with each list in ascending index order. Reordering inside
// a list does not change the field, so switches compare this form.
inline NeighborMap as_sets(NeighborMap nm) {
    for (auto& l : nm.lists) std::sort(l.begin(), l.end());
    return nm;
}

inline void log_switches(double t, const NeighborMap& before, const NeighborMap& after,
                         std::vector<SwitchEvent>& events) {
    for (Index i = 0; i < before.size(); ++i)
        if (before[i] != after[i]) events.push_back({t, i, before[i], after[i]});
}

}  // namespace detail

/// Integrates from t = 0. A step whose end state has a different interaction
/// map is bisected until it no longer crosses or reaches h_min, where the
/// switch is accepted and logged. Converged means sup|F| < conv_tol with no
/// switch during the trailing stall_window.
template <InteractionModel Model>
Trajectory integrate(const Model& model, std::vector<double> x, const SimConfig& cfg,
                     std::size_t k_for_report = 0) {
    cfg.validate();
    require_finite(x);

    Trajectory traj;
    traj.model = model.name();
    traj.k = k_for_report;
    traj.samples.push_back({0.0, x});

    const double h_full = cfg.step;
    const double h_min = cfg.h_min();
    const double t_slack = 0.5 * h_min;

    NeighborMap nm = detail::as_sets(model.interactions(x));
    double t = 0.0;
    double last_switch = 0.0;
    double bracket = 0.0;  // > 0 while localizing a switch known to lie within `bracket`
    int misses = 0;        // consecutive localizations that ended without a switch
    std::size_t next_record = 1;

    auto converged_now = [&] {
        if (t - last_switch < cfg.stall_window - t_slack) return false;
        return sup_norm(apply_field(x, nm)) < cfg.conv_tol;
    };
    auto record = [&](bool force) {
        bool due = cfg.record_every == 0.0 ||
                   t >= static_cast<double>(next_record) * cfg.record_every - t_slack;
        if (due && cfg.record_every > 0.0)
            while (static_cast<double>(next_record) * cfg.record_every - t_slack <= t) ++next_record;
        if ((due || force) && traj.samples.back().t < t) traj.samples.push_back({t, x});
    };

    if (converged_now()) {
        traj.status = RunStatus::converged;
        return traj;
    }

    while (t < cfg.t_max) {
        double h = bracket > 0.0 ? (bracket <= h_min ? bracket : 0.5 * bracket) : h_full;
        h = std::min(h, cfg.t_max - t);
        const bool at_floor = h <= h_min;

        auto x_new = frozen_step(x, nm, h, cfg.scheme);
        const auto order = sorted_order(x);
        if (auto bad = find_order_violation(order, x, x_new, cfg.order_tol)) {
            if (!at_floor) {
                bracket = h;
                continue;
            }
            std::ostringstream msg;
            msg.precision(17);
            msg << "order of agents " << bad->first + 1 << " and " << bad->second + 1
                << " inverts at t=" << t << " even at minimum step " << h_min;
            throw IntegrationError(msg.str(), std::move(traj));
        }
        NeighborMap next = detail::as_sets(model.interactions(x_new));
        const bool switched = next != nm;
        // A crossing that vanished twice under bisection is a rounding-level
        // near-tie; it is accepted where it is seen.
        const bool give_up = bracket == 0.0 && misses >= kMaxLocalizationMisses;
        if (switched && !at_floor && !give_up) {
            bracket = h;
            continue;
        }

        t += h;
        x = std::move(x_new);
        ++traj.accepted_steps;
        if (switched) {
            detail::log_switches(t, nm, next, traj.events);
            ++traj.switch_instants;
            if (give_up) ++traj.unlocalized_switches;
            nm = std::move(next);
            last_switch = t;
            bracket = 0.0;
            misses = 0;
        } else if (bracket > 0.0) {
            if (at_floor) {
                bracket = 0.0;
                ++misses;
            } else {
                bracket -= h;
            }
        } else {
            misses = 0;
        }

        if (converged_now()) {
            traj.status = RunStatus::converged;
            record(true);
            return traj;
        }
        record(false);
    }
    record(true);
    traj.status = RunStatus::horizon_reached;
    return traj;
}

inline Trajectory integrate(const OpinionState& s0, const SimConfig& cfg) {
    return integrate(TopologicalModel{s0.k()}, s0.values(), cfg, s0.k());
}

}  // namespace knn_opinion
