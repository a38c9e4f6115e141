#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "knn_opinion/perturbation.hpp"
#include "oracles.hpp"

using namespace knn_opinion;
using Catch::Matchers::WithinAbs;

namespace {

SimConfig quick() {
    SimConfig c;
    c.t_max = 60.0;
    c.record_every = 0.1;
    return c;
}

std::vector<Index> range(Index lo, Index hi) {
    std::vector<Index> v;
    for (Index i = lo; i < hi; ++i) v.push_back(i);
    return v;
}

}  // namespace

TEST_CASE("perturb", "[perturbation]") {
    const OpinionState s({0, 0, 0, 1, 1, 1}, 2);
    CHECK(perturb(s, 0.0, 42) == s);
    CHECK(perturb(s, 0.01, 42) == perturb(s, 0.01, 42));
    CHECK_FALSE(perturb(s, 0.01, 42) == perturb(s, 0.01, 43));
    const auto p = perturb(s, 0.01, 7);
    for (Index i = 0; i < s.n(); ++i) CHECK(std::abs(p[i] - s[i]) <= 0.01);
    CHECK_THROWS_AS(perturb(s, -1.0, 0), std::invalid_argument);
}

TEST_CASE("split_perturbation", "[perturbation]") {
    for (std::size_t k : {1u, 2u, 3u}) {
        CAPTURE(k);
        const std::size_t m = 2 * k + 2;
        const OpinionState s(std::vector<double>(m, 0.0), k);
        const auto split = split_perturbation(s, range(0, m), 0.01);
        for (Index i = 0; i < m; ++i) CHECK(split[i] == (i < k + 1 ? -0.01 : 0.01));
        CHECK(split_perturbation(s, range(0, m), 0.0) == s);

        const auto tr = integrate(split, quick());
        const auto part = find_clusters(tr.final_state(), 1e-6);
        REQUIRE(part.count() == 2);
        CHECK(part.sizes() == std::vector<std::size_t>{k + 1, k + 1});
        CHECK_THAT(part.clusters[0].value, WithinAbs(-0.01, 1e-9));
        CHECK_THAT(part.clusters[1].value, WithinAbs(0.01, 1e-9));

        const OpinionState small(std::vector<double>(2 * k + 1, 0.0), k);
        CHECK_THROWS_AS(split_perturbation(small, range(0, 2 * k + 1), 0.01), std::invalid_argument);
    }
    const OpinionState mixed({0, 0, 0, 1}, 1);
    CHECK_THROWS_AS(split_perturbation(mixed, range(0, 4), 0.01), std::invalid_argument);
}

TEST_CASE("add_agent", "[perturbation]") {
    const auto s = make_clusterization(std::vector<double>{0.0, 1.0}, std::vector<std::size_t>{3, 3}, 2);
    SECTION("newcomer on a cluster value is at rest and keeps the lowest priority") {
        const auto t = add_agent(s, 1.0);
        CHECK(t.n() == 7);
        CHECK(t[6] == 1.0);
        CHECK(compute_neighbors(t)[6] == std::vector<Index>{3, 4});
        for (double v : rhs(t)) CHECK(v == 0.0);
    }
    SECTION("newcomer between clusters leaves the originals untouched") {
        const auto tr = integrate(add_agent(s, 0.4), quick());
        for (Index i = 0; i < 6; ++i) CHECK(std::abs(tr.final_state()[i] - s[i]) < 1e-9);
    }
    SECTION("the metric model lets a nearby newcomer pull the cluster") {
        const auto t = add_agent(s, 0.4);
        const auto tr = integrate(MetricModel{{0.5}}, t.values(), quick());
        CHECK(std::abs(tr.final_state()[0] - s[0]) > 0.0);
    }
}

TEST_CASE("remove_agent", "[perturbation]") {
    for (std::size_t k : {1u, 2u, 3u}) {
        CAPTURE(k);
        const auto big = make_clusterization(std::vector<double>{0.0, 1.0},
                                             std::vector<std::size_t>{k + 2, k + 1}, k);
        const auto after_big = remove_agent(big, 0);
        for (double v : rhs(after_big)) CHECK(v == 0.0);

        const auto after_small = remove_agent(big, k + 2);
        CHECK(sup_norm(rhs(after_small)) > 0.0);
        CHECK(after_small.n() == 2 * k + 2);
        CHECK(after_small[0] == 0.0);
        CHECK(after_small[2 * k + 1] == 1.0);
    }
    const OpinionState s({0, 1, 2}, 2);
    CHECK_THROWS_AS(remove_agent(s, 0), InvalidState);
    CHECK_THROWS_AS(remove_agent(OpinionState({0, 1, 2}, 1), 3), std::out_of_range);

    // Dropping the lone agent of a non-clusterization equilibrium.
    const OpinionState tie({0, 1, 0, 1, 0, 1, 0.5}, 2);
    const auto rest = remove_agent(tie, 6);
    CHECK(classify_state(rest, 0, 0).kind == StateKind::clusterization);
}

TEST_CASE("metric_rhs", "[perturbation]") {
    const MetricParams mp{1.0};
    CHECK(metric_rhs(OpinionState({0, 1, 2.5}, 1), mp) == Velocity{0, 0, 0});
    CHECK(metric_rhs(OpinionState({0, 0.5, 2}, 1), mp) == Velocity{0.5, -0.5, 0});

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 20;
        std::vector<double> x(n);
        for (auto& v : x) v = trial % 2 ? u(rng) : std::floor(u(rng) * 4) / 4;
        const double d = 0.25 + 0.25 * static_cast<double>(rng() % 4);
        const auto v = metric_rhs(x, MetricParams{d});
        const auto expect = oracle::metric_rhs(x, d);
        for (Index i = 0; i < n; ++i) REQUIRE_THAT(v[i], WithinAbs(expect[i], 1e-12));
    }
    CHECK_THROWS_AS(metric_rhs(OpinionState({0, 1}, 1), MetricParams{0.0}), std::invalid_argument);
}

TEST_CASE("metric clusters closer than d merge", "[perturbation]") {
    const auto s = make_clusterization(std::vector<double>{0.0, 0.8}, std::vector<std::size_t>{2, 3}, 1);
    const auto tr = integrate(MetricModel{{1.0}}, s.values(), quick());
    CHECK(tr.status == RunStatus::converged);
    CHECK(find_clusters(tr.final_state(), 1e-6).count() == 1);
}

TEST_CASE("metric trajectories keep the opinion order", "[perturbation][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x0 = random_opinions(12, seed);
        const auto tr = integrate(MetricModel{{0.2}}, x0, quick());
        const auto order = sorted_order(x0);
        for (const auto& smp : tr.samples)
            for (std::size_t p = 0; p + 1 < order.size(); ++p)
                REQUIRE(smp.x[order[p]] - smp.x[order[p + 1]] <= 1e-12);
    }
}

TEST_CASE("run_experiment", "[perturbation]") {
    Scenario base;
    base.initial = make_clusterization(std::vector<double>{0.0, 1.5}, std::vector<std::size_t>{3, 3}, 2);
    base.sim = quick();
    base.metric.d = 1.0;

    SECTION("addition to a topological clusterization") {
        auto sc = base;
        sc.kind = ScenarioKind::add;
        sc.newcomer = 0.75;
        const auto rep = run_experiment(sc);
        REQUIRE(rep.runs.size() == 1);
        CHECK(rep.runs[0].partition_preserved);
        CHECK(rep.runs[0].original_agents_moved < sc.sim.conv_tol);
        CHECK(rep.runs[0].status == RunStatus::converged);
    }
    SECTION("metric addition within d of both clusters merges them") {
        auto sc = base;
        sc.kind = ScenarioKind::add;
        sc.models = {ModelKind::metric};
        sc.newcomer = 0.75;
        const auto rep = run_experiment(sc);
        REQUIRE(rep.runs.size() == 1);
        CHECK(rep.runs[0].baseline.partition.count() == 2);
        CHECK(rep.runs[0].final_class.partition.count() == 1);
        CHECK_FALSE(rep.runs[0].partition_preserved);
    }
    SECTION("contrast runs both models") {
        auto sc = base;
        sc.kind = ScenarioKind::contrast;
        sc.newcomer = 0.75;
        const auto rep = run_experiment(sc);
        REQUIRE(rep.runs.size() == 2);
        CHECK(rep.runs[0].model == ModelKind::topological);
        CHECK(rep.runs[0].original_agents_moved < 1e-8);
        CHECK(rep.runs[1].model == ModelKind::metric);
        CHECK(rep.runs[1].final_class.kind == StateKind::consensus);
    }
    SECTION("zero-magnitude perturbation equals a plain run") {
        auto sc = base;
        sc.initial = OpinionState(random_opinions(9, 3), 2);
        sc.kind = ScenarioKind::perturb;
        sc.magnitude = 0.0;
        const auto rep = run_experiment(sc);
        const auto plain = integrate(sc.initial, sc.sim);
        CHECK(rep.runs[0].trajectory.samples == plain.samples);
        CHECK(rep.runs[0].trajectory.events == plain.events);
    }
    SECTION("removal from clusters of k+2 keeps everyone at rest") {
        auto sc = base;
        sc.initial = make_clusterization(std::vector<double>{0.0, 1.5}, std::vector<std::size_t>{4, 4}, 2);
        sc.kind = ScenarioKind::remove;
        sc.removed = 5;
        const auto rep = run_experiment(sc);
        CHECK(rep.runs[0].disrupted.rhs_sup == 0.0);
        CHECK(rep.runs[0].original_agents_moved == 0.0);
        CHECK(rep.runs[0].partition_preserved);
    }
}

TEST_CASE("additions never move a clusterization", "[perturbation][property]") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 1 + rng() % 3;
        const std::size_t count = 1 + rng() % 4;
        std::vector<double> values;
        std::vector<std::size_t> sizes;
        for (std::size_t c = 0; c < count; ++c) {
            values.push_back(static_cast<double>(c) * 0.5 + 0.1 * u(rng));
            sizes.push_back(k + 1 + rng() % 3);
        }
        const auto s = make_clusterization(values, sizes, k);
        const auto tr = integrate(add_agent(s, u(rng)), quick());
        for (Index i = 0; i < s.n(); ++i) REQUIRE(tr.final_state()[i] == s[i]);
    }
}

TEST_CASE("removal leaves rhs zero iff every cluster keeps k+1 members", "[perturbation][property]") {
    for (std::size_t k = 1; k <= 3; ++k)
        for (std::size_t a = k + 1; a <= k + 3; ++a)
            for (std::size_t b = k + 1; b <= k + 3; ++b) {
                const auto s = make_clusterization(std::vector<double>{0.0, 1.0},
                                                   std::vector<std::size_t>{a, b}, k);
                for (Index r = 0; r < s.n(); ++r) {
                    const auto t = remove_agent(s, r);
                    const std::size_t left = r < a ? a - 1 : a, right = r < a ? b : b - 1;
                    const bool intact = left >= k + 1 && right >= k + 1;
                    REQUIRE((sup_norm(rhs(t)) == 0.0) == intact);
                }
            }
}

TEST_CASE("structural stability dichotomy", "[perturbation][property]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t k = 1 + seed % 3;
        const auto s = make_clusterization(std::vector<double>{0.0, 1.0, 2.5},
                                           std::vector<std::size_t>{k + 1, 2 * k + 1, k + 2}, k);
        Scenario sc;
        sc.initial = s;
        sc.kind = ScenarioKind::perturb;
        sc.magnitude = 1.0 / 100.0;
        sc.seed = seed;
        sc.sim = quick();
        const auto rep = run_experiment(sc);
        CHECK(rep.runs[0].partition_preserved);
        CHECK(rep.runs[0].status == RunStatus::converged);

        sc.initial = make_clusterization(std::vector<double>{0.0, 1.0},
                                         std::vector<std::size_t>{2 * k + 2, k + 1}, k);
        sc.kind = ScenarioKind::split;
        sc.split_cluster = range(0, 2 * k + 2);
        sc.split_eps = 0.01;
        const auto split = run_experiment(sc);
        CHECK_FALSE(split.runs[0].partition_preserved);
        CHECK(split.runs[0].final_class.partition.count() == 3);
    }
}
