#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "knn_opinion/analysis.hpp"
#include "knn_opinion/perturbation.hpp"
#include "oracles.hpp"

using namespace knn_opinion;

namespace {

const std::vector<double> kTieEquilibrium{0, 1, 0, 1, 0, 1, 0.5};

// Opinions 0, 2/5, 3/5, 1 scaled by 5 so that every value is a double.
std::vector<double> tie_free_equilibrium() { return {0, 0, 0, 0, 0, 2, 2, 3, 3, 5, 5, 5, 5, 5}; }

ClusterPartition partition_of_sizes(std::vector<std::size_t> sizes) {
    std::vector<double> values;
    for (std::size_t c = 0; c < sizes.size(); ++c) values.push_back(static_cast<double>(c));
    std::vector<double> x;
    for (std::size_t c = 0; c < sizes.size(); ++c) x.insert(x.end(), sizes[c], values[c]);
    return find_clusters(x, 0.0);
}

// Visits every vector in {0, ..., levels-1}^n.
template <class F>
void for_each_lattice_state(std::size_t n, int levels, F&& f) {
    std::vector<int> digits(n, 0);
    std::vector<double> x(n);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) x[i] = digits[i];
        f(x);
        std::size_t pos = 0;
        while (pos < n && ++digits[pos] == levels) digits[pos++] = 0;
        if (pos == n) return;
    }
}

}  // namespace

TEST_CASE("find_clusters", "[analysis]") {
    SECTION("all equal") {
        const auto p = find_clusters(std::vector<double>{0, 0, 0}, 0.0);
        REQUIRE(p.count() == 1);
        CHECK(p.clusters[0].members == std::vector<Index>{0, 1, 2});
        CHECK(p.clusters[0].value == 0.0);
    }
    SECTION("tie-break equilibrium") {
        const auto p = find_clusters(kTieEquilibrium, 0.0);
        REQUIRE(p.count() == 3);
        CHECK(p.clusters[0].members == std::vector<Index>{0, 2, 4});
        CHECK(p.clusters[0].value == 0.0);
        CHECK(p.clusters[1].members == std::vector<Index>{6});
        CHECK(p.clusters[1].value == 0.5);
        CHECK(p.clusters[2].members == std::vector<Index>{1, 3, 5});
        CHECK(p.clusters[2].value == 1.0);
    }
    SECTION("tolerance joins a tiny gap only") {
        const auto p = find_clusters(std::vector<double>{0, 1e-10, 1}, 1e-6);
        REQUIRE(p.count() == 2);
        CHECK(p.clusters[0].members == std::vector<Index>{0, 1});
        CHECK(p.clusters[1].members == std::vector<Index>{2});
    }
    SECTION("negative tolerance is rejected") {
        CHECK_THROWS_AS(find_clusters(std::vector<double>{0, 1}, -1.0), std::invalid_argument);
    }
}

TEST_CASE("is_equilibrium", "[analysis]") {
    CHECK(is_equilibrium(OpinionState({3, 3, 3, 7, 7, 7}, 2), 0.0));
    CHECK(is_equilibrium(OpinionState(kTieEquilibrium, 2), 0.0));
    CHECK(is_equilibrium(OpinionState(tie_free_equilibrium(), 4), 0.0));
    CHECK_FALSE(is_equilibrium(OpinionState({0, 1, 3}, 1), 1.999));
    CHECK(is_equilibrium(OpinionState({0, 1, 3}, 1), 2.0));
}

TEST_CASE("classify_state", "[analysis]") {
    CHECK(classify_state(OpinionState({0.25, 0.25, 0.25, 0.25}, 2), 0, 0).kind == StateKind::consensus);

    const auto tie = classify_state(OpinionState(kTieEquilibrium, 2), 0, 0);
    CHECK(tie.kind == StateKind::equilibrium_non_clusterization);
    CHECK(tie.partition.sizes() == std::vector<std::size_t>{3, 1, 3});

    CHECK(classify_state(OpinionState({0, 0, 0, 1, 1, 1}, 2), 0, 0).kind == StateKind::clusterization);
    CHECK(classify_state(OpinionState(tie_free_equilibrium(), 4), 0, 0).kind ==
          StateKind::equilibrium_non_clusterization);

    const auto moving = classify_state(OpinionState({0, 1, 3}, 1), 0, 0);
    CHECK(moving.kind == StateKind::non_equilibrium);
    CHECK(moving.partition.count() == 3);
    CHECK(moving.rhs_sup == 2.0);
}

TEST_CASE("stability predicates", "[analysis]") {
    for (std::size_t k : {1u, 2u, 3u}) {
        CAPTURE(k);
        CHECK(is_structurally_stable(partition_of_sizes({k + 1, k + 1}), k));
        CHECK_FALSE(is_structurally_stable(partition_of_sizes({2 * k + 2}), k));
        CHECK(is_structurally_stable(partition_of_sizes({2 * k + 1, 2 * k + 1}), k));

        CHECK(is_removal_stable(partition_of_sizes({k + 2, k + 2}), k));
        CHECK_FALSE(is_removal_stable(partition_of_sizes({k + 1, k + 2}), k));
        CHECK(is_removal_stable(partition_of_sizes({k + 2}), k));

        CHECK_THROWS_AS(is_structurally_stable(partition_of_sizes({k, k + 1}), k), std::invalid_argument);
        CHECK_THROWS_AS(is_removal_stable(partition_of_sizes({k + 1, k}), k), std::invalid_argument);
    }
}

TEST_CASE("diameter", "[analysis]") {
    CHECK(diameter(OpinionState({4, 4, 4}, 1)) == 0.0);
    CHECK(diameter(OpinionState({0, 1, 3}, 1)) == 3.0);
    CHECK(diameter(OpinionState(kTieEquilibrium, 2)) == 1.0);
}

TEST_CASE("clusterizations are exact equilibria", "[analysis][property]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 1 + rng() % 4;
        const std::size_t clusters = 1 + rng() % 5;
        std::vector<double> values;
        std::vector<std::size_t> sizes;
        for (std::size_t c = 0; c < clusters; ++c) {
            double v;
            do v = u(rng);
            while (std::find(values.begin(), values.end(), v) != values.end());
            values.push_back(v);
            sizes.push_back(k + 1 + rng() % 4);
        }
        const auto s = make_clusterization(values, sizes, k);
        REQUIRE(is_equilibrium(s, 0.0));
        const auto kind = classify_state(s, 0.0, 0.0).kind;
        REQUIRE((kind == StateKind::clusterization || kind == StateKind::consensus));
    }
}

TEST_CASE("relabelling an opposite-side tie can change the classification", "[analysis]") {
    // k = 2: agent 7 at 1/2 ties between 0 and 1. With this labelling it takes
    // one neighbor from each side; sorted, it takes both from the left.
    const OpinionState s({0, 1, 0, 1, 0, 1, 0.5}, 2);
    CHECK(classify_state(s, 0.0, 0.0).kind == StateKind::equilibrium_non_clusterization);
    const auto c = canonicalize(s);
    CHECK(classify_state(c.state, 0.0, 0.0).kind == StateKind::non_equilibrium);
}

TEST_CASE("exact equilibria on small lattices", "[analysis][property]") {
    // Extreme agents of an equilibrium sit in clusters of at least k+1; for
    // k = 1 every equilibrium is a clusterization.
    std::size_t equilibria = 0, non_clusterizations = 0;
    for (std::size_t n = 3; n <= 7; ++n) {
        for_each_lattice_state(n, 4, [&](const std::vector<double>& x) {
            for (std::size_t k = 1; k < n; ++k) {
                const OpinionState s(x, k);
                if (!is_equilibrium(s, 0.0)) continue;
                ++equilibria;
                const auto sc = classify_state(s, 0.0, 0.0);
                REQUIRE(sc.partition.clusters.front().size() >= k + 1);
                REQUIRE(sc.partition.clusters.back().size() >= k + 1);
                if (sc.kind == StateKind::equilibrium_non_clusterization) {
                    ++non_clusterizations;
                    REQUIRE(k > 1);
                }
            }
        });
    }
    CHECK(equilibria > 0);
    CHECK(non_clusterizations > 0);
}

TEST_CASE("classification ignores relabelling and translation", "[analysis][property]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 3 + rng() % 9;
        const std::size_t k = 1 + rng() % (n - 1);
        std::vector<double> x(n);
        for (auto& v : x) v = static_cast<double>(rng() % 5) * 0.5;
        const double shift = static_cast<double>(static_cast<int>(rng() % 17) - 8) * 0.25;
        const OpinionState s(x, k);

        const auto base = classify_state(s, 0.0, 0.0);
        const auto c = canonicalize(s);
        const auto relabelled = classify_state(c.state, 0.0, 0.0);
        REQUIRE(relabelled.partition.sizes() == base.partition.sizes());
        if (!oracle::has_cross_side_tie(x)) REQUIRE(relabelled.kind == base.kind);

        std::vector<double> moved = x;
        for (auto& v : moved) v += shift;
        const auto translated = classify_state(OpinionState(moved, k), 0.0, 0.0);
        REQUIRE(translated.kind == base.kind);
        REQUIRE(translated.partition.same_membership(base.partition));

        // eps = 0 groups by exact equality.
        for (const auto& cl : base.partition.clusters)
            for (Index i : cl.members) REQUIRE(x[i] == x[cl.members.front()]);
        for (std::size_t a = 0; a + 1 < base.partition.count(); ++a)
            REQUIRE(base.partition.clusters[a].value < base.partition.clusters[a + 1].value);
    }
}
