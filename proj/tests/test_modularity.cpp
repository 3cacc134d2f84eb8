#include <catch2/catch_amalgamated.hpp>

#include "hvgrid/modularity.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace hvgrid;
using namespace testsupport;
using Catch::Matchers::WithinAbs;

TEST_CASE("single-community evaluation is exactly zero") {
    for (std::uint64_t seed : {1ull, 9ull, 27ull}) {
        const GridGraph g = random_multigraph(seed, 12, 30);
        const std::vector<std::uint32_t> one(g.node_count(), 0);
        CHECK(modularity_value(g, one) == 0.0);
    }
    // also with parallel circuits and a self-loop present
    const GridGraph g = GridGraph::build(
        {{"a", "b", 110, "1"}, {"a", "b", 110, "2"}, {"b", "c", 110, "3"}, {"c", "c", 110, "4"}});
    const std::vector<std::uint32_t> one(g.node_count(), 0);
    CHECK(modularity_value(g, one) == 0.0);
}

TEST_CASE("evaluation agrees with the double-loop oracle") {
    for (std::uint64_t seed : {3ull, 8ull, 21ull}) {
        const GridGraph g = random_multigraph(seed, 10, 22);
        SplitMix64 rng(seed + 1);
        std::vector<std::uint32_t> comm(g.node_count());
        for (auto& c : comm) c = static_cast<std::uint32_t>(rng.bounded(3));
        CHECK_THAT(modularity_value(g, comm),
                   WithinAbs(brute_modularity_value(g, comm), 1e-12));
    }
}

TEST_CASE("two disjoint triangles optimize to Q = 0.5") {
    const GridGraph g = two_triangles();
    // Exhaustive oracle over all 203 partitions of six nodes.
    CHECK_THAT(brute_best_modularity(g), WithinAbs(0.5, 1e-12));

    const ModularityResult r = modularity(g);
    CHECK_THAT(r.q, WithinAbs(0.5, 1e-12));
    // The partition is the two triangles.
    CHECK(r.community[0] == r.community[1]);
    CHECK(r.community[1] == r.community[2]);
    CHECK(r.community[3] == r.community[4]);
    CHECK(r.community[4] == r.community[5]);
    CHECK(r.community[0] != r.community[3]);
}

TEST_CASE("optimizer stays within the exhaustive optimum and above zero") {
    for (std::uint64_t seed : {2ull, 5ull, 12ull, 31ull}) {
        const GridGraph g = random_connected_graph(seed, 6, 3);
        const ModularityResult r = modularity(g);
        CHECK(r.q >= 0.0);
        CHECK(r.q <= brute_best_modularity(g) + 1e-12);
        CHECK_THAT(r.q, WithinAbs(modularity_value(g, r.community), 1e-15));
    }
}

TEST_CASE("optimizer is deterministic") {
    const GridGraph g = random_connected_graph(44, 40, 25);
    const ModularityResult a = modularity(g);
    const ModularityResult b = modularity(g);
    CHECK(a.q == b.q);
    CHECK(a.community == b.community);
}

TEST_CASE("modularity of an edgeless graph is undefined") {
    CHECK_THROWS_AS(modularity(GridGraph::build({})), UndefinedMetricError);
}

TEST_CASE("community labels are compact and canonical") {
    const ModularityResult r = modularity(two_triangles());
    CHECK(r.community[0] == 0); // smallest node id seeds label 0
    std::uint32_t max_label = 0;
    for (auto c : r.community) max_label = std::max(max_label, c);
    CHECK(max_label == 1);
}
