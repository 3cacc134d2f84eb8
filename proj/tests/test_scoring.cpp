#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hvgrid/scoring.hpp"
#include "support/oracles.hpp"

using namespace hvgrid;
using Catch::Matchers::WithinAbs;

namespace {

// Builds a full raw table from a per-network base quality: better base means
// uniformly better values in every cell, with deterministic per-cell jitter.
RawPerformance synthetic_raw(const std::vector<std::pair<std::string, double>>& quality,
                             std::uint64_t seed = 17) {
    SplitMix64 rng(seed);
    RawPerformance raw;
    for (const auto& key : canonical_scenarios()) {
        for (const auto& [name, base] : quality) {
            RawCells cells;
            const double jitter = 0.01 * rng.uniform01();
            cells[0] = 0.8 - 0.1 * base + jitter;          // edges_lost_share (lower better)
            cells[1] = 50.0 + 10.0 * base - jitter;        // lcc (higher better)
            cells[2] = 0.6 - 0.08 * base + jitter;         // eff_drop (lower better)
            cells[3] = 0.3 - 0.05 * base + jitter;         // clustering_drop (lower better)
            raw[name][key] = cells;
        }
    }
    return raw;
}

} // namespace

TEST_CASE("standardize") {
    const std::map<std::string, double> xs{{"a", 1.0}, {"b", 2.0}, {"c", 3.0}};
    SECTION("higher better") {
        const auto z = standardize(xs, Orientation::higher_better);
        CHECK_THAT(z.at("a"), WithinAbs(-1.0, 1e-12));
        CHECK_THAT(z.at("b"), WithinAbs(0.0, 1e-12));
        CHECK_THAT(z.at("c"), WithinAbs(1.0, 1e-12));
    }
    SECTION("lower better negates") {
        const auto z = standardize(xs, Orientation::lower_better);
        CHECK_THAT(z.at("a"), WithinAbs(1.0, 1e-12));
        CHECK_THAT(z.at("c"), WithinAbs(-1.0, 1e-12));
    }
    SECTION("degenerate variance gives zeros") {
        const std::map<std::string, double> flat{{"a", 5.0}, {"b", 5.0}, {"c", 5.0}};
        for (const auto& [name, z] : standardize(flat, Orientation::higher_better))
            CHECK(z == 0.0);
    }
    SECTION("fewer than two networks is invalid") {
        CHECK_THROWS_AS(standardize({{"a", 1.0}}, Orientation::higher_better),
                        ValidationError);
    }
    SECTION("matches the naive oracle") {
        const std::map<std::string, double> vals{
            {"a", 3.2}, {"b", -1.5}, {"c", 0.7}, {"d", 9.9}};
        const auto z = standardize(vals, Orientation::lower_better);
        const auto oracle = testsupport::brute_zscores(vals, true);
        for (const auto& [name, v] : z) CHECK_THAT(v, WithinAbs(oracle.at(name), 1e-12));
    }
}

TEST_CASE("composite table identities") {
    const RawPerformance raw =
        synthetic_raw({{"AA", 0.0}, {"BB", 1.0}, {"CC", 2.0}, {"DD", 3.0}});
    const PerformanceTable table = composite(raw);

    SECTION("z columns sum to zero with unit sample variance") {
        for (const ScenarioKey& key : table.scenarios) {
            for (std::size_t mi = 0; mi < kPerfMetrics.size(); ++mi) {
                double sum = 0.0, ss = 0.0;
                for (const auto& name : table.networks) sum += table.z.at(name).at(key)[mi];
                const double mean = sum / static_cast<double>(table.networks.size());
                for (const auto& name : table.networks) {
                    const double z = table.z.at(name).at(key)[mi];
                    ss += (z - mean) * (z - mean);
                }
                CHECK_THAT(sum, WithinAbs(0.0, 1e-9));
                CHECK_THAT(ss / static_cast<double>(table.networks.size() - 1),
                           WithinAbs(1.0, 1e-9));
            }
        }
    }
    SECTION("composite splits into node and edge parts") {
        for (const auto& name : table.networks)
            CHECK_THAT(table.composite.at(name),
                       WithinAbs(table.node_composite.at(name) + table.edge_composite.at(name),
                                 1e-9));
    }
    SECTION("dominance shows up in the sign structure") {
        CHECK(table.composite.at("DD") > 0.0);
        CHECK(table.composite.at("AA") < 0.0);
        CHECK(table.composite.at("DD") > table.composite.at("CC"));
        CHECK(table.composite.at("CC") > table.composite.at("BB"));
    }
}

TEST_CASE("two-network dominance gives opposite composites") {
    const RawPerformance raw = synthetic_raw({{"AA", 0.0}, {"BB", 1.0}});
    const PerformanceTable table = composite(raw);
    CHECK(table.composite.at("BB") > 0.0);
    CHECK(table.composite.at("AA") < 0.0);
    CHECK_THAT(table.composite.at("BB") + table.composite.at("AA"), WithinAbs(0.0, 1e-9));
    // 40 cells, each z = +-1/sqrt(2) for two samples
    CHECK_THAT(table.composite.at("BB"), WithinAbs(40.0 / std::sqrt(2.0), 1e-9));
}

TEST_CASE("all-identical networks standardize to zero everywhere") {
    const RawPerformance raw =
        synthetic_raw({{"AA", 1.0}, {"BB", 1.0}, {"CC", 1.0}}, /*seed=*/0);
    // remove jitter by overwriting with constants
    RawPerformance flat = raw;
    for (auto& [name, cells] : flat)
        for (auto& [key, values] : cells)
            values = RawCells{0.5, 10.0, 0.2, 0.1};
    const PerformanceTable table = composite(flat);
    for (const auto& name : table.networks) {
        CHECK_THAT(table.composite.at(name), WithinAbs(0.0, 1e-12));
        CHECK(table.grouping_degenerate);
        CHECK(table.group.at(name) == PerfGroup::I);
    }
}

TEST_CASE("composite validates completeness") {
    RawPerformance raw = synthetic_raw({{"AA", 0.0}, {"BB", 1.0}, {"CC", 2.0}});
    SECTION("missing scenario is named") {
        raw["BB"].erase(ScenarioKey{RemovalKind::edge, 0.05});
        try {
            composite(raw);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("BB") != std::string::npos);
            CHECK(msg.find("edge_5pct") != std::string::npos);
        }
    }
    SECTION("missing non-clustering metric is named") {
        raw["CC"][ScenarioKey{RemovalKind::node, 0.01}][2] = std::nullopt;
        try {
            composite(raw);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("CC") != std::string::npos);
            CHECK(msg.find("eff_drop") != std::string::npos);
        }
    }
    SECTION("degenerate clustering cells are tolerated and neutral") {
        for (auto& [key, values] : raw["AA"]) values[3] = std::nullopt;
        const PerformanceTable table = composite(raw);
        for (const ScenarioKey& key : table.scenarios)
            CHECK(table.z.at("AA").at(key)[3] == 0.0);
    }
    SECTION("fewer than two networks") {
        RawPerformance single;
        single["AA"] = raw["AA"];
        CHECK_THROWS_AS(composite(single), ValidationError);
    }
}

TEST_CASE("affine invariance of composites and groups") {
    const std::vector<std::pair<std::string, double>> quality{
        {"AA", 0.0}, {"BB", 0.4}, {"CC", 1.7}, {"DD", 2.3}, {"EE", 3.1}};
    const RawPerformance raw = synthetic_raw(quality);
    RawPerformance scaled = raw;
    // metric-wise positive affine transforms
    const double a[4] = {3.0, 0.25, 12.0, 7.5};
    const double b[4] = {-1.0, 100.0, 0.4, -3.2};
    for (auto& [name, cells] : scaled)
        for (auto& [key, values] : cells)
            for (std::size_t mi = 0; mi < 4; ++mi)
                if (values[mi]) values[mi] = a[mi] * *values[mi] + b[mi];

    const PerformanceTable t1 = composite(raw);
    const PerformanceTable t2 = composite(scaled);
    for (const auto& name : t1.networks) {
        CHECK_THAT(t2.composite.at(name), WithinAbs(t1.composite.at(name), 1e-9));
        CHECK_THAT(t2.node_composite.at(name), WithinAbs(t1.node_composite.at(name), 1e-9));
        CHECK(t1.group.at(name) == t2.group.at(name));
        for (const ScenarioKey& key : t1.scenarios)
            for (std::size_t mi = 0; mi < 4; ++mi)
                CHECK_THAT(t2.z.at(name).at(key)[mi],
                           WithinAbs(t1.z.at(name).at(key)[mi], 1e-9));
    }
}

TEST_CASE("improving a raw cell never lowers the composite") {
    SplitMix64 rng(3);
    const RawPerformance raw =
        synthetic_raw({{"AA", 0.2}, {"BB", 1.1}, {"CC", 2.4}, {"DD", 0.9}});
    const PerformanceTable base = composite(raw);
    for (int trial = 0; trial < 30; ++trial) {
        RawPerformance bumped = raw;
        const auto scenarios = canonical_scenarios();
        const auto& key = scenarios[rng.bounded(scenarios.size())];
        const std::size_t mi = rng.bounded(4);
        auto it = bumped.begin();
        std::advance(it, static_cast<long>(rng.bounded(bumped.size())));
        auto& cell = it->second[key][mi];
        REQUIRE(cell.has_value());
        const double delta = 0.05 + rng.uniform01();
        const PerfMetric metric = kPerfMetrics[mi];
        *cell += metric_orientation(metric) == Orientation::higher_better ? delta : -delta;
        const PerformanceTable moved = composite(bumped);
        CHECK(moved.composite.at(it->first) >= base.composite.at(it->first) - 1e-9);
    }
}

TEST_CASE("group assignment") {
    SECTION("three well-separated clusters are recovered exactly") {
        std::map<std::string, double> node_c, edge_c;
        // cluster around (-10,-10), (0,0), (10,10)
        const struct {
            const char* name;
            double x, y;
        } pts[] = {{"A1", -10.2, -9.9}, {"A2", -9.8, -10.1}, {"A3", -10.0, -10.0},
                   {"B1", 0.1, -0.1},   {"B2", -0.2, 0.2},   {"B3", 0.0, 0.0},
                   {"C1", 10.1, 9.9},   {"C2", 9.9, 10.2},   {"C3", 10.0, 10.0}};
        for (const auto& p : pts) {
            node_c[p.name] = p.x;
            edge_c[p.name] = p.y;
        }
        const GroupAssignment g = group_assign(node_c, edge_c);
        REQUIRE_FALSE(g.degenerate);
        CHECK(g.group.at("A1") == PerfGroup::I);
        CHECK(g.group.at("A2") == PerfGroup::I);
        CHECK(g.group.at("A3") == PerfGroup::I);
        CHECK(g.group.at("B1") == PerfGroup::II);
        CHECK(g.group.at("B2") == PerfGroup::II);
        CHECK(g.group.at("B3") == PerfGroup::II);
        CHECK(g.group.at("C1") == PerfGroup::III);
        CHECK(g.group.at("C2") == PerfGroup::III);
        CHECK(g.group.at("C3") == PerfGroup::III);
    }
    SECTION("identical points degenerate to a single group") {
        std::map<std::string, double> node_c{{"a", 1.0}, {"b", 1.0}, {"c", 1.0}};
        std::map<std::string, double> edge_c{{"a", 2.0}, {"b", 2.0}, {"c", 2.0}};
        const GroupAssignment g = group_assign(node_c, edge_c);
        CHECK(g.degenerate);
        for (const auto& [name, grp] : g.group) CHECK(grp == PerfGroup::I);
    }
    SECTION("fewer than three networks is invalid") {
        std::map<std::string, double> two{{"a", 1.0}, {"b", 2.0}};
        CHECK_THROWS_AS(group_assign(two, two), ValidationError);
    }
    SECTION("relabeling networks permutes groups identically") {
        std::map<std::string, double> node_c, edge_c;
        SplitMix64 rng(8);
        for (int i = 0; i < 9; ++i) {
            const std::string name = "net" + std::to_string(i);
            node_c[name] = rng.uniform01() * 10.0 + (i % 3) * 30.0;
            edge_c[name] = rng.uniform01() * 10.0 + (i % 3) * 30.0;
        }
        const GroupAssignment g1 = group_assign(node_c, edge_c);
        std::map<std::string, double> node_r, edge_r;
        for (const auto& [name, v] : node_c) node_r["zz_" + name] = v;
        for (const auto& [name, v] : edge_c) edge_r["zz_" + name] = v;
        const GroupAssignment g2 = group_assign(node_r, edge_r);
        for (const auto& [name, grp] : g1.group) CHECK(g2.group.at("zz_" + name) == grp);
    }
    SECTION("group III has the highest mean composite by construction") {
        std::map<std::string, double> node_c, edge_c;
        SplitMix64 rng(21);
        for (int i = 0; i < 12; ++i) {
            const std::string name = "n" + std::to_string(i);
            const double base = (i % 3) * 15.0;
            node_c[name] = base + rng.uniform01();
            edge_c[name] = base + rng.uniform01();
        }
        const GroupAssignment g = group_assign(node_c, edge_c);
        std::map<PerfGroup, std::pair<double, int>> acc;
        for (const auto& [name, grp] : g.group) {
            acc[grp].first += node_c[name] + edge_c[name];
            acc[grp].second += 1;
        }
        REQUIRE(acc.size() == 3);
        const double m1 = acc[PerfGroup::I].first / acc[PerfGroup::I].second;
        const double m2 = acc[PerfGroup::II].first / acc[PerfGroup::II].second;
        const double m3 = acc[PerfGroup::III].first / acc[PerfGroup::III].second;
        CHECK(m1 < m2);
        CHECK(m2 < m3);
    }
}
