#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "mstsim/common.hpp"
#include "mstsim/driver.hpp"
#include "mstsim/partition.hpp"
#include "mstsim/points.hpp"
#include "mstsim/rng.hpp"
#include "mstsim/union_find.hpp"

using namespace mstsim;

namespace {

Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
    Partition p = Partition::singletons(n);
    for (const auto& block : blocks) {
        int head = *std::min_element(block.begin(), block.end());
        for (int x : block) p.leader[x] = head;
    }
    return p;
}

Partition components_of(int n, const std::vector<std::pair<int, int>>& edges) {
    UnionFind uf(n);
    for (const auto& [u, v] : edges) uf.unite(u, v);
    Partition p;
    p.leader.resize(n);
    for (int i = 0; i < n; ++i) p.leader[i] = uf.find(i);
    p.canonicalize_smallest();
    return p;
}

LeveledSpanner empty_spanner(int top) {
    LeveledSpanner sp;
    sp.top = top;
    sp.stretch_bound = 1.0;
    sp.delta.resize(top + 1);
    return sp;
}

ShiftVector zero_shift(int d) {
    ShiftVector s;
    s.a.assign(d, 0.0);
    return s;
}

PointSet line_points(const std::vector<double>& xs) {
    PointSet ps;
    ps.n = static_cast<int>(xs.size());
    ps.d = 1;
    ps.coords = xs;
    return ps;
}

// Normalized points with snapped duplicates removed, as the pipeline sees them.
PointSet pipeline_points(int n, int d, uint64_t seed) {
    AlgorithmConfig config;
    validate_config(config, d);
    auto [snapped, rec] = normalize_aspect(gen_uniform(n, d, seed), config);
    std::set<std::vector<double>> seen;
    PointSet out;
    out.d = d;
    out.delta = snapped.delta;
    for (int i = 0; i < snapped.n; ++i) {
        std::vector<double> key(snapped.point(i), snapped.point(i) + d);
        if (seen.insert(key).second) {
            out.coords.insert(out.coords.end(), key.begin(), key.end());
            ++out.n;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("partition primitives") {
    Partition s = Partition::singletons(4);
    CHECK(s.component_count() == 4);
    CHECK(s.canonical());

    Partition one = Partition::one_block(4);
    CHECK(one.component_count() == 1);

    Partition messy;
    messy.leader = {2, 2, 2, 1};  // leader[3] = 1 but leader[1] != 1
    CHECK_FALSE(messy.canonical());

    Partition p = from_blocks(5, {{1, 2}, {3, 4}});
    p.leader[4] = 3;
    p.canonicalize_smallest();
    CHECK(p.leader == std::vector<int>{0, 1, 1, 3, 3});
}

TEST_CASE("merge_partitions takes the transitive closure") {
    Partition p = from_blocks(5, {{1, 2}});
    Partition q = from_blocks(5, {{2, 3}});
    Partition m = merge_partitions(p, q);
    CHECK(m.component_count() == 3);
    CHECK(m.leader[1] == m.leader[2]);
    CHECK(m.leader[2] == m.leader[3]);
    CHECK(m.leader[0] != m.leader[1]);
    CHECK(m.leader[4] != m.leader[1]);

    Partition same = merge_partitions(p, p);
    Partition canon = p;
    canon.canonicalize_smallest();
    CHECK(same.leader == canon.leader);

    Partition small = Partition::singletons(3);
    CHECK_THROWS_AS(merge_partitions(p, small), std::invalid_argument);
}

TEST_CASE("refines orders partitions by fineness") {
    Partition fine = Partition::singletons(6);
    Partition coarse = Partition::one_block(6);
    Partition mid = from_blocks(6, {{0, 1}, {2, 3}});
    CHECK(refines(fine, mid));
    CHECK(refines(fine, coarse));
    CHECK(refines(mid, coarse));
    CHECK_FALSE(refines(coarse, mid));
    CHECK(refines(mid, mid));

    for (int trial = 0; trial < 20; ++trial) {
        Partition a = Partition::singletons(10);
        Partition b = Partition::singletons(10);
        for (int i = 0; i < 10; ++i) {
            a.leader[i] = a.leader[rng_word(1, 500, trial, i, 0) % 10 < 5 ? i : 0];
            b.leader[i] = b.leader[rng_word(1, 501, trial, i, 0) % 10 < 5 ? i : 9];
        }
        a.canonicalize_smallest();
        b.canonicalize_smallest();
        Partition m = merge_partitions(a, b);
        CHECK(refines(a, m));
        CHECK(refines(b, m));
    }
}

TEST_CASE("compression round with forced coins merges the only pair") {
    Partition p = Partition::singletons(2);
    std::vector<std::pair<int, int>> graph = {{0, 1}};

    CompressionOutcome head_tail =
        leader_compression_round(p, graph, true, [](int leader) { return leader == 0; });
    CHECK(head_tail.partition.component_count() == 1);
    CHECK(head_tail.partition.leader == std::vector<int>{0, 0});
    REQUIRE(head_tail.merge_edges.size() == 1);
    CHECK(head_tail.merge_edges[0] == std::pair<int, int>{0, 1});

    CompressionOutcome tail_head =
        leader_compression_round(p, graph, true, [](int leader) { return leader == 1; });
    CHECK(tail_head.partition.leader == std::vector<int>{1, 1});
    CHECK(tail_head.merge_edges[0] == std::pair<int, int>{1, 0});

    CompressionOutcome both_heads =
        leader_compression_round(p, graph, true, [](int) { return true; });
    CHECK(both_heads.partition.component_count() == 2);
    CHECK(both_heads.merge_edges.empty());
}

TEST_CASE("compression round leaves empty graphs alone") {
    Partition p = from_blocks(6, {{0, 3}, {1, 4}});
    std::vector<std::pair<int, int>> none;
    CompressionOutcome out = leader_compression_round(p, none, true, [](int) { return false; });
    CHECK(out.partition.leader == p.leader);
    CHECK(out.merge_edges.empty());

    Partition broken;
    broken.leader = {1, 0};
    CHECK_THROWS_AS(leader_compression_round(broken, none, false, [](int) { return true; }),
                    std::invalid_argument);
}

TEST_CASE("compression rounds stay between the input and its graph closure") {
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 20;
        Partition p = Partition::singletons(n);
        std::vector<std::pair<int, int>> edges;
        for (int e = 0; e < 15; ++e) {
            int u = static_cast<int>(rng_word(2, 600, trial, e, 0) % n);
            int v = static_cast<int>(rng_word(2, 600, trial, e, 1) % n);
            if (u != v) edges.emplace_back(u, v);
        }
        Partition closure = merge_partitions(p, components_of(n, edges));

        Partition cur = p;
        UnionFind forest(n);
        for (int round = 0; round < 4; ++round) {
            CompressionOutcome out = leader_compression_round(
                cur, edges, true,
                [&](int leader) { return rng_coin(3, 601, trial, round, leader); });
            for (const auto& [x, y] : out.merge_edges) CHECK(forest.unite(x, y));
            cur = out.partition;
            CHECK(refines(p, cur));
            CHECK(refines(cur, closure));
        }
    }
}

TEST_CASE("checkpoint stage groups by cell and honors big-cell boundaries") {
    AlgorithmConfig config;
    validate_config(config, 1);

    // t = 16, so grouping cells have side 2 and big cells side 256/8 = 32.
    PointSet close = line_points({0.2, 0.5, 1.0});
    Partition single = part1(close, 4, zero_shift(1), empty_spanner(4), config);
    CHECK(single.component_count() == 1);

    PointSet split = line_points({0.5, 1.0, 100.0});
    Partition two = part1(split, 4, zero_shift(1), empty_spanner(4), config);
    CHECK(two.component_count() == 2);
    CHECK(two.leader[0] == two.leader[1]);
    CHECK(two.leader[2] != two.leader[0]);

    CHECK_THROWS_AS(part1(close, 3, zero_shift(1), empty_spanner(4), config),
                    std::invalid_argument);
}

TEST_CASE("checkpoint output is coarser than the spanner components") {
    AlgorithmConfig config;
    validate_config(config, 2);
    PointSet ps = pipeline_points(60, 2, 11);
    ShiftVector shift = make_shift(4, 2, ps.delta);
    const int j = 8;  // t = 256, a power of alpha

    AlgorithmConfig sp_config = config;
    sp_config.strategy = SpannerStrategy::cell_leader;
    LeveledSpanner sp = build_leveled_spanner(ps, shift, sp_config, j);

    Partition out = part1(ps, j, shift, sp, config);
    std::vector<std::pair<int, int>> all;
    sp.for_each_edge_upto(j, [&](int u, int v, long long) { all.emplace_back(u, v); });
    CHECK(refines(components_of(ps.n, all), out));
}

TEST_CASE("intermediate stage merges within the upper partition only") {
    AlgorithmConfig config;
    validate_config(config, 1);
    PointSet ps = line_points({0.0, 1.0, 50.0});

    Partition lo = Partition::singletons(3);
    Partition hi = from_blocks(3, {{0, 1}});

    // No spanner edges: everything is complete and the lower partition survives.
    Partition unchanged = part2(ps, 2, empty_spanner(4), lo, hi, config);
    CHECK(unchanged.leader == lo.leader);

    // One edge joins 0 and 1 (by compression or by the incomplete merge); 2 stays alone.
    LeveledSpanner one_edge = empty_spanner(4);
    one_edge.delta[2] = {{0, 1}};
    Partition joined = part2(ps, 2, one_edge, lo, hi, config);
    CHECK(joined.component_count() == 2);
    CHECK(joined.leader[0] == joined.leader[1]);

    CHECK_THROWS_AS(part2(ps, 4, empty_spanner(4), lo, hi, config), std::invalid_argument);

    Partition not_refining = from_blocks(3, {{1, 2}});
    CHECK_THROWS_AS(part2(ps, 2, empty_spanner(4), not_refining, hi, config),
                    consistency_error);
}

TEST_CASE("edge generation returns exactly the component difference") {
    AlgorithmConfig config;
    validate_config(config, 1);
    PointSet ps = line_points({0.0, 1.0, 2.0});

    Partition p = from_blocks(3, {{0, 1, 2}});
    CHECK(part3(ps, 1, empty_spanner(1), p, p, config).empty());

    Partition singles = Partition::singletons(3);
    Partition block = Partition::one_block(3);
    auto star = part3(ps, 1, empty_spanner(1), singles, block, config);
    REQUIRE(star.size() == 2);
    for (const auto& e : star) {
        CHECK(e.stage == 0);
        CHECK(e.u == 0);
    }
    std::set<int> others{star[0].v, star[1].v};
    CHECK(others == std::set<int>{1, 2});

    CHECK_THROWS_AS(part3(ps, 1, empty_spanner(1), block, singles, config), consistency_error);
}

TEST_CASE("edge generation across a random instance is a per-level forest") {
    AlgorithmConfig config;
    validate_config(config, 2);
    PointSet ps = pipeline_points(50, 2, 23);
    ShiftVector shift = make_shift(6, 2, ps.delta);
    const int j = 8;

    AlgorithmConfig sp_config = config;
    sp_config.strategy = SpannerStrategy::exact_threshold;
    LeveledSpanner sp = build_leveled_spanner(ps, shift, sp_config, j);

    Partition prev = part1(ps, 4, shift, sp, config);
    Partition target = part1(ps, 8, shift, sp, config);
    // The level-16 components live inside side-32 cells, which is exactly the level-256
    // initial grouping, so independent checkpoint builds still nest.
    REQUIRE(refines(prev, target));

    auto edges = part3(ps, j, sp, prev, target, config);
    CHECK(static_cast<int>(edges.size()) ==
          prev.component_count() - target.component_count());
    UnionFind uf(ps.n);
    for (const auto& e : edges) {
        CHECK(e.u != e.v);
        CHECK(uf.unite(e.u, e.v));
        CHECK(target.leader[e.u] == target.leader[e.v]);
        bool tagged = e.stage == 0 || (e.stage >= 1 && e.stage <= config.h);
        CHECK(tagged);
    }
}

TEST_CASE("full hierarchy construction keeps every level consistent") {
    AlgorithmConfig config;
    validate_config(config, 2);
    PointSet ps = pipeline_points(40, 2, 7);
    ShiftVector shift = make_shift(config.seed, 2, ps.delta);
    int H = top_checkpoint_H(config, ps.delta, 2);
    int top = top_exponent(H, alpha_g(config.alpha));

    LeveledSpanner sp = build_leveled_spanner(ps, shift, config, top);
    PartitionHierarchy hier = run_pipeline(ps, shift, sp, config, top);

    REQUIRE(hier.top == top);
    REQUIRE(static_cast<int>(hier.levels.size()) == top + 1);
    CHECK(hier.levels[0].component_count() == ps.n);
    CHECK(hier.levels[top].component_count() == 1);

    long long total_edges = 0;
    for (int j = 1; j <= top; ++j) {
        CHECK(refines(hier.levels[j - 1], hier.levels[j]));
        CHECK(hier.levels[j - 1].component_count() -
                  static_cast<int>(hier.edges[j].size()) ==
              hier.levels[j].component_count());
        total_edges += static_cast<long long>(hier.edges[j].size());
    }
    CHECK(total_edges == ps.n - 1);

    CHECK_THROWS_AS(run_pipeline(ps, shift, sp, config, top - 1), std::invalid_argument);
}
