#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mstsim/geometry.hpp"
#include "mstsim/points.hpp"

namespace mstsim {

// Undirected edges stored as (u,v) with u < v, sorted, no duplicates.
struct EdgeSet {
    std::vector<std::pair<int, int>> edges;

    void add(int u, int v);
    void finalize();  // sort + dedupe; call after a batch of add()
    bool contains(int u, int v) const;
    size_t size() const { return edges.size(); }
};

struct SpannerBuildStats {
    long long fallback_cells = 0;  // sampled-leader cells rebuilt with cell-leader
};

// One level in isolation: every pair within distance t inside a big cell (level
// alpha^(k+1)/beta) ends up joined by at most two output edges; no edge crosses big
// cells or exceeds stretch_bound(strategy)*t.
EdgeSet build_spanner_level(const PointSet& points, double t, const ShiftVector& shift,
                            const AlgorithmConfig& config, SpannerStrategy strategy,
                            SpannerBuildStats* stats = nullptr);

double strategy_stretch_bound(SpannerStrategy s);

// Levels t = 2^j for j = 0..top_exponent, kept as first-appearance deltas; the edge set
// at level t is the union of deltas at all t' <= t, so monotonicity holds by
// construction.
struct LeveledSpanner {
    int top = -1;  // largest exponent j
    double stretch_bound = 1.0;
    std::vector<std::vector<std::pair<int, int>>> delta;  // delta[j]: edges first seen at 2^j

    double level_value(int j) const { return std::ldexp(1.0, j); }

    // Materialized union for level exponent j (small-n tooling and tests).
    std::vector<std::pair<int, int>> level_union(int j) const;

    // Visit every edge of the level-2^j set once, with its global edge id. Ids are
    // assigned by (delta level, position), so they are stable across levels and threads.
    void for_each_edge_upto(int j, const std::function<void(int u, int v, long long id)>& fn) const;

    long long edge_count_upto(int j) const;
};

// Union-accumulate raw per-level builds; keys must be exactly j = 0..top.
LeveledSpanner accumulate_levels(const std::map<int, EdgeSet>& per_level, double stretch_bound);

// Pair -> smallest level containing it (weights are the level values t).
struct SpannerWeightedGraph {
    std::vector<std::pair<std::pair<int, int>, double>> edges;  // ((u,v), weight), sorted
};

SpannerWeightedGraph spanner_weight_graph(const LeveledSpanner& spanner);

// Builds all levels for the configured schedule and accumulates them.
LeveledSpanner build_leveled_spanner(const PointSet& points, const ShiftVector& shift,
                                     const AlgorithmConfig& config, int top_exponent,
                                     SpannerBuildStats* stats = nullptr);

// Dump format: lines "t u v" sorted by (t, u, v), one line per (level, edge) pair of the
// accumulated sets.
void write_spanner_dump(const std::string& path, const LeveledSpanner& spanner);

}  // namespace mstsim
