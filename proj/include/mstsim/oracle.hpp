#pragma once

#include <utility>
#include <vector>

#include "mstsim/partition.hpp"
#include "mstsim/points.hpp"
#include "mstsim/union_find.hpp"

namespace mstsim {

// Exact quadratic-time references the pipeline is checked against. Guarded to n <= 5000.
constexpr int kOracleMaxN = 5000;

struct OracleTree {
    std::vector<std::pair<int, int>> edges;
    double weight = 0.0;
};

// Prim over all pairs.
OracleTree exact_mst(const PointSet& points);

// Kruskal over all pairs; independent of exact_mst, used to cross-check it.
double exact_mst_weight_kruskal(const PointSet& points);

// Connected components of the graph joining pairs at distance <= t.
Partition threshold_components(const PointSet& points, double t);

// Kruskal over an explicit weighted edge list; throws on disconnected input, naming the
// component count.
double graph_mst(int n, const std::vector<std::pair<std::pair<int, int>, double>>& edges);

// S = sum over scales 2^i of 2^(i+1) * (|P_{2^i}| - |P_{2^(i+1)}|), thresholds running
// from 1 up to the first scale with a single component. Satisfies MST <= S <= 2*MST for
// min pairwise distance >= 1.
double component_sum(const PointSet& points);

// Number of nonempty grid cells at each level 2^j (diagnostic for the cell-count bound).
long long nonempty_cell_count(const PointSet& points, double level, const ShiftVector& shift);

// True iff every pair within distance t in the same level-cell is joined by a path of at
// most two edges of `edges` (brute force).
bool two_hop_within_cells(const PointSet& points, double t, double cell_level,
                          const ShiftVector& shift,
                          const std::vector<std::pair<int, int>>& edges);

}  // namespace mstsim
