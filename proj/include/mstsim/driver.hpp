#pragma once

#include <vector>

#include "mstsim/euler.hpp"
#include "mstsim/geometry.hpp"
#include "mstsim/partition.hpp"
#include "mstsim/points.hpp"
#include "mstsim/runtime.hpp"
#include "mstsim/tsp.hpp"

namespace mstsim {

struct RunResult {
    AlgorithmConfig config;  // validated copy (beta filled in)
    NormalizeRecord norm;
    int compact_n = 0;       // points left after collapsing snapped duplicates
    int duplicates = 0;
    int top_exponent = 0;
    SpanningTree tree;       // original ids, weights in original units
    EulerTour tour;          // original ids
    HamiltonianCycle cycle;  // original ids, cost in original units
    std::vector<int> level_components;
    int spanner_fallbacks = 0;
    HierarchyTourStats tour_stats;
    RoundLedger ledger;
};

// Intermediate state, captured on request for inspection and invariant suites.
struct RunInternals {
    PointSet compact;  // snapped representatives fed to the pipeline
    ShiftVector shift;
    LeveledSpanner spanner;
    PartitionHierarchy hierarchy;
};

// Normalize, collapse snapped duplicates, build the leveled spanner and partition
// hierarchy, extract the tour, reattach duplicates as leaves, and shortcut.
RunResult run_full(const PointSet& points, const AlgorithmConfig& config,
                   RunInternals* capture = nullptr);

}  // namespace mstsim
