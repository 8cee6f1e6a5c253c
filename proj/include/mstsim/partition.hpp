#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mstsim/geometry.hpp"
#include "mstsim/points.hpp"
#include "mstsim/spanner.hpp"

namespace mstsim {

// Partition of ids 0..n-1 by a leader array with leader[leader[x]] == leader[x].
struct Partition {
    std::vector<int> leader;

    int n() const { return static_cast<int>(leader.size()); }
    static Partition singletons(int n);
    static Partition one_block(int n);
    int component_count() const;
    bool canonical() const;  // leader fixed-point invariant

    // Re-point every component to its smallest member id.
    void canonicalize_smallest();
};

// Finest common coarsening (components of the union of both partitions' forests).
Partition merge_partitions(const Partition& p, const Partition& q);

// True iff every p-block lies inside one q-block (p is the finer partition).
bool refines(const Partition& p, const Partition& q);

struct CompressionOutcome {
    Partition partition;
    std::vector<std::pair<int, int>> merge_edges;  // only when edge collection is on
    int rounds_used = 0;
};

// Coin source for one compression round: bit of a leader id.
using CoinFn = std::function<bool(int leader)>;

// One randomized merging round: leaders draw bits; members of bit-1 components notify
// graph neighbors; each bit-0 vertex keeps the notifier with the smallest (sender id,
// edge id); each bit-0 leader adopts the notifier of its smallest selecting member and
// re-points its whole component there. Targets always have bit 1, so re-pointing never
// chains.
CompressionOutcome leader_compression_round(const Partition& p, const LeveledSpanner& spanner,
                                            int level_exponent, bool collect_edges,
                                            const CoinFn& coin);

// Same round over an explicit edge list (tests and Monte-Carlo suites).
CompressionOutcome leader_compression_round(const Partition& p,
                                            const std::vector<std::pair<int, int>>& edges,
                                            bool collect_edges, const CoinFn& coin);

// Checkpoint level t = alpha^k: group by level-(t/beta) cells, compress h rounds against
// the level-t spanner, then merge every incomplete component with the others whose
// leaders share its level-(alpha^(k+1)/beta) cell.
Partition part1(const PointSet& points, int level_exponent, const ShiftVector& shift,
                const LeveledSpanner& spanner, const AlgorithmConfig& config);

// Intermediate level t strictly between checkpoint powers: start from the partition at
// t/kappa, compress h rounds, then merge incomplete components whose leaders share a
// component of the partition at t*kappa.
Partition part2(const PointSet& points, int level_exponent, const LeveledSpanner& spanner,
                const Partition& p_lo, const Partition& p_hi, const AlgorithmConfig& config);

struct LevelEdge {
    int u = 0;
    int v = 0;
    int stage = 0;  // compression round 1..h, or 0 for the closing star
};

// Edges that move the hierarchy from the level-(t/2) partition to the level-t one:
// h collected compression rounds plus one star per target component over the leftover
// leaders. Returns exactly |p_prev| - |p_target| edges.
std::vector<LevelEdge> part3(const PointSet& points, int level_exponent,
                             const LeveledSpanner& spanner, const Partition& p_prev,
                             const Partition& p_target, const AlgorithmConfig& config);

struct PartitionHierarchy {
    int top = 0;                           // levels t = 2^j for j = 0..top
    std::vector<Partition> levels;         // levels[j] = partition at t = 2^j
    std::vector<std::vector<LevelEdge>> edges;  // edges[j] generated moving to level j (j >= 1)
};

struct SpanningTree {
    struct Edge {
        int u = 0;
        int v = 0;
        double weight = 0.0;  // Euclidean, original units
        int level_exponent = 0;
        int stage = 0;
    };
    std::vector<Edge> edges;
    double total_weight = 0.0;
};

class RoundLedger;

// Full hierarchy construction: part1 checkpoints (one parallel wave), part2 waves in
// decreasing v2 order, part3 for every level (one parallel wave). Tree weights are left
// in normalized units here; the driver rewrites them in original units.
PartitionHierarchy run_pipeline(const PointSet& points, const ShiftVector& shift,
                                const LeveledSpanner& spanner, const AlgorithmConfig& config,
                                int top_exponent, RoundLedger* ledger = nullptr);

void write_hierarchy_dump(const std::string& path, const PartitionHierarchy& hierarchy);

}  // namespace mstsim
