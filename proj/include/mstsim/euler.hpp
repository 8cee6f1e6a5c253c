#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mstsim/partition.hpp"

namespace mstsim {

// Cyclic sequence of directed tree edges; empty for a single-node tree. seq[i].second ==
// seq[i+1].first, wrapping around.
struct EulerTour {
    std::vector<std::pair<int, int>> seq;

    size_t size() const { return seq.size(); }
    bool empty() const { return seq.empty(); }
};

// Rooted tree over arbitrary integer node ids with an explicit child order and, for
// trees whose nodes are clusters, the concrete endpoint pair behind each tree edge
// (edge_map[(a,b)] = (x,y) with x on a's side; both directions stored).
struct ClusterTree {
    std::vector<int> nodes;
    std::map<int, int> par;                       // par[root] == root
    std::map<int, std::vector<int>> child_order;
    std::map<std::pair<int, int>, std::pair<int, int>> edge_map;

    int root() const;
};

// Builds par/child_order from an undirected edge list; children are ordered by id.
// Throws std::invalid_argument when the edges do not form a tree over `nodes`.
ClusterTree tree_from_edges(const std::vector<int>& nodes,
                            const std::vector<std::pair<int, int>>& edges, int root);

// Depth-first tour honoring child_order when started at the tree's own root.
EulerTour dfs_euler_tour(const ClusterTree& tree, int root);

// Circular shift so the tour starts at v's first appearance.
EulerTour change_root(const EulerTour& tour, int v);

// 0-based index of the first edge leaving v; -1 if absent.
int first_appearance(const EulerTour& tour, int v);
// 0-based index of the last edge entering v; -1 if absent.
int last_appearance(const EulerTour& tour, int v);

std::map<int, int> subtree_sizes(const EulerTour& tour);

// Distance from the root to every node under the given undirected edge weights.
std::map<int, double> path_prefix_sum(const EulerTour& tour,
                                      const std::map<std::pair<int, int>, double>& weights);

struct OrderedTourResult {
    EulerTour tour;
    std::map<std::pair<int, int>, int> position;  // 1-based slot of every directed edge
};

// Tour whose sibling first-appearances follow child_order, built by computing each
// edge's slot from subtree-size prefix sums rather than by walking the tree.
OrderedTourResult tour_from_child_order(const ClusterTree& tree);

// Inserts each sequence after base position f(i) (0 = prepend, positions are 1-based).
std::vector<std::pair<int, int>> sequence_insert(
    const std::vector<std::pair<int, int>>& base,
    const std::map<int, std::vector<std::pair<int, int>>>& inserts);

struct TourCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

// Chain property, length 2n-2, and exactly-once-per-direction against the tree edges.
TourCheck validate_tour(const EulerTour& tour, const std::vector<std::pair<int, int>>& tree_edges);

struct JoinResult {
    std::vector<std::pair<int, int>> tree_edges;  // inter-cluster pairs plus all subtree edges
    EulerTour tour;
};

// Combines a tour over clusters with per-cluster tours into a tour of the merged tree.
// The cluster tour is re-rooted at the smallest cluster id, children are reordered by
// their attachment's first appearance in the parent's tour, and each cluster tour is
// chopped at its boundary nodes and spliced after the matching inter-cluster edge.
JoinResult euler_tour_join(const ClusterTree& cluster_tree, const EulerTour& cluster_tour,
                           const std::map<int, std::vector<std::pair<int, int>>>& subtrees,
                           const std::map<int, EulerTour>& subtours);

struct HierarchyTourStats {
    int max_base_tree_diameter = 0;  // largest per-level cluster-tree diameter (edges)
};

// Tour of the spanning tree encoded by a partition hierarchy: per-level cluster trees
// are toured directly, then adjacent level blocks are merged in doubling iterations
// (levels padded to a power of 2 with no-op levels).
EulerTour euler_tour_via_hierarchy(const PartitionHierarchy& hierarchy,
                                   HierarchyTourStats* stats = nullptr);

void write_tour_dump(const std::string& path, const EulerTour& tour);

}  // namespace mstsim
