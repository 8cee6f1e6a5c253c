#include "mstsim/euler.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "mstsim/common.hpp"
#include "mstsim/runtime.hpp"

namespace mstsim {

int ClusterTree::root() const {
    for (const auto& [node, parent] : par)
        if (node == parent) return node;
    throw std::invalid_argument("cluster tree has no root");
}

ClusterTree tree_from_edges(const std::vector<int>& nodes,
                            const std::vector<std::pair<int, int>>& edges, int root) {
    ClusterTree t;
    t.nodes = nodes;
    std::sort(t.nodes.begin(), t.nodes.end());
    if (std::adjacent_find(t.nodes.begin(), t.nodes.end()) != t.nodes.end())
        throw std::invalid_argument("duplicate node id");
    if (!std::binary_search(t.nodes.begin(), t.nodes.end(), root))
        throw std::invalid_argument("root is not a node");
    if (edges.size() + 1 != t.nodes.size())
        throw std::invalid_argument("edge count does not match a tree");
    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : edges) {
        if (u == v || !std::binary_search(t.nodes.begin(), t.nodes.end(), u) ||
            !std::binary_search(t.nodes.begin(), t.nodes.end(), v))
            throw std::invalid_argument("bad edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ")");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& [node, list] : adj) std::sort(list.begin(), list.end());
    t.par[root] = root;
    std::vector<int> stack{root};
    size_t seen = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (t.par.count(v)) continue;
            t.par[v] = u;
            t.child_order[u].push_back(v);
            stack.push_back(v);
            ++seen;
        }
    }
    if (seen != t.nodes.size()) throw std::invalid_argument("edges do not connect all nodes");
    return t;
}

EulerTour dfs_euler_tour(const ClusterTree& tree, int root) {
    if (std::find(tree.nodes.begin(), tree.nodes.end(), root) == tree.nodes.end())
        throw std::invalid_argument("root is not a node");
    EulerTour tour;
    if (tree.nodes.size() <= 1) return tour;
    std::map<int, std::vector<int>> neigh;
    for (int u : tree.nodes) {
        auto it = tree.child_order.find(u);
        if (it != tree.child_order.end()) neigh[u] = it->second;
        int p = tree.par.at(u);
        if (p != u) neigh[u].push_back(p);
    }
    std::set<int> visited{root};
    struct Frame {
        int node;
        size_t next;
    };
    std::vector<Frame> stack{{root, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        const std::vector<int>& list = neigh[f.node];
        bool descended = false;
        while (f.next < list.size()) {
            int v = list[f.next++];
            if (visited.count(v)) continue;
            visited.insert(v);
            tour.seq.emplace_back(f.node, v);
            stack.push_back({v, 0});
            descended = true;
            break;
        }
        if (!descended) {
            int u = f.node;
            stack.pop_back();
            if (!stack.empty()) tour.seq.emplace_back(u, stack.back().node);
        }
    }
    return tour;
}

int first_appearance(const EulerTour& tour, int v) {
    for (size_t i = 0; i < tour.size(); ++i)
        if (tour.seq[i].first == v) return static_cast<int>(i);
    return -1;
}

int last_appearance(const EulerTour& tour, int v) {
    for (size_t i = tour.size(); i > 0; --i)
        if (tour.seq[i - 1].second == v) return static_cast<int>(i - 1);
    return -1;
}

EulerTour change_root(const EulerTour& tour, int v) {
    if (tour.empty()) return tour;
    int at = first_appearance(tour, v);
    if (at < 0) throw std::invalid_argument("node does not appear in tour");
    EulerTour out;
    out.seq.reserve(tour.size());
    for (size_t i = 0; i < tour.size(); ++i)
        out.seq.push_back(tour.seq[(at + i) % tour.size()]);
    return out;
}

std::map<int, int> subtree_sizes(const EulerTour& tour) {
    std::map<int, int> first, last, size;
    for (int i = 0; i < static_cast<int>(tour.size()); ++i) {
        auto [u, v] = tour.seq[i];
        if (!first.count(u)) first[u] = i;
        last[v] = i;
    }
    for (const auto& [node, fi] : first) {
        auto it = last.find(node);
        int la = it == last.end() ? fi - 1 : it->second;
        size[node] = (la - fi + 1) / 2 + 1;
    }
    return size;
}

std::map<int, double> path_prefix_sum(const EulerTour& tour,
                                      const std::map<std::pair<int, int>, double>& weights) {
    std::map<int, double> dist;
    if (tour.empty()) return dist;
    auto weight_of = [&](int u, int v) {
        auto it = weights.find({u, v});
        if (it == weights.end()) it = weights.find({v, u});
        if (it == weights.end()) throw std::invalid_argument("missing edge weight");
        return it->second;
    };
    dist[tour.seq.front().first] = 0.0;
    for (const auto& [u, v] : tour.seq)
        if (!dist.count(v)) dist[v] = dist.at(u) + weight_of(u, v);
    return dist;
}

OrderedTourResult tour_from_child_order(const ClusterTree& tree) {
    OrderedTourResult out;
    const int n = static_cast<int>(tree.nodes.size());
    if (n <= 1) return out;
    int root = tree.root();

    std::vector<int> order;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        auto it = tree.child_order.find(u);
        if (it != tree.child_order.end())
            for (int c : it->second) stack.push_back(c);
    }
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("child order does not cover the tree");
    std::map<int, int> size;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int s = 1;
        auto ci = tree.child_order.find(*it);
        if (ci != tree.child_order.end())
            for (int c : ci->second) s += size.at(c);
        size[*it] = s;
    }

    // Slot of the edge into a child = parent's slot + 1 + twice the sizes of the
    // siblings toured before it; the matching return edge sits 2*size-1 later.
    std::vector<std::pair<int, int>> slot(2 * (n - 1) + 1);
    std::map<int, int> base;
    base[root] = 0;
    stack.assign(1, root);
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        auto ci = tree.child_order.find(u);
        if (ci == tree.child_order.end()) continue;
        int p = base.at(u) + 1;
        for (int c : ci->second) {
            int up = p + 2 * size.at(c) - 1;
            slot[p] = {u, c};
            slot[up] = {c, u};
            out.position[{u, c}] = p;
            out.position[{c, u}] = up;
            base[c] = p;
            p = up + 1;
            stack.push_back(c);
        }
    }
    out.tour.seq.assign(slot.begin() + 1, slot.end());
    return out;
}

std::vector<std::pair<int, int>> sequence_insert(
    const std::vector<std::pair<int, int>>& base,
    const std::map<int, std::vector<std::pair<int, int>>>& inserts) {
    for (const auto& [pos, seq] : inserts)
        if (pos < 0 || pos > static_cast<int>(base.size()))
            throw std::invalid_argument("insert position out of range");
    std::vector<std::pair<int, int>> out;
    auto it = inserts.find(0);
    if (it != inserts.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    for (size_t i = 0; i < base.size(); ++i) {
        out.push_back(base[i]);
        it = inserts.find(static_cast<int>(i + 1));
        if (it != inserts.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

TourCheck validate_tour(const EulerTour& tour,
                        const std::vector<std::pair<int, int>>& tree_edges) {
    TourCheck check;
    auto fail = [&](std::string msg) {
        check.ok = false;
        if (check.violations.size() < 32) check.violations.push_back(std::move(msg));
    };
    if (tour.size() != 2 * tree_edges.size())
        fail("tour length " + std::to_string(tour.size()) + ", expected " +
             std::to_string(2 * tree_edges.size()));
    for (size_t i = 0; i < tour.size(); ++i) {
        const auto& here = tour.seq[i];
        const auto& next = tour.seq[(i + 1) % tour.size()];
        if (here.second != next.first) {
            fail("chain breaks after step " + std::to_string(i));
            break;
        }
    }
    std::map<std::pair<int, int>, int> count;
    for (const auto& e : tour.seq) ++count[e];
    for (auto [u, v] : tree_edges) {
        for (auto dir : {std::make_pair(u, v), std::make_pair(v, u)}) {
            auto it = count.find(dir);
            if (it == count.end() || it->second == 0)
                fail("missing edge (" + std::to_string(dir.first) + "," +
                     std::to_string(dir.second) + ")");
            else if (--it->second == 0)
                count.erase(it);
        }
    }
    for (const auto& [e, c] : count)
        fail("unexpected edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
             ") x" + std::to_string(c));
    return check;
}

JoinResult euler_tour_join(const ClusterTree& cluster_tree, const EulerTour& cluster_tour,
                           const std::map<int, std::vector<std::pair<int, int>>>& subtrees,
                           const std::map<int, EulerTour>& subtours) {
    if (cluster_tree.nodes.empty()) throw std::invalid_argument("empty cluster tree");
    std::vector<int> clusters = cluster_tree.nodes;
    std::sort(clusters.begin(), clusters.end());

    static const std::vector<std::pair<int, int>> no_edges;
    static const EulerTour no_tour;
    auto subtree_of = [&](int c) -> const std::vector<std::pair<int, int>>& {
        auto it = subtrees.find(c);
        return it == subtrees.end() ? no_edges : it->second;
    };
    auto subtour_of = [&](int c) -> const EulerTour& {
        auto it = subtours.find(c);
        return it == subtours.end() ? no_tour : it->second;
    };

    JoinResult result;
    if (clusters.size() == 1) {
        result.tree_edges = subtree_of(clusters[0]);
        result.tour = subtour_of(clusters[0]);
        return result;
    }
    if (cluster_tour.size() != 2 * (clusters.size() - 1))
        throw std::invalid_argument("cluster tour length mismatch");

    int root = clusters.front();
    EulerTour shifted = change_root(cluster_tour, root);
    std::map<int, int> par;
    std::map<int, std::vector<int>> kids;
    par[root] = root;
    for (const auto& [u, v] : shifted.seq)
        if (!par.count(v)) {
            par[v] = u;
            kids[u].push_back(v);
        }
    if (par.size() != clusters.size())
        throw std::invalid_argument("cluster tour does not cover the tree");

    auto mapped = [&](int c, int d) {
        auto it = cluster_tree.edge_map.find({c, d});
        if (it == cluster_tree.edge_map.end())
            throw std::invalid_argument("missing endpoint pair for cluster edge (" +
                                        std::to_string(c) + "," + std::to_string(d) + ")");
        return it->second;
    };

    // Terminal of a cluster: where the tour enters it from the parent; for the root,
    // the smallest attachment point among its children.
    std::map<int, int> terminal;
    for (int c : clusters)
        if (c != root) terminal[c] = mapped(c, par.at(c)).first;
    {
        auto ki = kids.find(root);
        if (ki == kids.end()) throw std::invalid_argument("root cluster has no children");
        int best = std::numeric_limits<int>::max();
        for (int d : ki->second) best = std::min(best, mapped(d, root).second);
        terminal[root] = best;
    }

    std::map<int, EulerTour> local;
    for (int c : clusters) {
        const EulerTour& sub = subtour_of(c);
        local[c] = sub.empty() ? sub : change_root(sub, terminal.at(c));
    }

    // Visit children in the order their attachment points first appear in the
    // parent's re-rooted subtour, ties by cluster id.
    for (auto& [c, list] : kids) {
        const EulerTour& at = local.at(c);
        std::vector<std::pair<std::pair<int, int>, int>> keyed;
        for (int d : list) {
            int y = mapped(d, c).second;
            int fi = at.empty() ? 0 : first_appearance(at, y);
            if (fi < 0) throw std::invalid_argument("attachment point missing from subtour");
            keyed.push_back({{fi, d}, d});
        }
        std::sort(keyed.begin(), keyed.end());
        list.clear();
        for (const auto& k : keyed) list.push_back(k.second);
    }

    ClusterTree ordered;
    ordered.nodes = clusters;
    ordered.par = par;
    for (const auto& [c, list] : kids) ordered.child_order[c] = list;
    OrderedTourResult cluster_level = tour_from_child_order(ordered);

    std::vector<std::pair<int, int>> hat;
    hat.reserve(cluster_level.tour.size());
    for (const auto& [c, d] : cluster_level.tour.seq) hat.push_back(mapped(c, d));

    // Chop each subtour at its attachment points; the piece starting at point b gets
    // spliced after the last base edge that enters b.
    std::map<int, std::vector<std::pair<int, int>>> segment;
    for (int c : clusters) {
        const EulerTour& at = local.at(c);
        if (at.empty()) continue;
        std::set<int> bounds{terminal.at(c)};
        auto ki = kids.find(c);
        if (ki != kids.end())
            for (int d : ki->second) bounds.insert(mapped(d, c).second);
        std::vector<std::pair<int, int>> firsts;
        for (int b : bounds) {
            int fi = first_appearance(at, b);
            if (fi < 0) throw std::invalid_argument("boundary point missing from subtour");
            firsts.push_back({fi, b});
        }
        std::sort(firsts.begin(), firsts.end());
        for (size_t i = 0; i < firsts.size(); ++i) {
            size_t from = firsts[i].first;
            size_t to = i + 1 < firsts.size() ? firsts[i + 1].first : at.size();
            segment[firsts[i].second].assign(at.seq.begin() + from, at.seq.begin() + to);
        }
    }

    std::map<int, int> last_entry;
    for (size_t i = 0; i < hat.size(); ++i) last_entry[hat[i].second] = static_cast<int>(i + 1);
    std::map<int, std::vector<std::pair<int, int>>> inserts;
    for (auto& [point, seq] : segment) {
        auto it = last_entry.find(point);
        if (it == last_entry.end())
            throw std::invalid_argument("no base edge enters attachment point " +
                                        std::to_string(point));
        inserts[it->second] = std::move(seq);
    }
    result.tour.seq = sequence_insert(hat, inserts);

    for (int c : clusters)
        if (c != root) result.tree_edges.push_back(mapped(c, par.at(c)));
    for (int c : clusters) {
        const auto& sub = subtree_of(c);
        result.tree_edges.insert(result.tree_edges.end(), sub.begin(), sub.end());
    }
    return result;
}

namespace {

// A block covers a band of hierarchy levels: for each cluster at the band's top it
// holds the spanning tree of the band-bottom clusters inside it, each tree edge
// remembering the concrete point pair behind it (pa on a's side).
struct ClusterEdge {
    int a = 0, b = 0;
    int pa = 0, pb = 0;
};

struct Block {
    std::vector<int> nodes;
    std::vector<ClusterEdge> edges;
    EulerTour tour;
};

int tree_diameter(const std::vector<int>& nodes, const std::vector<std::pair<int, int>>& edges) {
    if (nodes.size() <= 1) return 0;
    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    auto farthest = [&](int s) {
        std::map<int, int> depth{{s, 0}};
        std::queue<int> q;
        q.push(s);
        std::pair<int, int> best{0, s};
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            best = std::max(best, {depth.at(u), u});
            for (int v : adj[u])
                if (!depth.count(v)) {
                    depth[v] = depth.at(u) + 1;
                    q.push(v);
                }
        }
        return best;
    };
    return farthest(farthest(nodes.front()).second).first;
}

std::vector<std::pair<int, int>> plain_edges(const Block& block) {
    std::vector<std::pair<int, int>> out;
    out.reserve(block.edges.size());
    for (const ClusterEdge& e : block.edges) out.push_back({e.a, e.b});
    return out;
}

}  // namespace

EulerTour euler_tour_via_hierarchy(const PartitionHierarchy& hierarchy,
                                   HierarchyTourStats* stats) {
    if (stats) *stats = HierarchyTourStats{};
    if (hierarchy.levels.empty()) throw std::invalid_argument("hierarchy has no levels");
    const int n = hierarchy.levels.front().n();
    if (n <= 1) return EulerTour{};
    const int levels = hierarchy.top;
    if (static_cast<int>(hierarchy.levels.size()) != levels + 1)
        throw std::invalid_argument("hierarchy level count mismatch");

    auto leader_at = [&](int level, int point) {
        return hierarchy.levels[std::min(level, levels)].leader[point];
    };
    static const std::vector<LevelEdge> no_edges;
    auto edges_at = [&](int level) -> const std::vector<LevelEdge>& {
        if (level > levels || level >= static_cast<int>(hierarchy.edges.size()))
            return no_edges;
        return hierarchy.edges[level];
    };

    const int iters = doubling_iterations(levels);
    const int padded = 1 << iters;

    // Base blocks: one per (level, cluster), spanning the clusters one level down.
    std::map<int, std::map<int, Block>> current;
    for (int l = 1; l <= padded; ++l) {
        int prev_clusters = l - 1 <= levels ? hierarchy.levels[l - 1].component_count() : 1;
        int cur_clusters = l <= levels ? hierarchy.levels[l].component_count() : 1;
        int merged = static_cast<int>(edges_at(l).size());
        if (prev_clusters - merged != cur_clusters)
            throw consistency_error("level " + std::to_string(l) + " merges " +
                                    std::to_string(merged) + " of " +
                                    std::to_string(prev_clusters) + " clusters but " +
                                    std::to_string(cur_clusters) + " remain");
        std::map<int, Block>& at = current[l];
        for (int i = 0; i < n; ++i)
            if (leader_at(l - 1, i) == i) at[leader_at(l, i)].nodes.push_back(i);
        for (const LevelEdge& e : edges_at(l)) {
            if (leader_at(l, e.u) != leader_at(l, e.v))
                throw consistency_error("merge edge crosses clusters at level " +
                                        std::to_string(l));
            at[leader_at(l, e.u)].edges.push_back(
                {leader_at(l - 1, e.u), leader_at(l - 1, e.v), e.u, e.v});
        }
        for (auto& [c, block] : at) {
            std::vector<std::pair<int, int>> plain = plain_edges(block);
            if (stats)
                stats->max_base_tree_diameter =
                    std::max(stats->max_base_tree_diameter, tree_diameter(block.nodes, plain));
            try {
                ClusterTree t = tree_from_edges(
                    block.nodes, plain,
                    *std::min_element(block.nodes.begin(), block.nodes.end()));
                block.tour = dfs_euler_tour(t, t.root());
            } catch (const std::invalid_argument& e) {
                throw consistency_error("level " + std::to_string(l) + " cluster " +
                                        std::to_string(c) + ": " + e.what());
            }
        }
    }

    // Doubling: merge each block with the blocks one half-band below it.
    for (int r = 1; r <= iters; ++r) {
        const int span = 1 << r;
        const int half = span / 2;
        std::map<int, std::map<int, Block>> next;
        for (int l = span; l <= padded; l += span) {
            std::map<int, Block>& upper = current.at(l);
            std::map<int, Block>& lower = current.at(l - half);
            for (auto& [c, ub] : upper) {
                ClusterTree ct = tree_from_edges(
                    ub.nodes, plain_edges(ub),
                    *std::min_element(ub.nodes.begin(), ub.nodes.end()));
                for (const ClusterEdge& e : ub.edges) {
                    int xa = leader_at(l - span, e.pa);
                    int xb = leader_at(l - span, e.pb);
                    ct.edge_map[{e.a, e.b}] = {xa, xb};
                    ct.edge_map[{e.b, e.a}] = {xb, xa};
                }
                std::map<int, std::vector<std::pair<int, int>>> subtrees;
                std::map<int, EulerTour> subtours;
                Block nb;
                for (int d : ub.nodes) {
                    auto li = lower.find(d);
                    if (li == lower.end())
                        throw consistency_error("missing block under cluster " +
                                                std::to_string(d));
                    Block& lb = li->second;
                    subtrees[d] = plain_edges(lb);
                    subtours[d] = lb.tour;
                    nb.nodes.insert(nb.nodes.end(), lb.nodes.begin(), lb.nodes.end());
                    nb.edges.insert(nb.edges.end(), lb.edges.begin(), lb.edges.end());
                }
                for (const ClusterEdge& e : ub.edges)
                    nb.edges.push_back(
                        {leader_at(l - span, e.pa), leader_at(l - span, e.pb), e.pa, e.pb});
                JoinResult jr = euler_tour_join(ct, ub.tour, subtrees, subtours);
                nb.tour = std::move(jr.tour);
                next[l][c] = std::move(nb);
            }
        }
        current = std::move(next);
    }

    std::map<int, Block>& top = current.at(padded);
    if (top.size() != 1)
        throw consistency_error("hierarchy does not converge to a single cluster");
    return std::move(top.begin()->second.tour);
}

void write_tour_dump(const std::string& path, const EulerTour& tour) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw io_error("cannot write " + path);
    for (size_t i = 0; i < tour.size(); ++i)
        std::fprintf(f, "%zu %d %d\n", i, tour.seq[i].first, tour.seq[i].second);
    std::fclose(f);
}

}  // namespace mstsim
