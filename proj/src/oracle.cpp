#include "mstsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mstsim/common.hpp"
#include "mstsim/geometry.hpp"

namespace mstsim {

namespace {
void check_oracle_cap(int n) {
    if (n > kOracleMaxN)
        throw std::invalid_argument("oracle guarded to n <= " + std::to_string(kOracleMaxN) +
                                    ", got n = " + std::to_string(n));
}
}  // namespace

OracleTree exact_mst(const PointSet& points) {
    check_oracle_cap(points.n);
    OracleTree tree;
    int n = points.n;
    if (n <= 1) return tree;

    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<int> best_from(n, 0);
    in_tree[0] = 1;
    for (int j = 1; j < n; ++j) best[j] = dist2(points, 0, j);

    for (int step = 1; step < n; ++step) {
        int pick = -1;
        double pick_d = std::numeric_limits<double>::infinity();
#pragma omp parallel if (parallel_enabled())
        {
            int local_pick = -1;
            double local_d = std::numeric_limits<double>::infinity();
#pragma omp for nowait schedule(static)
            for (int j = 0; j < n; ++j) {
                if (in_tree[j]) continue;
                if (best[j] < local_d || (best[j] == local_d && j < local_pick)) {
                    local_d = best[j];
                    local_pick = j;
                }
            }
#pragma omp critical
            {
                if (local_pick >= 0 &&
                    (local_d < pick_d || (local_d == pick_d && local_pick < pick))) {
                    pick_d = local_d;
                    pick = local_pick;
                }
            }
        }
        in_tree[pick] = 1;
        tree.edges.emplace_back(std::min(best_from[pick], pick),
                                std::max(best_from[pick], pick));
        tree.weight += std::sqrt(pick_d);
#pragma omp parallel for schedule(static) if (parallel_enabled())
        for (int j = 0; j < n; ++j) {
            if (in_tree[j]) continue;
            double d2 = dist2(points, pick, j);
            if (d2 < best[j]) {
                best[j] = d2;
                best_from[j] = pick;
            }
        }
    }
    std::sort(tree.edges.begin(), tree.edges.end());
    return tree;
}

double exact_mst_weight_kruskal(const PointSet& points) {
    check_oracle_cap(points.n);
    int n = points.n;
    if (n <= 1) return 0.0;
    std::vector<std::pair<double, std::pair<int, int>>> all;
    all.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all.push_back({dist2(points, i, j), {i, j}});
    std::sort(all.begin(), all.end());
    UnionFind uf(n);
    double total = 0.0;
    int used = 0;
    for (const auto& e : all) {
        if (uf.unite(e.second.first, e.second.second)) {
            total += std::sqrt(e.first);
            if (++used == n - 1) break;
        }
    }
    return total;
}

Partition threshold_components(const PointSet& points, double t) {
    check_oracle_cap(points.n);
    if (t < 0.0) throw std::invalid_argument("threshold must be >= 0");
    int n = points.n;
    UnionFind uf(n);
    double t2 = t * t;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist2(points, i, j) <= t2) uf.unite(i, j);
    Partition p;
    p.leader.resize(n);
    for (int i = 0; i < n; ++i) p.leader[i] = uf.find(i);
    p.canonicalize_smallest();
    return p;
}

double graph_mst(int n, const std::vector<std::pair<std::pair<int, int>, double>>& edges) {
    std::vector<std::pair<double, std::pair<int, int>>> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) sorted.push_back({e.second, e.first});
    std::sort(sorted.begin(), sorted.end());
    UnionFind uf(n);
    double total = 0.0;
    int components = n;
    for (const auto& e : sorted)
        if (uf.unite(e.second.first, e.second.second)) {
            total += e.first;
            --components;
        }
    if (components != 1)
        throw std::runtime_error("graph_mst: input graph is disconnected (" +
                                 std::to_string(components) + " components)");
    return total;
}

double component_sum(const PointSet& points) {
    check_oracle_cap(points.n);
    if (points.n <= 1) return 0.0;
    double s = 0.0;
    double t = 1.0;
    int prev = threshold_components(points, t).component_count();
    while (prev > 1) {
        int next = threshold_components(points, 2.0 * t).component_count();
        s += 2.0 * t * (prev - next);
        prev = next;
        t *= 2.0;
    }
    return s;
}

long long nonempty_cell_count(const PointSet& points, double level, const ShiftVector& shift) {
    std::vector<std::vector<long long>> cells;
    cells.reserve(points.n);
    for (int i = 0; i < points.n; ++i)
        cells.push_back(cell_of(points, i, level, shift).coords);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return static_cast<long long>(cells.size());
}

bool two_hop_within_cells(const PointSet& points, double t, double cell_level,
                          const ShiftVector& shift,
                          const std::vector<std::pair<int, int>>& edges) {
    check_oracle_cap(points.n);
    int n = points.n;
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    auto linked = [&](int a, int b) {
        return std::binary_search(adj[a].begin(), adj[a].end(), b);
    };

    std::vector<std::vector<long long>> cells(n);
    for (int i = 0; i < n; ++i) cells[i] = cell_of(points, i, cell_level, shift).coords;

    double t2 = t * t;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (cells[i] != cells[j] || dist2(points, i, j) > t2) continue;
            if (linked(i, j)) continue;
            bool two_hop = false;
            for (int mid : adj[i])
                if (linked(mid, j)) {
                    two_hop = true;
                    break;
                }
            if (!two_hop) return false;
        }
    return true;
}

}  // namespace mstsim
