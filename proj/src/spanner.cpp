#include "mstsim/spanner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "mstsim/common.hpp"
#include "mstsim/rng.hpp"

namespace mstsim {

void EdgeSet::add(int u, int v) {
    if (u == v) return;
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
}

void EdgeSet::finalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool EdgeSet::contains(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

double strategy_stretch_bound(SpannerStrategy s) {
    return s == SpannerStrategy::exact_threshold ? 1.0 : 2.0;
}

namespace {

// Indices grouped by grid cell at `level`; groups ordered by cell coordinates, members
// ordered by id.
std::vector<std::vector<int>> group_by_cell(const PointSet& points, double level,
                                            const ShiftVector& shift) {
    std::vector<std::pair<std::vector<long long>, int>> keyed(points.n);
    for (int i = 0; i < points.n; ++i)
        keyed[i] = {cell_of(points, i, level, shift).coords, i};
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < points.n; ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) groups.emplace_back();
        groups.back().push_back(keyed[i].second);
    }
    return groups;
}

// Smallest member id per nonempty subcell of side t/sqrt(d), restricted to this group.
std::vector<int> subcell_leaders(const PointSet& points, const std::vector<int>& group,
                                 double t, const ShiftVector& shift) {
    double sub_level = t / std::sqrt(double(points.d));
    std::map<std::vector<long long>, int> best;
    for (int id : group) {
        auto cell = cell_of(points, id, sub_level, shift).coords;
        auto it = best.find(cell);
        if (it == best.end() || id < it->second) best[cell] = id;
    }
    std::vector<int> leaders;
    leaders.reserve(best.size());
    for (const auto& kv : best) leaders.push_back(kv.second);
    std::sort(leaders.begin(), leaders.end());
    return leaders;
}

void build_exact_threshold(const PointSet& points, const std::vector<int>& group, double t,
                           std::vector<std::pair<int, int>>& out) {
    double t2 = t * t;
    for (size_t a = 0; a < group.size(); ++a)
        for (size_t b = a + 1; b < group.size(); ++b)
            if (dist2(points, group[a], group[b]) <= t2)
                out.emplace_back(group[a], group[b]);
}

void build_cell_leader(const PointSet& points, const std::vector<int>& group, double t,
                       const ShiftVector& shift, std::vector<std::pair<int, int>>& out) {
    std::vector<int> leaders = subcell_leaders(points, group, t, shift);
    double reach2 = 4.0 * t * t;
    for (int q : group)
        for (int r : leaders) {
            if (r == q) continue;
            if (dist2(points, q, r) <= reach2)
                out.emplace_back(std::min(q, r), std::max(q, r));
        }
}

// Keeps each point's nearest leader plus a sampled subset of the others, aiming at
// |group|^(1+epsilon) edges for the cell; falls back to the full leader graph when the
// sample misses a pair.
bool build_sampled_leader(const PointSet& points, const std::vector<int>& group, double t,
                          const ShiftVector& shift, const AlgorithmConfig& config, int j,
                          std::vector<std::pair<int, int>>& out) {
    std::vector<int> leaders = subcell_leaders(points, group, t, shift);
    double reach2 = 4.0 * t * t;
    double per_point = std::pow(double(group.size()), config.epsilon);
    double keep_prob =
        leaders.size() <= 1 ? 1.0 : std::min(1.0, per_point / double(leaders.size()));

    std::vector<std::pair<int, int>> local;
    for (int q : group) {
        int nearest = -1;
        double nearest_d2 = 0.0;
        for (int r : leaders) {
            if (r == q) continue;
            double d2 = dist2(points, q, r);
            if (d2 > reach2) continue;
            if (nearest == -1 || d2 < nearest_d2 || (d2 == nearest_d2 && r < nearest)) {
                nearest = r;
                nearest_d2 = d2;
            }
        }
        for (int r : leaders) {
            if (r == q) continue;
            if (dist2(points, q, r) > reach2) continue;
            bool keep = (r == nearest) ||
                        rng_unit(config.seed, rng_tag::sample, j, q, r) < keep_prob;
            if (keep) local.emplace_back(std::min(q, r), std::max(q, r));
        }
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());

    // Verify the two-hop contract inside this cell before accepting the sample.
    std::map<int, std::vector<int>> adj;
    for (const auto& e : local) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    for (auto& kv : adj) std::sort(kv.second.begin(), kv.second.end());
    auto linked = [&](int a, int b) {
        auto it = adj.find(a);
        return it != adj.end() && std::binary_search(it->second.begin(), it->second.end(), b);
    };
    double t2 = t * t;
    for (size_t a = 0; a < group.size(); ++a)
        for (size_t b = a + 1; b < group.size(); ++b) {
            int p = group[a], q = group[b];
            if (dist2(points, p, q) > t2 || linked(p, q)) continue;
            bool ok = false;
            auto it = adj.find(p);
            if (it != adj.end())
                for (int mid : it->second)
                    if (linked(mid, q)) {
                        ok = true;
                        break;
                    }
            if (!ok) return false;
        }
    out.insert(out.end(), local.begin(), local.end());
    return true;
}

}  // namespace

EdgeSet build_spanner_level(const PointSet& points, double t, const ShiftVector& shift,
                            const AlgorithmConfig& config, SpannerStrategy strategy,
                            SpannerBuildStats* stats) {
    int j = static_cast<int>(std::lround(std::log2(t)));
    if (std::ldexp(1.0, j) != t || j < 0)
        throw std::invalid_argument("spanner level must be a power of 2 >= 1");
    int g = alpha_g(config.alpha);
    int k = checkpoint_k_for(j, g);
    double big_level = std::pow(double(config.alpha), k + 1) / config.beta;

    auto groups = group_by_cell(points, big_level, shift);
    std::vector<std::vector<std::pair<int, int>>> per_group(groups.size());
    long long fallbacks = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : fallbacks) if (parallel_enabled())
    for (long long gi = 0; gi < static_cast<long long>(groups.size()); ++gi) {
        const auto& group = groups[gi];
        if (group.size() < 2) continue;
        auto& out = per_group[gi];
        switch (strategy) {
            case SpannerStrategy::exact_threshold:
                build_exact_threshold(points, group, t, out);
                break;
            case SpannerStrategy::cell_leader:
                build_cell_leader(points, group, t, shift, out);
                break;
            case SpannerStrategy::sampled_leader:
                if (!build_sampled_leader(points, group, t, shift, config, j, out)) {
                    ++fallbacks;
                    build_cell_leader(points, group, t, shift, out);
                }
                break;
        }
    }
    if (stats) stats->fallback_cells += fallbacks;

    EdgeSet result;
    for (const auto& chunk : per_group)
        result.edges.insert(result.edges.end(), chunk.begin(), chunk.end());
    result.finalize();
    return result;
}

std::vector<std::pair<int, int>> LeveledSpanner::level_union(int j) const {
    std::vector<std::pair<int, int>> all;
    for (int jj = 0; jj <= std::min(j, top); ++jj)
        all.insert(all.end(), delta[jj].begin(), delta[jj].end());
    std::sort(all.begin(), all.end());
    return all;
}

void LeveledSpanner::for_each_edge_upto(
    int j, const std::function<void(int u, int v, long long id)>& fn) const {
    long long id = 0;
    for (int jj = 0; jj <= std::min(j, top); ++jj)
        for (const auto& e : delta[jj]) fn(e.first, e.second, id++);
}

long long LeveledSpanner::edge_count_upto(int j) const {
    long long count = 0;
    for (int jj = 0; jj <= std::min(j, top); ++jj)
        count += static_cast<long long>(delta[jj].size());
    return count;
}

LeveledSpanner accumulate_levels(const std::map<int, EdgeSet>& per_level, double stretch_bound) {
    if (per_level.empty()) throw std::invalid_argument("accumulate_levels: no levels");
    int top = per_level.rbegin()->first;
    for (int j = 0; j <= top; ++j)
        if (per_level.find(j) == per_level.end())
            throw std::invalid_argument("accumulate_levels: missing level exponent " +
                                        std::to_string(j));

    LeveledSpanner sp;
    sp.top = top;
    sp.stretch_bound = stretch_bound;
    sp.delta.resize(top + 1);
    std::vector<std::pair<int, int>> seen;
    for (int j = 0; j <= top; ++j) {
        std::vector<std::pair<int, int>> level = per_level.at(j).edges;
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
        std::set_difference(level.begin(), level.end(), seen.begin(), seen.end(),
                            std::back_inserter(sp.delta[j]));
        std::vector<std::pair<int, int>> merged;
        merged.reserve(seen.size() + sp.delta[j].size());
        std::merge(seen.begin(), seen.end(), sp.delta[j].begin(), sp.delta[j].end(),
                   std::back_inserter(merged));
        seen.swap(merged);
    }
    return sp;
}

SpannerWeightedGraph spanner_weight_graph(const LeveledSpanner& spanner) {
    SpannerWeightedGraph g;
    for (int j = 0; j <= spanner.top; ++j) {
        double t = spanner.level_value(j);
        for (const auto& e : spanner.delta[j]) g.edges.push_back({e, t});
    }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return g;
}

LeveledSpanner build_leveled_spanner(const PointSet& points, const ShiftVector& shift,
                                     const AlgorithmConfig& config, int top_exponent,
                                     SpannerBuildStats* stats) {
    std::map<int, EdgeSet> per_level;
    for (int j = 0; j <= top_exponent; ++j)
        per_level[j] = build_spanner_level(points, std::ldexp(1.0, j), shift, config,
                                           config.strategy, stats);
    return accumulate_levels(per_level, strategy_stretch_bound(config.strategy));
}

void write_spanner_dump(const std::string& path, const LeveledSpanner& spanner) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write spanner dump: " + path);
    char buf[64];
    for (int j = 0; j <= spanner.top; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", spanner.level_value(j));
        for (const auto& e : spanner.level_union(j))
            out << buf << " " << e.first << " " << e.second << "\n";
    }
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace mstsim
