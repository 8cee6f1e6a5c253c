#include "mstsim/driver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mstsim/common.hpp"
#include "mstsim/spanner.hpp"

namespace mstsim {

namespace {

SpanningTree star_tree(const PointSet& original, int center) {
    SpanningTree tree;
    for (int i = 0; i < original.n; ++i) {
        if (i == center) continue;
        double w = dist(original, center, i);
        tree.edges.push_back({center, i, w, 0, -1});
        tree.total_weight += w;
    }
    return tree;
}

EulerTour star_tour(const SpanningTree& tree) {
    EulerTour tour;
    for (const auto& e : tree.edges) {
        tour.seq.emplace_back(e.u, e.v);
        tour.seq.emplace_back(e.v, e.u);
    }
    return tour;
}

}  // namespace

RunResult run_full(const PointSet& points, const AlgorithmConfig& raw_config,
                   RunInternals* capture) {
    if (points.n < 1) throw std::invalid_argument("need at least one point");
    RunResult out;
    out.config = raw_config;
    validate_config(out.config, points.d);
    const AlgorithmConfig& config = out.config;

    out.ledger = RoundLedger(CostTable::defaults(), config.strict_memory,
                             config.machine_memory_s);
    RoundLedger& ledger = out.ledger;

    const long long point_words = static_cast<long long>(points.n) * points.d;
    ledger.set_stage("normalize");
    ledger.charge("sort", point_words, points.d);
    ledger.charge("broadcast", points.d + 1, points.d + 1);
    PointSet snapped;
    std::tie(snapped, out.norm) = normalize_aspect(points, config);

    if (out.norm.degenerate) {
        out.compact_n = 1;
        out.duplicates = points.n - 1;
        out.tree = star_tree(points, 0);
        out.tour = star_tour(out.tree);
        out.cycle = shortcut(out.tour, points);
        out.level_components.assign(1, 1);
        return out;
    }

    // Snapped locations can coincide; run the pipeline on one representative each
    // (smallest original id) and hang the rest back on as leaves afterwards.
    std::map<std::vector<long long>, int> index_of;
    std::vector<int> rep_compact(points.n);
    std::vector<int> original_of;
    PointSet compact;
    compact.d = snapped.d;
    compact.delta = snapped.delta;
    for (int i = 0; i < points.n; ++i) {
        std::vector<long long> key(snapped.d);
        for (int k = 0; k < snapped.d; ++k) key[k] = std::llround(snapped.point(i)[k]);
        auto [it, fresh] = index_of.try_emplace(std::move(key),
                                                static_cast<int>(original_of.size()));
        if (fresh) {
            original_of.push_back(i);
            compact.coords.insert(compact.coords.end(), snapped.point(i),
                                  snapped.point(i) + snapped.d);
        }
        rep_compact[i] = it->second;
    }
    compact.n = static_cast<int>(original_of.size());
    out.compact_n = compact.n;
    out.duplicates = points.n - compact.n;

    PartitionHierarchy hierarchy;
    EulerTour compact_tour;
    if (compact.n >= 2) {
        const ShiftVector shift = make_shift(config.seed, compact.d, out.norm.delta);
        const int g = alpha_g(config.alpha);
        const int H = top_checkpoint_H(config, out.norm.delta, compact.d);
        out.top_exponent = top_exponent(H, g);

        ledger.set_stage("spanner");
        const long long compact_words = static_cast<long long>(compact.n) * compact.d;
        ledger.charge("duplicate", compact_words, compact.d);
        SpannerBuildStats sstats;
        LeveledSpanner spanner =
            build_leveled_spanner(compact, shift, config, out.top_exponent, &sstats);
        out.spanner_fallbacks = sstats.fallback_cells;
        const long long edge_words = 2 * spanner.edge_count_upto(out.top_exponent);
        ledger.charge("spanner_build", compact_words + edge_words, compact.d);
        ledger.charge("duplicate", edge_words, 2);
        ledger.charge("sort", edge_words, 2);

        hierarchy = run_pipeline(compact, shift, spanner, config, out.top_exponent, &ledger);
        for (int j = 0; j <= hierarchy.top; ++j)
            out.level_components.push_back(hierarchy.levels[j].component_count());
        if (capture) {
            capture->compact = compact;
            capture->shift = shift;
            capture->spanner = spanner;
            capture->hierarchy = hierarchy;
        }

        ledger.set_stage("tour");
        ledger.charge("pram_simulation", edge_words + compact_words, 4);
        compact_tour = euler_tour_via_hierarchy(hierarchy, &out.tour_stats);
        const long long tour_words =
            2 * static_cast<long long>(std::max<size_t>(compact_tour.size(), 1));
        for (int r = doubling_iterations(hierarchy.top); r > 0; --r) {
            ledger.charge("sort", tour_words, 2);
            ledger.charge("prefix_sum", tour_words, 2);
            ledger.charge("sequence_insertion", tour_words, 2);
        }
    } else {
        out.top_exponent = 0;
        out.level_components.assign(1, 1);
        if (capture) capture->compact = compact;
    }

    SpanningTree tree;
    for (int j = 1; j <= hierarchy.top && j < static_cast<int>(hierarchy.edges.size()); ++j)
        for (const LevelEdge& e : hierarchy.edges[j]) {
            int ou = original_of[e.u], ov = original_of[e.v];
            double w = dist(points, ou, ov);
            tree.edges.push_back({ou, ov, w, j, e.stage});
            tree.total_weight += w;
        }

    std::map<int, std::vector<int>> dups;
    for (int i = 0; i < points.n; ++i) {
        int rep = original_of[rep_compact[i]];
        if (rep != i) dups[rep].push_back(i);
    }
    for (const auto& [rep, list] : dups)
        for (int dpt : list) {
            double w = dist(points, rep, dpt);
            tree.edges.push_back({rep, dpt, w, 0, -1});
            tree.total_weight += w;
        }

    std::vector<std::pair<int, int>> base;
    base.reserve(compact_tour.size());
    for (const auto& [u, v] : compact_tour.seq)
        base.push_back({original_of[u], original_of[v]});
    std::map<int, std::vector<std::pair<int, int>>> inserts;
    for (const auto& [rep, list] : dups) {
        std::vector<std::pair<int, int>> block;
        for (int dpt : list) {
            block.push_back({rep, dpt});
            block.push_back({dpt, rep});
        }
        if (base.empty()) {
            inserts[0] = std::move(block);
            continue;
        }
        int at = -1;
        for (size_t i = 0; i < base.size(); ++i)
            if (base[i].second == rep) {
                at = static_cast<int>(i) + 1;
                break;
            }
        if (at < 0)
            throw consistency_error("tour never enters point " + std::to_string(rep));
        inserts[at] = std::move(block);
    }
    out.tour.seq = sequence_insert(base, inserts);
    out.tree = std::move(tree);

    ledger.set_stage("shortcut");
    const long long final_words =
        2 * static_cast<long long>(std::max<size_t>(out.tour.size(), 1));
    ledger.charge("sort", final_words, 2);
    ledger.charge("prefix_sum", final_words, 2);
    out.cycle = shortcut(out.tour, points);
    return out;
}

}  // namespace mstsim
