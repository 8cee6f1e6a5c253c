#include "mstsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "mstsim/oracle.hpp"
#include "mstsim/rng.hpp"
#include "mstsim/union_find.hpp"

namespace mstsim {

void SuiteResult::note(bool passed, const std::string& detail) {
    ++checks;
    if (!passed) {
        ++failures;
        if (messages.size() < 24) messages.push_back(detail);
    }
}

PointSet make_instance(const std::string& generator, int n, int d, uint64_t seed) {
    if (generator == "uniform") return gen_uniform(n, d, seed);
    if (generator == "gaussian-clusters") return gen_gaussian_clusters(n, d, seed);
    if (generator == "parallel-paths") {
        if (d < 2) throw std::invalid_argument("parallel-paths needs d >= 2");
        int k = std::min(3, d - 1);
        int len = (n + k) / (k + 1);
        PointSet ps = gen_parallel_paths(k, len, d);
        ps.coords.resize(static_cast<size_t>(n) * d);
        ps.n = n;
        return ps;
    }
    throw std::invalid_argument("unknown generator: " + generator);
}

InstanceReport check_instance(const InstanceCase& c) {
    InstanceReport rep;
    rep.instance = c;
    PointSet pts = make_instance(c.generator, c.n, c.d, c.seed);
    AlgorithmConfig config;
    config.seed = c.seed;
    config.strategy = c.strategy;
    RunInternals internals;
    RunResult run = run_full(pts, config, &internals);
    rep.tree_cost = run.tree.total_weight;
    rep.cycle_cost = run.cycle.cost;
    rep.rounds = run.ledger.rounds();
    auto tag = [&](const std::string& what) {
        return c.generator + " n=" + std::to_string(c.n) + " d=" + std::to_string(c.d) +
               " seed=" + std::to_string(c.seed) + " " + strategy_name(c.strategy) + ": " +
               what;
    };
    auto problem = [&](const std::string& msg) {
        if (rep.problems.size() < 16) rep.problems.push_back(tag(msg));
    };

    rep.tree_ok = true;
    if (static_cast<int>(run.tree.edges.size()) != pts.n - 1) {
        rep.tree_ok = false;
        problem("tree has " + std::to_string(run.tree.edges.size()) + " edges, expected " +
                std::to_string(pts.n - 1));
    }
    UnionFind uf(pts.n);
    for (const auto& e : run.tree.edges) {
        if (e.u < 0 || e.u >= pts.n || e.v < 0 || e.v >= pts.n || e.u == e.v ||
            e.weight < 0) {
            rep.tree_ok = false;
            problem("bad tree edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                    ")");
        } else if (!uf.unite(e.u, e.v)) {
            rep.tree_ok = false;
            problem("tree edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                    ") closes a cycle");
        }
    }
    if (rep.tree_ok)
        for (int i = 1; i < pts.n; ++i)
            if (uf.find(i) != uf.find(0)) {
                rep.tree_ok = false;
                problem("tree is disconnected");
                break;
            }

    std::vector<std::pair<int, int>> tree_pairs;
    tree_pairs.reserve(run.tree.edges.size());
    for (const auto& e : run.tree.edges) tree_pairs.push_back({e.u, e.v});
    TourCheck tc = validate_tour(run.tour, tree_pairs);
    rep.tour_ok = tc.ok;
    for (const auto& v : tc.violations) problem("tour: " + v);

    OracleTree mst = exact_mst(pts);
    rep.exact_cost = mst.weight;
    rep.ratio = mst.weight == 0.0 ? 1.0 : rep.tree_cost / mst.weight;
    rep.tsp_ok = mst.weight <= rep.cycle_cost && rep.cycle_cost <= 2.0 * rep.tree_cost;
    if (!rep.tsp_ok)
        problem("tsp sandwich: exact=" + std::to_string(mst.weight) +
                " cycle=" + std::to_string(rep.cycle_cost) +
                " tree=" + std::to_string(rep.tree_cost));

    if (internals.compact.n >= 1) {
        double s = component_sum(internals.compact);
        double em = exact_mst(internals.compact).weight;
        rep.sum_ok = em <= s && s <= 2.0 * em;
        if (internals.compact.n == 1) rep.sum_ok = s == 0.0;
        if (!rep.sum_ok)
            problem("component-sum sandwich: exact=" + std::to_string(em) +
                    " sum=" + std::to_string(s));
    } else {
        rep.sum_ok = true;
    }

    rep.hierarchy_ok = true;
    const PartitionHierarchy& h = internals.hierarchy;
    if (!h.levels.empty()) {
        const PointSet& compact = internals.compact;
        const int g = alpha_g(run.config.alpha);
        for (int j = 0; j < h.top && rep.hierarchy_ok; ++j)
            if (!refines(h.levels[j], h.levels[j + 1])) {
                rep.hierarchy_ok = false;
                problem("level " + std::to_string(j) +
                        " partition does not refine the next level");
            }
        for (int j = 0; j <= h.top && rep.hierarchy_ok; ++j) {
            int k = checkpoint_k_for(j, g);
            double cell = std::pow(static_cast<double>(run.config.alpha), k + 1) /
                          run.config.beta;
            for (int i = 0; i < compact.n; ++i) {
                int leader = h.levels[j].leader[i];
                if (!(cell_of(compact, i, cell, internals.shift) ==
                      cell_of(compact, leader, cell, internals.shift))) {
                    rep.hierarchy_ok = false;
                    problem("level " + std::to_string(j) + " component leaves its cell");
                    break;
                }
            }
        }
        UnionFind suf(compact.n);
        for (int j = 0; j <= h.top && rep.hierarchy_ok; ++j) {
            if (j < static_cast<int>(internals.spanner.delta.size()))
                for (const auto& [u, v] : internals.spanner.delta[j]) suf.unite(u, v);
            Partition sp;
            sp.leader.resize(compact.n);
            for (int i = 0; i < compact.n; ++i) sp.leader[i] = suf.find(i);
            sp.canonicalize_smallest();
            if (!refines(sp, h.levels[j])) {
                rep.hierarchy_ok = false;
                problem("graph components at level " + std::to_string(j) +
                        " are split across partition blocks");
            }
        }
    }
    return rep;
}

std::vector<InstanceCase> standard_matrix() {
    std::vector<InstanceCase> cases;
    const std::vector<std::string> generators{"uniform", "gaussian-clusters",
                                             "parallel-paths"};
    for (int n : {50, 100, 300, 500})
        for (int d : {2, 8, 16})
            for (const std::string& gen : generators)
                for (uint64_t seed = 1; seed <= 5; ++seed)
                    cases.push_back({gen, n, d, seed, SpannerStrategy::cell_leader});
    const SpannerStrategy extra[] = {SpannerStrategy::exact_threshold,
                                     SpannerStrategy::sampled_leader};
    int i = 0;
    for (uint64_t seed = 6; seed <= 15; ++seed, ++i) {
        cases.push_back({"uniform", 300, 8, seed, extra[i % 2]});
        cases.push_back({"gaussian-clusters", 100, 2, seed, extra[(i + 1) % 2]});
    }
    return cases;
}

SuiteResult suite_instances(const std::vector<InstanceCase>& cases) {
    SuiteResult suite;
    suite.name = "instances";
    for (const InstanceCase& c : cases) {
        InstanceReport rep = check_instance(c);
        std::string head = rep.problems.empty() ? "" : rep.problems.front();
        suite.note(rep.tree_ok, head);
        suite.note(rep.tour_ok, head);
        suite.note(rep.tsp_ok, head);
        suite.note(rep.sum_ok, head);
        suite.note(rep.hierarchy_ok, head);
    }
    return suite;
}

namespace {

uint64_t draw(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    return rng_word(seed, rng_tag::generate, a, b, c);
}

std::vector<int> shuffled_ids(int count, uint64_t seed, uint64_t stream) {
    std::vector<int> ids(count);
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = count - 1; i > 0; --i)
        std::swap(ids[i], ids[draw(seed, stream, 7000 + i, 0) % (i + 1)]);
    return ids;
}

}  // namespace

SuiteResult suite_joins(int count, uint64_t seed) {
    SuiteResult suite;
    suite.name = "joins";
    for (int inst = 0; inst < count; ++inst) {
        const uint64_t s = inst;
        int clusters = 2 + static_cast<int>(draw(seed, s, 1, 0) % 7);
        std::vector<int> size(clusters);
        int total = 0;
        for (int c = 0; c < clusters; ++c) {
            size[c] = 1 + static_cast<int>(draw(seed, s, 2, c) % 6);
            total += size[c];
        }
        std::vector<int> ids = shuffled_ids(total, seed, s);
        std::vector<std::vector<int>> members(clusters);
        int next = 0;
        for (int c = 0; c < clusters; ++c)
            for (int i = 0; i < size[c]; ++i) members[c].push_back(ids[next++]);

        std::map<int, std::vector<std::pair<int, int>>> subtrees;
        std::map<int, EulerTour> subtours;
        std::vector<std::pair<int, int>> all_edges;
        for (int c = 0; c < clusters; ++c) {
            std::vector<std::pair<int, int>> edges;
            for (int i = 1; i < size[c]; ++i) {
                int p = static_cast<int>(draw(seed, s, 3, c * 64 + i) % i);
                edges.push_back({members[c][i], members[c][p]});
            }
            all_edges.insert(all_edges.end(), edges.begin(), edges.end());
            ClusterTree t = tree_from_edges(
                members[c], edges,
                members[c][draw(seed, s, 4, c) % members[c].size()]);
            subtours[c] = dfs_euler_tour(t, t.root());
            subtrees[c] = std::move(edges);
        }

        ClusterTree ct;
        ct.nodes.resize(clusters);
        std::iota(ct.nodes.begin(), ct.nodes.end(), 0);
        std::vector<std::pair<int, int>> cluster_edges;
        for (int c = 1; c < clusters; ++c) {
            int p = static_cast<int>(draw(seed, s, 5, c) % c);
            cluster_edges.push_back({c, p});
            int x = members[c][draw(seed, s, 6, c) % members[c].size()];
            int y = members[p][draw(seed, s, 7, c) % members[p].size()];
            ct.edge_map[{c, p}] = {x, y};
            ct.edge_map[{p, c}] = {y, x};
            all_edges.push_back({x, y});
        }
        ClusterTree shape = tree_from_edges(
            ct.nodes, cluster_edges, static_cast<int>(draw(seed, s, 8, 0) % clusters));
        ct.par = shape.par;
        ct.child_order = shape.child_order;
        EulerTour cluster_tour = dfs_euler_tour(shape, shape.root());

        std::string what = "join instance " + std::to_string(inst);
        try {
            JoinResult jr = euler_tour_join(ct, cluster_tour, subtrees, subtours);
            TourCheck tc = validate_tour(jr.tour, all_edges);
            suite.note(tc.ok, what + ": " + (tc.ok ? "" : tc.violations.front()));
        } catch (const std::exception& e) {
            suite.note(false, what + ": " + e.what());
        }
    }
    return suite;
}

SuiteResult suite_decay(int trials, uint64_t seed) {
    SuiteResult suite;
    suite.name = "decay";
    struct GraphCase {
        std::string name;
        int n;
        std::vector<std::pair<int, int>> edges;
    };
    std::vector<GraphCase> graphs;
    for (int n : {10, 50}) {
        GraphCase path{"path-" + std::to_string(n), n, {}};
        for (int i = 1; i < n; ++i) path.edges.push_back({i - 1, i});
        graphs.push_back(std::move(path));
        GraphCase star{"star-" + std::to_string(n), n, {}};
        for (int i = 1; i < n; ++i) star.edges.push_back({0, i});
        graphs.push_back(std::move(star));
    }
    for (int n : {30, 50}) {
        GraphCase random{"random-" + std::to_string(n), n, {}};
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng_unit(seed, rng_tag::generate, 9000 + n, i, j) < 2.5 / n)
                    random.edges.push_back({i, j});
        graphs.push_back(std::move(random));
    }

    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        const GraphCase& graph = graphs[gi];
        UnionFind uf(graph.n);
        for (auto [u, v] : graph.edges) uf.unite(u, v);
        std::set<int> roots;
        for (int i = 0; i < graph.n; ++i) roots.insert(uf.find(i));
        const int final_components = static_cast<int>(roots.size());
        const double start_excess = graph.n - final_components;

        for (int h = 1; h <= 6; ++h) {
            double total = 0.0, total_sq = 0.0;
            for (int trial = 0; trial < trials; ++trial) {
                Partition p = Partition::singletons(graph.n);
                for (int round = 1; round <= h; ++round) {
                    CoinFn coin = [&](int leader) {
                        return rng_coin(seed, rng_tag::compress, gi * 8 + h,
                                        static_cast<uint64_t>(trial),
                                        (static_cast<uint64_t>(round) << 32) |
                                            static_cast<uint32_t>(leader));
                    };
                    p = leader_compression_round(p, graph.edges, false, coin).partition;
                }
                double excess = p.component_count() - final_components;
                total += excess;
                total_sq += excess * excess;
            }
            double mean = total / trials;
            double var = std::max(0.0, total_sq / trials - mean * mean);
            double se = std::sqrt(var / trials);
            double bound = std::pow(0.75, h) * start_excess + 3.0 * se;
            suite.note(mean <= bound,
                       graph.name + " h=" + std::to_string(h) + ": mean " +
                           std::to_string(mean) + " > bound " + std::to_string(bound));
        }
    }
    return suite;
}

SuiteResult suite_cuts(int trials, uint64_t seed) {
    SuiteResult suite;
    suite.name = "cuts";
    struct CutCase {
        double w;
        double level;
        int d;
    };
    const std::vector<CutCase> cases{{1, 8, 2},  {1, 16, 2},   {2, 16, 4},
                                     {1, 8, 8},  {3, 32, 2},   {0.5, 8, 4}};
    for (size_t ci = 0; ci < cases.size(); ++ci) {
        const CutCase& c = cases[ci];
        std::vector<double> x(c.d, 0.0), y(c.d, c.w / std::sqrt(c.d));
        int cuts = 0;
        for (int t = 0; t < trials; ++t) {
            ShiftVector shift =
                make_shift(rng_word(seed, rng_tag::shift, ci, t, 0), c.d, c.level);
            if (!(cell_of(x.data(), c.d, c.level, shift) ==
                  cell_of(y.data(), c.d, c.level, shift)))
                ++cuts;
        }
        double rate = static_cast<double>(cuts) / trials;
        double se = std::sqrt(rate * (1.0 - rate) / trials);
        double bound = c.w * std::sqrt(c.d) / c.level + 3.0 * se;
        suite.note(rate <= bound, "w=" + std::to_string(c.w) + " L=" +
                                      std::to_string(c.level) + " d=" + std::to_string(c.d) +
                                      ": rate " + std::to_string(rate) + " > bound " +
                                      std::to_string(bound));
    }
    return suite;
}

}  // namespace mstsim
