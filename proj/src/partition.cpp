#include "mstsim/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mstsim/common.hpp"
#include "mstsim/rng.hpp"
#include "mstsim/runtime.hpp"
#include "mstsim/union_find.hpp"

namespace mstsim {

Partition Partition::singletons(int n) {
    Partition p;
    p.leader.resize(n);
    std::iota(p.leader.begin(), p.leader.end(), 0);
    return p;
}

Partition Partition::one_block(int n) {
    Partition p;
    p.leader.assign(n, 0);
    return p;
}

int Partition::component_count() const {
    int count = 0;
    for (int i = 0; i < n(); ++i)
        if (leader[i] == i) ++count;
    return count;
}

bool Partition::canonical() const {
    for (int i = 0; i < n(); ++i) {
        int l = leader[i];
        if (l < 0 || l >= n() || leader[l] != l) return false;
    }
    return true;
}

void Partition::canonicalize_smallest() {
    std::vector<int> smallest(n(), std::numeric_limits<int>::max());
    for (int i = 0; i < n(); ++i) smallest[leader[i]] = std::min(smallest[leader[i]], i);
    for (int i = 0; i < n(); ++i) leader[i] = smallest[leader[i]];
}

Partition merge_partitions(const Partition& p, const Partition& q) {
    if (p.n() != q.n()) throw std::invalid_argument("merge_partitions: ground sets differ");
    UnionFind uf(p.n());
    for (int i = 0; i < p.n(); ++i) {
        uf.unite(i, p.leader[i]);
        uf.unite(i, q.leader[i]);
    }
    Partition out;
    out.leader.resize(p.n());
    for (int i = 0; i < p.n(); ++i) out.leader[i] = uf.find(i);
    out.canonicalize_smallest();
    return out;
}

bool refines(const Partition& p, const Partition& q) {
    if (p.n() != q.n()) throw std::invalid_argument("refines: ground sets differ");
    std::vector<int> image(p.n(), -1);
    for (int i = 0; i < p.n(); ++i) {
        int block = p.leader[i];
        if (image[block] == -1)
            image[block] = q.leader[i];
        else if (image[block] != q.leader[i])
            return false;
    }
    return true;
}

namespace {

// Edge storage seen by a compression round: contiguous chunks with stable global ids.
struct EdgeChunks {
    std::vector<std::pair<const std::pair<int, int>*, size_t>> chunks;
    std::vector<long long> base_id;

    static EdgeChunks from(const std::vector<std::pair<int, int>>& edges) {
        EdgeChunks c;
        c.chunks.push_back({edges.data(), edges.size()});
        c.base_id.push_back(0);
        return c;
    }
    static EdgeChunks from(const LeveledSpanner& spanner, int level_exponent) {
        EdgeChunks c;
        long long base = 0;
        for (int j = 0; j <= std::min(level_exponent, spanner.top); ++j) {
            c.chunks.push_back({spanner.delta[j].data(), spanner.delta[j].size()});
            c.base_id.push_back(base);
            base += static_cast<long long>(spanner.delta[j].size());
        }
        return c;
    }
};

constexpr uint64_t kNoKey = ~0ull;

inline uint64_t pack_key(int sender, long long edge_id) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(sender)) << 32) |
           static_cast<uint32_t>(edge_id);
}

inline void atomic_min(std::atomic<uint64_t>& slot, uint64_t key) {
    uint64_t cur = slot.load(std::memory_order_relaxed);
    while (key < cur && !slot.compare_exchange_weak(cur, key, std::memory_order_relaxed)) {
    }
}

CompressionOutcome compression_round_impl(const Partition& p, const EdgeChunks& edges,
                                          bool collect_edges, const CoinFn& coin) {
    if (!p.canonical())
        throw std::invalid_argument("leader compression needs a canonical partition");
    int n = p.n();
    CompressionOutcome out;
    out.partition = p;
    out.rounds_used = 1;

    // Every vertex carries its leader's bit.
    std::vector<char> bit(n, 0);
    for (int i = 0; i < n; ++i)
        if (p.leader[i] == i) bit[i] = coin(i) ? 1 : 0;
    for (int i = 0; i < n; ++i) bit[i] = bit[p.leader[i]];

    // Bit-1 vertices notify neighbors; each bit-0 vertex keeps the smallest
    // (sender id, edge id) notification.
    std::vector<std::atomic<uint64_t>> selected(n);
    for (auto& s : selected) s.store(kNoKey, std::memory_order_relaxed);
    for (size_t c = 0; c < edges.chunks.size(); ++c) {
        const auto* data = edges.chunks[c].first;
        long long count = static_cast<long long>(edges.chunks[c].second);
        long long base = edges.base_id[c];
#pragma omp parallel for schedule(static) if (parallel_enabled())
        for (long long e = 0; e < count; ++e) {
            int u = data[e].first;
            int v = data[e].second;
            if (bit[u] == bit[v]) continue;
            if (bit[u])
                atomic_min(selected[v], pack_key(u, base + e));
            else
                atomic_min(selected[u], pack_key(v, base + e));
        }
    }

    // Each bit-0 leader adopts the selection of its smallest selecting member.
    std::vector<std::atomic<uint64_t>> chosen_member(n);
    for (auto& s : chosen_member) s.store(kNoKey, std::memory_order_relaxed);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int y = 0; y < n; ++y) {
        if (selected[y].load(std::memory_order_relaxed) == kNoKey) continue;
        atomic_min(chosen_member[p.leader[y]], static_cast<uint64_t>(y));
    }

    // Re-point whole components onto the notifier's leader (which has bit 1, so no
    // chains can form) and optionally record the used edge.
    std::vector<int> target(n, -1);
    for (int z = 0; z < n; ++z) {
        uint64_t member = chosen_member[z].load(std::memory_order_relaxed);
        if (member == kNoKey) continue;
        int y = static_cast<int>(member);
        int x = static_cast<int>(selected[y].load(std::memory_order_relaxed) >> 32);
        target[z] = p.leader[x];
        if (collect_edges) out.merge_edges.emplace_back(x, y);
    }
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 0; i < n; ++i) {
        int t = target[p.leader[i]];
        if (t >= 0) out.partition.leader[i] = t;
    }
    return out;
}

}  // namespace

CompressionOutcome leader_compression_round(const Partition& p, const LeveledSpanner& spanner,
                                            int level_exponent, bool collect_edges,
                                            const CoinFn& coin) {
    return compression_round_impl(p, EdgeChunks::from(spanner, level_exponent), collect_edges,
                                  coin);
}

CompressionOutcome leader_compression_round(const Partition& p,
                                            const std::vector<std::pair<int, int>>& edges,
                                            bool collect_edges, const CoinFn& coin) {
    return compression_round_impl(p, EdgeChunks::from(edges), collect_edges, coin);
}

namespace {

CoinFn stage_coin(const AlgorithmConfig& config, int level_exponent, int round) {
    uint64_t seed = config.seed;
    return [seed, level_exponent, round](int leader) {
        return rng_coin(seed, rng_tag::compress, level_exponent, round, leader);
    };
}

// Components touched by a spanner edge crossing them are incomplete.
std::vector<char> mark_incomplete(const Partition& p, const LeveledSpanner& spanner,
                                  int level_exponent) {
    std::vector<char> incomplete(p.n(), 0);
    spanner.for_each_edge_upto(level_exponent, [&](int u, int v, long long) {
        if (p.leader[u] != p.leader[v]) {
            incomplete[p.leader[u]] = 1;
            incomplete[p.leader[v]] = 1;
        }
    });
    return incomplete;
}

// Star-merge the listed leader groups onto each group's smallest leader.
void merge_leader_groups(Partition& p, const std::vector<std::vector<int>>& groups) {
    std::vector<int> target(p.n(), -1);
    for (const auto& group : groups) {
        if (group.size() < 2) continue;
        int center = *std::min_element(group.begin(), group.end());
        for (int z : group) target[z] = center;
    }
    for (int i = 0; i < p.n(); ++i) {
        int t = target[p.leader[i]];
        if (t >= 0) p.leader[i] = t;
    }
}

}  // namespace

Partition part1(const PointSet& points, int level_exponent, const ShiftVector& shift,
                const LeveledSpanner& spanner, const AlgorithmConfig& config) {
    int g = alpha_g(config.alpha);
    if (level_exponent < 0 || (level_exponent & ((1 << g) - 1)) != 0)
        throw std::invalid_argument("part1 level must be a power of alpha");
    int k = checkpoint_k_for(level_exponent, g);
    double t = std::ldexp(1.0, level_exponent);

    // Initial partition: one component per level-(t/beta) cell, led by the smallest id.
    std::vector<std::pair<std::vector<long long>, int>> keyed(points.n);
    for (int i = 0; i < points.n; ++i)
        keyed[i] = {cell_of(points, i, t / config.beta, shift).coords, i};
    std::sort(keyed.begin(), keyed.end());
    Partition p;
    p.leader.resize(points.n);
    for (size_t i = 0; i < keyed.size(); ++i) {
        bool starts_group = i == 0 || keyed[i].first != keyed[i - 1].first;
        p.leader[keyed[i].second] = starts_group ? keyed[i].second : p.leader[keyed[i - 1].second];
    }

    for (int round = 1; round <= config.h; ++round)
        p = leader_compression_round(p, spanner, level_exponent, false,
                                     stage_coin(config, level_exponent, round))
                .partition;

    // Merge incomplete components whose leaders share a big cell.
    std::vector<char> incomplete = mark_incomplete(p, spanner, level_exponent);
    double big_level = std::pow(double(config.alpha), k + 1) / config.beta;
    std::map<std::vector<long long>, std::vector<int>> by_cell;
    for (int z = 0; z < points.n; ++z)
        if (p.leader[z] == z && incomplete[z])
            by_cell[cell_of(points, z, big_level, shift).coords].push_back(z);
    std::vector<std::vector<int>> groups;
    groups.reserve(by_cell.size());
    for (auto& kv : by_cell) groups.push_back(std::move(kv.second));
    merge_leader_groups(p, groups);
    return p;
}

Partition part2(const PointSet& points, int level_exponent, const LeveledSpanner& spanner,
                const Partition& p_lo, const Partition& p_hi, const AlgorithmConfig& config) {
    int g = alpha_g(config.alpha);
    if (level_exponent <= 0 || (level_exponent & ((1 << g) - 1)) == 0)
        throw std::invalid_argument("part2 level must fall strictly between powers of alpha");
    if (p_lo.n() != points.n || p_hi.n() != points.n)
        throw std::invalid_argument("part2 partitions must cover the point set");
    if (!refines(p_lo, p_hi))
        throw consistency_error("part2: lower partition does not refine the upper one");

    Partition p = p_lo;
    p.canonicalize_smallest();
    for (int round = 1; round <= config.h; ++round)
        p = leader_compression_round(p, spanner, level_exponent, false,
                                     stage_coin(config, level_exponent, round))
                .partition;

    // Merge incomplete components whose leaders share an upper-partition component.
    std::vector<char> incomplete = mark_incomplete(p, spanner, level_exponent);
    std::map<int, std::vector<int>> by_block;
    for (int z = 0; z < points.n; ++z)
        if (p.leader[z] == z && incomplete[z]) by_block[p_hi.leader[z]].push_back(z);
    std::vector<std::vector<int>> groups;
    groups.reserve(by_block.size());
    for (auto& kv : by_block) groups.push_back(std::move(kv.second));
    merge_leader_groups(p, groups);
    return p;
}

std::vector<LevelEdge> part3(const PointSet& points, int level_exponent,
                             const LeveledSpanner& spanner, const Partition& p_prev,
                             const Partition& p_target, const AlgorithmConfig& config) {
    if (level_exponent <= 0) throw std::invalid_argument("part3 level exponent must be >= 1");
    if (p_prev.n() != points.n || p_target.n() != points.n)
        throw std::invalid_argument("part3 partitions must cover the point set");
    if (!refines(p_prev, p_target))
        throw consistency_error("part3: previous level does not refine the target level");

    Partition p = p_prev;
    p.canonicalize_smallest();
    std::vector<LevelEdge> edges;
    for (int round = 1; round <= config.h; ++round) {
        CompressionOutcome step = leader_compression_round(
            p, spanner, level_exponent, true, stage_coin(config, level_exponent, round));
        for (const auto& e : step.merge_edges) edges.push_back({e.first, e.second, round});
        p = std::move(step.partition);
    }

    for (int i = 0; i < points.n; ++i)
        if (p_target.leader[i] != p_target.leader[p.leader[i]])
            throw consistency_error("part3: compression escaped its target component");

    // Star the leftover leaders within each target component onto the smallest one.
    std::map<int, std::vector<int>> by_block;
    for (int z = 0; z < points.n; ++z)
        if (p.leader[z] == z) by_block[p_target.leader[z]].push_back(z);
    for (const auto& kv : by_block) {
        const std::vector<int>& leaders = kv.second;
        int center = *std::min_element(leaders.begin(), leaders.end());
        for (int z : leaders)
            if (z != center) edges.push_back({center, z, 0});
    }

    long long expected = p_prev.component_count() - p_target.component_count();
    if (static_cast<long long>(edges.size()) != expected)
        throw consistency_error("part3: produced " + std::to_string(edges.size()) +
                                " edges, expected " + std::to_string(expected));
    return edges;
}

PartitionHierarchy run_pipeline(const PointSet& points, const ShiftVector& shift,
                                const LeveledSpanner& spanner, const AlgorithmConfig& config,
                                int top_exponent, RoundLedger* ledger) {
    int g = alpha_g(config.alpha);
    if (top_exponent < 1 || (top_exponent & ((1 << g) - 1)) != 0)
        throw std::invalid_argument("pipeline top exponent must be a positive power-of-alpha level");

    PartitionHierarchy hier;
    hier.top = top_exponent;
    hier.levels.resize(top_exponent + 1);
    hier.edges.resize(top_exponent + 1);

    auto stage_words = [&](int j) {
        return 2 * spanner.edge_count_upto(j) + points.n;
    };

    // Checkpoint levels t = alpha^k, all independent.
    {
        std::vector<RoundLedger> subs;
        for (int k = 0; k * (1 << g) <= top_exponent; ++k) {
            int j = k << g;
            hier.levels[j] = part1(points, j, shift, spanner, config);
            if (ledger) {
                RoundLedger s = ledger->sub();
                s.set_stage("part1/level " + std::to_string(j));
                s.charge("sort", points.n, points.d);
                for (int round = 0; round < config.h; ++round)
                    s.charge("leader_compression_round", stage_words(j), 2);
                s.charge("pram_simulation", stage_words(j), 2);
                s.charge("sort", points.n, points.d);
                subs.push_back(std::move(s));
            }
        }
        if (ledger) ledger->merge_parallel(subs);
    }

    // Intermediate levels, one wave per 2-adic valuation class, largest kappa first.
    for (int v = g - 1; v >= 0; --v) {
        std::vector<RoundLedger> subs;
        for (int j = 1; j < top_exponent; ++j) {
            if (v2(j) != v) continue;
            int span = 1 << v;  // t/kappa and t*kappa sit span exponents away
            hier.levels[j] =
                part2(points, j, spanner, hier.levels[j - span], hier.levels[j + span], config);
            if (ledger) {
                RoundLedger s = ledger->sub();
                s.set_stage("part2/level " + std::to_string(j));
                s.charge("sort", points.n, points.d);
                for (int round = 0; round < config.h; ++round)
                    s.charge("leader_compression_round", stage_words(j), 2);
                s.charge("pram_simulation", stage_words(j), 2);
                s.charge("sort", points.n, points.d);
                subs.push_back(std::move(s));
            }
        }
        if (ledger) ledger->merge_parallel(subs);
    }

    // Edge generation for every level, all independent once the hierarchy exists.
    {
        std::vector<RoundLedger> subs;
        for (int j = 1; j <= top_exponent; ++j) {
            hier.edges[j] = part3(points, j, spanner, hier.levels[j - 1], hier.levels[j], config);
            if (ledger) {
                RoundLedger s = ledger->sub();
                s.set_stage("part3/level " + std::to_string(j));
                s.charge("sort", points.n, points.d);
                for (int round = 0; round < config.h; ++round)
                    s.charge("leader_compression_round", stage_words(j), 2);
                s.charge("sort", points.n, points.d);
                subs.push_back(std::move(s));
            }
        }
        if (ledger) ledger->merge_parallel(subs);
    }
    return hier;
}

void write_hierarchy_dump(const std::string& path, const PartitionHierarchy& hierarchy) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write hierarchy dump: " + path);
    char buf[64];
    for (int j = 0; j <= hierarchy.top; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", std::ldexp(1.0, j));
        const Partition& p = hierarchy.levels[j];
        for (int i = 0; i < p.n(); ++i)
            out << buf << " " << i << " " << p.leader[i] << "\n";
    }
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace mstsim
