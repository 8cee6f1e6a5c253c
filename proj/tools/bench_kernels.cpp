#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mstsim/common.hpp"
#include "mstsim/geometry.hpp"
#include "mstsim/oracle.hpp"
#include "mstsim/partition.hpp"
#include "mstsim/points.hpp"
#include "mstsim/rng.hpp"
#include "mstsim/spanner.hpp"

using namespace mstsim;

namespace {

double timed_ms(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
}

struct BenchRow {
    std::string name;
    double serial_ms = 0.0;
    double parallel_ms = 0.0;
    bool match = false;
};

// Runs the kernel twice with the parallel toggle off/on and compares the checksums.
BenchRow compare(const std::string& name, const std::function<double()>& kernel) {
    BenchRow row;
    row.name = name;
    double serial_sum = 0.0, parallel_sum = 0.0;
    set_parallel_enabled(false);
    row.serial_ms = timed_ms([&] { serial_sum = kernel(); });
    set_parallel_enabled(true);
    row.parallel_ms = timed_ms([&] { parallel_sum = kernel(); });
    row.match = serial_sum == parallel_sum;
    return row;
}

double coord_sum(const PointSet& ps) {
    double s = 0.0;
    for (double c : ps.coords) s += c;
    return s;
}

}  // namespace

int main() {
    std::vector<BenchRow> rows;

    {
        PointSet ps = gen_uniform(20000, 64, 1);
        rows.push_back(compare("jl_project 20000x64->32",
                               [&] { return coord_sum(jl_project(ps, 32, 7)); }));
    }

    {
        PointSet ps = gen_uniform(2500, 8, 2);
        rows.push_back(compare("exact_mst n=2500 d=8", [&] { return exact_mst(ps).weight; }));
    }

    {
        PointSet raw = gen_uniform(20000, 8, 3);
        AlgorithmConfig config;
        validate_config(config, raw.d);
        auto [pts, norm] = normalize_aspect(raw, config);
        ShiftVector shift = make_shift(11, pts.d, norm.delta);
        double t = norm.delta / 16.0;
        rows.push_back(compare("spanner level n=20000 d=8", [&] {
            EdgeSet es =
                build_spanner_level(pts, t, shift, config, SpannerStrategy::cell_leader);
            return static_cast<double>(es.size());
        }));
    }

    {
        const int n = 300000;
        std::vector<std::pair<int, int>> edges;
        edges.reserve(2 * n);
        for (int i = 1; i < n; ++i) edges.emplace_back(i - 1, i);
        for (int i = 0; i < n; ++i)
            edges.emplace_back(i, static_cast<int>(rng_word(4, 900, i) % n));
        Partition p = Partition::singletons(n);
        CoinFn coin = [](int leader) { return rng_coin(4, 901, leader); };
        rows.push_back(compare("compression round n=300000", [&] {
            return static_cast<double>(
                leader_compression_round(p, edges, false, coin).partition.component_count());
        }));
    }

    std::printf("%-28s %12s %12s %9s %7s\n", "kernel", "serial_ms", "parallel_ms",
                "speedup", "match");
    int mismatches = 0;
    for (const BenchRow& r : rows) {
        double speedup = r.parallel_ms > 0.0 ? r.serial_ms / r.parallel_ms : 0.0;
        std::printf("%-28s %12.2f %12.2f %8.2fx %7s\n", r.name.c_str(), r.serial_ms,
                    r.parallel_ms, speedup, r.match ? "yes" : "NO");
        if (!r.match) ++mismatches;
    }
    return mismatches == 0 ? 0 : 1;
}
