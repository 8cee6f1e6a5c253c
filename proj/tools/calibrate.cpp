#include <algorithm>
#include <cstdio>
#include <vector>

#include "mstsim/driver.hpp"
#include "mstsim/oracle.hpp"
#include "mstsim/points.hpp"

using namespace mstsim;

namespace {

constexpr int kSeeds = 50;
constexpr int kN = 300;
constexpr int kD = 8;

struct Stats {
    double median = 0.0;
    double max = 0.0;
};

Stats ratio_stats(SpannerStrategy strategy) {
    std::vector<double> ratios;
    ratios.reserve(kSeeds);
    for (int seed = 1; seed <= kSeeds; ++seed) {
        PointSet pts = gen_uniform(kN, kD, seed);
        AlgorithmConfig config;
        config.seed = seed;
        config.strategy = strategy;
        RunResult run = run_full(pts, config);
        double exact = exact_mst(pts).weight;
        ratios.push_back(exact > 0.0 ? run.tree.total_weight / exact : 1.0);
        std::fprintf(stderr, "%s seed %d: ratio %.4f\n",
                     strategy_name(strategy).c_str(), seed, ratios.back());
    }
    std::sort(ratios.begin(), ratios.end());
    Stats s;
    s.median = 0.5 * (ratios[kSeeds / 2 - 1] + ratios[kSeeds / 2]);
    s.max = ratios.back();
    return s;
}

}  // namespace

// Prints the frozen-ratio header consumed by the acceptance test. Regenerate with:
//   ./calibrate > tests/approx_baseline.hpp
int main() {
    Stats exact = ratio_stats(SpannerStrategy::exact_threshold);
    Stats cell = ratio_stats(SpannerStrategy::cell_leader);
    Stats sampled = ratio_stats(SpannerStrategy::sampled_leader);

    std::printf("#pragma once\n\n");
    std::printf("// Tree-cost / exact-MST ratios measured on %d uniform instances\n", kSeeds);
    std::printf("// (n=%d, d=%d, seeds 1..%d) per strategy. Regenerate with the\n", kN, kD,
                kSeeds);
    std::printf("// calibrate tool; the acceptance test allows 1.25x the median and\n");
    std::printf("// 1.5x the max before failing.\n\n");
    std::printf("namespace mstsim_test {\n\n");
    std::printf("struct RatioBaseline {\n    double median;\n    double max;\n};\n\n");
    std::printf("inline constexpr int kBaselineSeeds = %d;\n", kSeeds);
    std::printf("inline constexpr int kBaselineN = %d;\n", kN);
    std::printf("inline constexpr int kBaselineD = %d;\n\n", kD);
    std::printf("inline constexpr RatioBaseline kBaselineExactThreshold{%.6f, %.6f};\n",
                exact.median, exact.max);
    std::printf("inline constexpr RatioBaseline kBaselineCellLeader{%.6f, %.6f};\n",
                cell.median, cell.max);
    std::printf("inline constexpr RatioBaseline kBaselineSampledLeader{%.6f, %.6f};\n",
                sampled.median, sampled.max);
    std::printf("\n}  // namespace mstsim_test\n");
    return 0;
}
