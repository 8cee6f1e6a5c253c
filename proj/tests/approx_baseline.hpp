#pragma once

// Tree-cost / exact-MST ratios measured on 50 uniform instances
// (n=300, d=8, seeds 1..50) per strategy. Regenerate with the
// calibrate tool; the acceptance test allows 1.25x the median and
// 1.5x the max before failing.

namespace mstsim_test {

struct RatioBaseline {
    double median;
    double max;
};

inline constexpr int kBaselineSeeds = 50;
inline constexpr int kBaselineN = 300;
inline constexpr int kBaselineD = 8;

inline constexpr RatioBaseline kBaselineExactThreshold{1.310600, 1.392797};
inline constexpr RatioBaseline kBaselineCellLeader{1.314858, 1.375903};
inline constexpr RatioBaseline kBaselineSampledLeader{1.362971, 1.447569};

}  // namespace mstsim_test
