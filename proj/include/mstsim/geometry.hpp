#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mstsim/points.hpp"

namespace mstsim {

enum class SpannerStrategy { exact_threshold, cell_leader, sampled_leader };

SpannerStrategy strategy_from_name(const std::string& name);  // throws std::invalid_argument
std::string strategy_name(SpannerStrategy s);

struct AlgorithmConfig {
    int alpha = 16;           // must be 2^(2^g)
    double beta = 0.0;        // 0 = derive default max(2*sqrt(d), 8) at validation time
    int h = 6;                // compression rounds per stage
    double epsilon = 0.5;     // sampled-leader density knob
    uint64_t seed = 1;
    bool strict_memory = false;
    long long machine_memory_s = 0;  // words per machine, strict mode only
    SpannerStrategy strategy = SpannerStrategy::cell_leader;
};

// g with alpha = 2^(2^g).
int alpha_g(int alpha);  // throws std::invalid_argument if alpha is not of that form

// Fills beta's default and checks alpha form, beta > sqrt(d), h >= 1, epsilon in (0,1).
void validate_config(AlgorithmConfig& config, int d);

// Advisory only: reports which of the asymptotic parameter relations hold at this (n, d).
std::vector<std::string> theory_check(const AlgorithmConfig& config, int n, int d);

// Coordinate bound after normalization: smallest power of 2 >= 4*n^2/log2(n).
double delta_for_n(int n);

// Points are snapped onto centers of cells at this (power-of-2) side length, which keeps
// the minimum pairwise distance above stretch_bound*1 so the level-1 spanner is empty.
constexpr double kSnapLevel = 4.0;

// Level schedule. Thresholds are t = 2^j for j = 0..top_exponent; checkpoint levels are
// t = alpha^k. The top checkpoint satisfies alpha^H >= 2*sqrt(d)*Delta so the final
// spanner level spans every pair of points.
int top_checkpoint_H(const AlgorithmConfig& config, double delta, int d);
inline int top_exponent(int H, int g) { return H << g; }

// k with alpha^(k-1) < t <= alpha^k for t = 2^j (k = 0 for j = 0).
inline int checkpoint_k_for(int j, int g) { return j <= 0 ? 0 : (j + (1 << g) - 1) >> g; }

// Largest power of 2 dividing j (wave key for intermediate levels).
int v2(int j);

struct ShiftVector {
    std::vector<double> a;  // one entry per dimension, each in [0, delta)
    uint64_t seed = 0;
};

ShiftVector make_shift(uint64_t seed, int d, double delta);

struct GridCellId {
    double level = 0.0;
    std::vector<long long> coords;

    bool operator==(const GridCellId& o) const { return level == o.level && coords == o.coords; }
};

GridCellId cell_of(const double* x, int d, double level, const ShiftVector& shift);
inline GridCellId cell_of(const PointSet& ps, int i, double level, const ShiftVector& shift) {
    return cell_of(ps.point(i), ps.d, level, shift);
}

struct NormalizeRecord {
    bool degenerate = false;          // all input points coincide
    std::vector<double> offset;       // per-dimension shift applied before scaling
    double scale = 1.0;               // normalized units = original units * scale
    double snap_level = kSnapLevel;
    double delta = 0.0;

    double to_original(double normalized_cost) const {
        return scale == 0.0 ? 0.0 : normalized_cost / scale;
    }
};

// Shift coordinates to start at 0, scale the largest coordinate to Delta, then snap each
// point to the nearest level-kSnapLevel cell center (ties toward negative infinity).
// Ids are preserved; snapped duplicates are possible and are collapsed by the run driver.
std::pair<PointSet, NormalizeRecord> normalize_aspect(const PointSet& points,
                                                      const AlgorithmConfig& config);

// Seeded Gaussian random projection to target_dim, scaled by 1/sqrt(target_dim).
PointSet jl_project(const PointSet& points, int target_dim, uint64_t seed);

}  // namespace mstsim
