#include "mstsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mstsim/common.hpp"
#include "mstsim/rng.hpp"

namespace mstsim {

SpannerStrategy strategy_from_name(const std::string& name) {
    if (name == "exact-threshold") return SpannerStrategy::exact_threshold;
    if (name == "cell-leader") return SpannerStrategy::cell_leader;
    if (name == "sampled-leader") return SpannerStrategy::sampled_leader;
    throw std::invalid_argument("unknown spanner strategy: " + name);
}

std::string strategy_name(SpannerStrategy s) {
    switch (s) {
        case SpannerStrategy::exact_threshold: return "exact-threshold";
        case SpannerStrategy::cell_leader: return "cell-leader";
        case SpannerStrategy::sampled_leader: return "sampled-leader";
    }
    return "?";
}

int alpha_g(int alpha) {
    for (int g = 0; g <= 4; ++g)
        if (alpha == (1 << (1 << g))) return g;
    throw std::invalid_argument("alpha must be 2^(2^g), got " + std::to_string(alpha));
}

void validate_config(AlgorithmConfig& config, int d) {
    alpha_g(config.alpha);
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    if (config.beta == 0.0) config.beta = std::max(2.0 * std::sqrt(double(d)), 8.0);
    if (!(config.beta > std::sqrt(double(d))))
        throw std::invalid_argument("beta must exceed sqrt(d)");
    if (config.alpha * std::sqrt(double(d)) < config.beta)
        throw std::invalid_argument("alpha*sqrt(d) must be >= beta (top cell containment)");
    if (config.h < 1) throw std::invalid_argument("h must be >= 1");
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in (0,1)");
    if (config.strict_memory && config.machine_memory_s <= 0)
        throw std::invalid_argument("strict memory mode needs machine_memory_s > 0");
}

std::vector<std::string> theory_check(const AlgorithmConfig& config, int n, int d) {
    std::vector<std::string> notes;
    double logn = std::log2(std::max(2, n));
    double sd = std::sqrt(double(d));
    auto report = [&](const std::string& rel, bool holds) {
        notes.push_back(std::string(holds ? "holds: " : "fails: ") + rel);
    };
    report("beta > sqrt(d)", config.beta > sd);
    report("beta >= log2(n)", config.beta >= logn);
    report("alpha/beta >= log2(n)", config.alpha / config.beta >= logn);
    report("alpha >= sqrt(d)*beta*log2(n)", config.alpha >= sd * config.beta * logn);
    return notes;
}

double delta_for_n(int n) {
    if (n < 2) return 16.0;
    double target = 4.0 * double(n) * double(n) / std::log2(double(n));
    double delta = 1.0;
    while (delta < target) delta *= 2.0;
    return delta;
}

int top_checkpoint_H(const AlgorithmConfig& config, double delta, int d) {
    double need = 2.0 * std::sqrt(double(d)) * delta;
    double t = 1.0;
    int H = 0;
    while (t < need || H < 1) {
        t *= config.alpha;
        ++H;
    }
    return H;
}

int v2(int j) {
    if (j <= 0) throw std::invalid_argument("v2 needs a positive integer");
    int v = 0;
    while ((j & 1) == 0) {
        j >>= 1;
        ++v;
    }
    return v;
}

ShiftVector make_shift(uint64_t seed, int d, double delta) {
    ShiftVector s;
    s.seed = seed;
    s.a.resize(d);
    for (int k = 0; k < d; ++k) s.a[k] = rng_unit(seed, rng_tag::shift, k) * delta;
    return s;
}

GridCellId cell_of(const double* x, int d, double level, const ShiftVector& shift) {
    if (!(level > 0.0)) throw std::invalid_argument("grid level must be positive");
    GridCellId id;
    id.level = level;
    id.coords.resize(d);
    for (int k = 0; k < d; ++k)
        id.coords[k] = static_cast<long long>(std::floor((x[k] + shift.a[k]) / level));
    return id;
}

namespace {

// Nearest center 4c+2 of the snap grid, ties toward -inf, clamped to the cell row >= 0.
double snap_coord(double x) {
    double idx = std::ceil((x - 2.0) / kSnapLevel - 0.5);
    if (idx < 0.0) idx = 0.0;
    return idx * kSnapLevel + kSnapLevel / 2.0;
}

bool already_normalized(const PointSet& ps, double delta) {
    double max_coord = 0.0;
    for (double x : ps.coords) {
        if (x < 0.0 || x > delta) return false;
        if (std::fmod(x - kSnapLevel / 2.0, kSnapLevel) != 0.0) return false;
        max_coord = std::max(max_coord, x);
    }
    return max_coord == delta - kSnapLevel / 2.0;
}

}  // namespace

std::pair<PointSet, NormalizeRecord> normalize_aspect(const PointSet& points,
                                                      const AlgorithmConfig& config) {
    (void)config;
    NormalizeRecord rec;
    rec.offset.assign(points.d, 0.0);
    rec.delta = delta_for_n(points.n);

    bool all_equal = true;
    for (int i = 1; i < points.n && all_equal; ++i)
        for (int k = 0; k < points.d; ++k)
            if (points.point(i)[k] != points.point(0)[k]) {
                all_equal = false;
                break;
            }
    if (points.n < 2 || all_equal) {
        rec.degenerate = true;
        rec.scale = 0.0;
        PointSet out = points;
        out.delta = rec.delta;
        return {out, rec};
    }

    // A set already in canonical form maps to itself; this makes normalization idempotent.
    if (already_normalized(points, rec.delta)) {
        PointSet out = points;
        out.delta = rec.delta;
        return {out, rec};
    }

    for (int k = 0; k < points.d; ++k) {
        double lo = points.point(0)[k];
        for (int i = 1; i < points.n; ++i) lo = std::min(lo, points.point(i)[k]);
        rec.offset[k] = lo;
    }
    double span = 0.0;
    for (int i = 0; i < points.n; ++i)
        for (int k = 0; k < points.d; ++k)
            span = std::max(span, points.point(i)[k] - rec.offset[k]);
    rec.scale = rec.delta / span;

    PointSet out;
    out.n = points.n;
    out.d = points.d;
    out.delta = rec.delta;
    out.coords.resize(points.coords.size());
    for (int i = 0; i < points.n; ++i)
        for (int k = 0; k < points.d; ++k)
            out.point(i)[k] = snap_coord((points.point(i)[k] - rec.offset[k]) * rec.scale);
    return {out, rec};
}

PointSet jl_project(const PointSet& points, int target_dim, uint64_t seed) {
    if (target_dim <= 0) throw std::invalid_argument("target_dim must be positive");
    if (points.n == 0) throw std::invalid_argument("jl_project needs a nonempty point set");

    PointSet out;
    out.n = points.n;
    out.d = target_dim;
    out.coords.resize(static_cast<size_t>(points.n) * target_dim);

    std::vector<double> mat(static_cast<size_t>(target_dim) * points.d);
    double inv = 1.0 / std::sqrt(double(target_dim));
    for (int r = 0; r < target_dim; ++r)
        for (int c = 0; c < points.d; ++c)
            mat[static_cast<size_t>(r) * points.d + c] =
                inv * rng_normal(seed, rng_tag::project, r, c);

#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (int i = 0; i < points.n; ++i) {
        const double* p = points.point(i);
        double* q = out.point(i);
        for (int r = 0; r < target_dim; ++r) {
            const double* row = mat.data() + static_cast<size_t>(r) * points.d;
            double s = 0.0;
            for (int c = 0; c < points.d; ++c) s += row[c] * p[c];
            q[r] = s;
        }
    }
    return out;
}

}  // namespace mstsim
