#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mstsim/geometry.hpp"
#include "mstsim/points.hpp"
#include "mstsim/rng.hpp"

using namespace mstsim;

namespace {

ShiftVector zero_shift(int d) {
    ShiftVector s;
    s.a.assign(d, 0.0);
    return s;
}

PointSet make_points(int d, const std::vector<std::vector<double>>& rows) {
    PointSet ps;
    ps.d = d;
    ps.n = static_cast<int>(rows.size());
    for (const auto& r : rows) ps.coords.insert(ps.coords.end(), r.begin(), r.end());
    return ps;
}

}  // namespace

TEST_CASE("cell_of floors shifted coordinates") {
    double p[2] = {0.5, 0.5};
    GridCellId id = cell_of(p, 2, 1.0, zero_shift(2));
    CHECK(id.coords == std::vector<long long>{0, 0});

    double q[1] = {3.2};
    ShiftVector s;
    s.a = {0.5};
    GridCellId id2 = cell_of(q, 1, 2.0, s);
    CHECK(id2.coords == std::vector<long long>{1});

    CHECK_THROWS_AS(cell_of(p, 2, 0.0, zero_shift(2)), std::invalid_argument);
}

TEST_CASE("grid cells nest across level doublings") {
    const int d = 3;
    for (int trial = 0; trial < 1000; ++trial) {
        double x[3];
        for (int k = 0; k < d; ++k) x[k] = rng_unit(7, 100, trial, k) * 64.0;
        ShiftVector s;
        s.a.resize(d);
        for (int k = 0; k < d; ++k) s.a[k] = rng_unit(7, 101, trial, k) * 8.0;
        double level = std::ldexp(1.0, static_cast<int>(rng_word(7, 102, trial) % 5));
        GridCellId fine = cell_of(x, d, level, s);
        GridCellId coarse = cell_of(x, d, 2.0 * level, s);
        for (int k = 0; k < d; ++k) {
            long long expect = static_cast<long long>(
                std::floor(static_cast<double>(fine.coords[k]) / 2.0));
            CHECK(coarse.coords[k] == expect);
        }
    }
}

TEST_CASE("delta_for_n is the smallest adequate power of two") {
    CHECK(delta_for_n(2) == 16.0);
    CHECK(delta_for_n(256) == 32768.0);
    CHECK(delta_for_n(300) == 65536.0);
    for (int n : {2, 10, 50, 300, 1000, 4096}) {
        double delta = delta_for_n(n);
        double target = 4.0 * n * double(n) / std::log2(double(n));
        CHECK(delta >= target);
        CHECK(delta / 2.0 < target);
        CHECK(std::ldexp(1.0, static_cast<int>(std::lround(std::log2(delta)))) == delta);
    }
}

TEST_CASE("level schedule constants") {
    AlgorithmConfig config;
    CHECK(alpha_g(2) == 0);
    CHECK(alpha_g(4) == 1);
    CHECK(alpha_g(16) == 2);
    CHECK(alpha_g(256) == 3);
    CHECK_THROWS_AS(alpha_g(10), std::invalid_argument);

    CHECK(top_checkpoint_H(config, delta_for_n(256), 8) == 5);
    CHECK(top_checkpoint_H(config, delta_for_n(1024), 8) == 6);
    CHECK(top_checkpoint_H(config, delta_for_n(4096), 8) == 7);
    CHECK(top_exponent(5, 2) == 20);

    for (int d : {2, 8, 16}) {
        int H = top_checkpoint_H(config, delta_for_n(300), d);
        double need = 2.0 * std::sqrt(double(d)) * delta_for_n(300);
        CHECK(std::pow(16.0, H) >= need);
        CHECK((H == 1 || std::pow(16.0, H - 1) < need));
    }

    CHECK(checkpoint_k_for(0, 2) == 0);
    CHECK(checkpoint_k_for(1, 2) == 1);
    CHECK(checkpoint_k_for(4, 2) == 1);
    CHECK(checkpoint_k_for(5, 2) == 2);
    CHECK(checkpoint_k_for(8, 2) == 2);

    CHECK(v2(1) == 0);
    CHECK(v2(4) == 2);
    CHECK(v2(12) == 2);
    CHECK(v2(8) == 3);
    CHECK_THROWS_AS(v2(0), std::invalid_argument);
}

TEST_CASE("validate_config fills beta and rejects bad parameters") {
    AlgorithmConfig c;
    validate_config(c, 2);
    CHECK(c.beta == 8.0);

    AlgorithmConfig c32;
    validate_config(c32, 32);
    CHECK(c32.beta == doctest::Approx(2.0 * std::sqrt(32.0)));

    AlgorithmConfig bad;
    bad.alpha = 10;
    CHECK_THROWS_AS(validate_config(bad, 2), std::invalid_argument);

    AlgorithmConfig low_beta;
    low_beta.beta = 1.0;
    CHECK_THROWS_AS(validate_config(low_beta, 4), std::invalid_argument);

    AlgorithmConfig zero_h;
    zero_h.h = 0;
    CHECK_THROWS_AS(validate_config(zero_h, 2), std::invalid_argument);

    AlgorithmConfig bad_eps;
    bad_eps.epsilon = 1.5;
    CHECK_THROWS_AS(validate_config(bad_eps, 2), std::invalid_argument);

    AlgorithmConfig strict;
    strict.strict_memory = true;
    CHECK_THROWS_AS(validate_config(strict, 2), std::invalid_argument);
    strict.machine_memory_s = 64;
    CHECK_NOTHROW(validate_config(strict, 2));
}

TEST_CASE("theory_check reports each parameter relation") {
    AlgorithmConfig c;
    validate_config(c, 8);
    auto notes = theory_check(c, 300, 8);
    CHECK(notes.size() == 4);
    for (const auto& note : notes) {
        bool tagged = note.rfind("holds: ", 0) == 0 || note.rfind("fails: ", 0) == 0;
        CHECK(tagged);
    }
}

TEST_CASE("make_shift is deterministic with entries in range") {
    ShiftVector a = make_shift(42, 6, 1024.0);
    ShiftVector b = make_shift(42, 6, 1024.0);
    ShiftVector c = make_shift(43, 6, 1024.0);
    CHECK(a.a == b.a);
    CHECK(a.a != c.a);
    for (double x : a.a) {
        CHECK(x >= 0.0);
        CHECK(x < 1024.0);
    }
}

TEST_CASE("normalize_aspect canonical form") {
    AlgorithmConfig config;
    validate_config(config, 1);
    PointSet ps = make_points(1, {{3.0}, {12.5}});
    auto [out, rec] = normalize_aspect(ps, config);
    CHECK_FALSE(rec.degenerate);
    CHECK(rec.delta == delta_for_n(2));
    double max_coord = 0.0;
    for (double x : out.coords) {
        CHECK(x >= 2.0);
        CHECK(x <= rec.delta - 2.0);
        CHECK(std::fmod(x - 2.0, 4.0) == 0.0);
        max_coord = std::max(max_coord, x);
    }
    CHECK(max_coord == rec.delta - 2.0);

    // A canonical set maps to itself.
    auto [again, rec2] = normalize_aspect(out, config);
    CHECK(again.coords == out.coords);
    CHECK_FALSE(rec2.degenerate);

    // Round trip of a normalized length back to original units.
    double norm_dist = dist(out, 0, 1);
    double orig_dist = 12.5 - 3.0;
    CHECK(rec.to_original(norm_dist) ==
          doctest::Approx(orig_dist).epsilon(4.0 * 2.0 / norm_dist));
}

TEST_CASE("normalize_aspect degenerate inputs") {
    AlgorithmConfig config;
    validate_config(config, 2);
    PointSet same = make_points(2, {{1.5, 2.5}, {1.5, 2.5}, {1.5, 2.5}});
    auto [out, rec] = normalize_aspect(same, config);
    CHECK(rec.degenerate);
    CHECK(rec.to_original(123.0) == 0.0);

    PointSet single = make_points(2, {{4.0, 4.0}});
    CHECK(normalize_aspect(single, config).second.degenerate);
}

TEST_CASE("normalize_aspect snap displacement stays within half a cell") {
    AlgorithmConfig config;
    validate_config(config, 1);
    PointSet ps = make_points(1, {{0.0}, {1.0}, {10.0}});
    auto [out, rec] = normalize_aspect(ps, config);
    double bound = 2.0 * (rec.snap_level / 2.0) * std::sqrt(1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double scaled = (ps.point(j)[0] - ps.point(i)[0]) * rec.scale;
            double snapped = std::abs(out.point(j)[0] - out.point(i)[0]);
            CHECK(std::abs(snapped - std::abs(scaled)) <= bound + 1e-9);
        }

    // Distinct snapped locations sit on distinct cell centers, at least one cell apart.
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double d2 = dist2(out, i, j);
            CHECK((d2 == 0.0 || d2 >= rec.snap_level * rec.snap_level));
        }
}

TEST_CASE("jl_project basics") {
    CHECK_THROWS_AS(jl_project(make_points(2, {{1.0, 2.0}}), 0, 1), std::invalid_argument);

    PointSet two = make_points(3, {{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}});
    PointSet proj = jl_project(two, 2, 5);
    CHECK(proj.n == 2);
    CHECK(proj.d == 2);
    CHECK(dist(proj, 0, 1) == 0.0);

    PointSet again = jl_project(two, 2, 5);
    CHECK(proj.coords == again.coords);
}

TEST_CASE("jl_project keeps average pairwise distortion small") {
    const int n = 100, d = 64, target = 32;
    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.coords.resize(static_cast<size_t>(n) * d);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) ps.point(i)[k] = rng_normal(11, 200, i, k);
    PointSet proj = jl_project(ps, target, 77);

    double ratio_sum = 0.0;
    int pairs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double before = dist2(ps, i, j);
            double after = dist2(proj, i, j);
            double r = after / before;
            CHECK(r > 0.25);
            CHECK(r < 2.5);
            ratio_sum += r;
            ++pairs;
        }
    double mean = ratio_sum / pairs;
    CHECK(mean > 0.9);
    CHECK(mean < 1.1);
}
