#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mstsim/common.hpp"
#include "mstsim/points.hpp"

using namespace mstsim;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("point files round-trip exactly") {
    PointSet ps;
    ps.n = 3;
    ps.d = 2;
    ps.coords = {0.1, 0.2, 1.0 / 3.0, 1e-17, 123456.789, -2.5};
    std::string path = temp_path("points_roundtrip.txt");
    write_points(path, ps);
    PointSet back = read_points(path);
    CHECK(back.n == 3);
    CHECK(back.d == 2);
    CHECK(back.coords == ps.coords);
    std::remove(path.c_str());
}

TEST_CASE("read_points accepts headers, comments, and blank lines") {
    std::string path = temp_path("points_header.txt");
    write_text(path, "# dim=2\n# a comment\n\n1 2\n3 4\n\n");
    PointSet ps = read_points(path);
    CHECK(ps.n == 2);
    CHECK(ps.d == 2);
    CHECK(ps.point(1)[0] == 3.0);
    std::remove(path.c_str());
}

TEST_CASE("read_points failure modes") {
    CHECK_THROWS_AS(read_points(temp_path("definitely_missing_file.txt")), io_error);

    std::string empty = temp_path("points_empty.txt");
    write_text(empty, "# dim=3\n\n");
    CHECK_THROWS_AS(read_points(empty), io_error);
    std::remove(empty.c_str());

    std::string ragged = temp_path("points_ragged.txt");
    write_text(ragged, "1 2\n3 4 5\n");
    CHECK_THROWS_AS(read_points(ragged), io_error);
    std::remove(ragged.c_str());

    std::string mismatch = temp_path("points_mismatch.txt");
    write_text(mismatch, "# dim=3\n1 2\n");
    CHECK_THROWS_AS(read_points(mismatch), io_error);
    std::remove(mismatch.c_str());
}

TEST_CASE("gen_uniform is deterministic in the unit cube") {
    PointSet a = gen_uniform(50, 4, 9);
    PointSet b = gen_uniform(50, 4, 9);
    PointSet c = gen_uniform(50, 4, 10);
    CHECK(a.coords == b.coords);
    CHECK(a.coords != c.coords);
    CHECK(a.n == 50);
    CHECK(a.d == 4);
    for (double x : a.coords) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("gen_gaussian_clusters has the requested shape") {
    PointSet ps = gen_gaussian_clusters(120, 3, 4);
    CHECK(ps.n == 120);
    CHECK(ps.d == 3);
    CHECK(ps.coords == gen_gaussian_clusters(120, 3, 4).coords);
}

TEST_CASE("gen_parallel_paths lays out unit-spaced copies") {
    PointSet ps = gen_parallel_paths(3, 5, 4);
    CHECK(ps.n == 20);
    CHECK(ps.d == 4);
    // First path runs along the last axis from 0.
    CHECK(ps.point(0)[3] == 0.0);
    CHECK(ps.point(4)[3] == 4.0);
    CHECK(dist(ps, 0, 1) == 1.0);
    // Copies are offset along their own axis.
    CHECK(ps.point(5)[0] != 0.0);

    CHECK_THROWS_AS(gen_parallel_paths(0, 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(gen_parallel_paths(4, 5, 4), std::invalid_argument);
}
