#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mstsim/tsp.hpp"

using namespace mstsim;

namespace {

PointSet line_points(std::initializer_list<double> xs) {
    PointSet ps;
    ps.n = static_cast<int>(xs.size());
    ps.d = 1;
    ps.coords.assign(xs.begin(), xs.end());
    return ps;
}

}  // namespace

TEST_CASE("shortcutting a two-point tour walks there and back") {
    PointSet ps = line_points({0.0, 3.0});
    EulerTour tour;
    tour.seq = {{0, 1}, {1, 0}};
    HamiltonianCycle c = shortcut(tour, ps);
    CHECK(c.order == std::vector<int>{0, 1});
    CHECK(c.cost == doctest::Approx(6.0));
}

TEST_CASE("shortcutting keeps first appearances in tour order") {
    PointSet ps;
    ps.n = 3;
    ps.d = 2;
    ps.coords = {0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
    EulerTour tour;
    tour.seq = {{0, 1}, {1, 0}, {0, 2}, {2, 0}};
    HamiltonianCycle c = shortcut(tour, ps);
    CHECK(c.order == std::vector<int>{0, 1, 2});
    // 0->1 is 1, 1->2 is sqrt(2), 2->0 closes with 1.
    CHECK(c.cost == doctest::Approx(2.0 + std::sqrt(2.0)));
}

TEST_CASE("a single point yields the trivial cycle") {
    PointSet ps = line_points({5.0});
    HamiltonianCycle c = shortcut(EulerTour{}, ps);
    CHECK(c.order == std::vector<int>{0});
    CHECK(c.cost == 0.0);
}

TEST_CASE("tours that miss points are rejected with both counts") {
    PointSet ps = line_points({0.0, 1.0, 2.0});
    EulerTour tour;
    tour.seq = {{0, 1}, {1, 0}};
    CHECK_THROWS_WITH_AS(shortcut(tour, ps), doctest::Contains("2"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(shortcut(tour, ps), doctest::Contains("3"),
                         std::invalid_argument);

    EulerTour stray;
    stray.seq = {{0, 7}, {7, 0}};
    CHECK_THROWS_AS(shortcut(stray, ps), std::invalid_argument);
}

TEST_CASE("cycle_cost includes the closing edge and ignores degenerate orders") {
    PointSet ps = line_points({0.0, 1.0, 4.0});
    CHECK(cycle_cost({0, 1, 2}, ps) == doctest::Approx(1.0 + 3.0 + 4.0));
    CHECK(cycle_cost({2, 0, 1}, ps) == doctest::Approx(4.0 + 1.0 + 3.0));
    CHECK(cycle_cost({0}, ps) == 0.0);
    CHECK(cycle_cost({}, ps) == 0.0);
}

TEST_CASE("cycle files list one id per line") {
    HamiltonianCycle c;
    c.order = {2, 0, 1};
    std::string path = (std::filesystem::temp_directory_path() / "cycle_test.txt").string();
    write_cycle(path, c);
    std::ifstream in(path);
    int a, b, d;
    in >> a >> b >> d;
    CHECK(a == 2);
    CHECK(b == 0);
    CHECK(d == 1);
    in.close();
    std::remove(path.c_str());
}
