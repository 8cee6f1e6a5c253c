#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mstsim/driver.hpp"
#include "mstsim/points.hpp"

namespace mstsim {

struct InstanceCase {
    std::string generator;  // uniform | gaussian-clusters | parallel-paths
    int n = 0;
    int d = 0;
    uint64_t seed = 1;
    SpannerStrategy strategy = SpannerStrategy::cell_leader;
};

PointSet make_instance(const std::string& generator, int n, int d, uint64_t seed);

struct InstanceReport {
    InstanceCase instance;
    bool tree_ok = false;
    bool tour_ok = false;
    bool tsp_ok = false;       // exact MST <= cycle cost <= 2 * tree cost
    bool sum_ok = false;       // exact MST <= doubling component sum <= 2 * exact MST
    bool hierarchy_ok = false;
    std::vector<std::string> problems;
    double tree_cost = 0.0;
    double cycle_cost = 0.0;
    double exact_cost = 0.0;   // oracle MST on the original coordinates
    double ratio = 1.0;        // tree_cost / exact_cost (1.0 when exact is 0)
    int rounds = 0;

    bool all_ok() const { return tree_ok && tour_ok && tsp_ok && sum_ok && hierarchy_ok; }
};

// Runs the full pipeline on one instance and evaluates every per-run invariant.
InstanceReport check_instance(const InstanceCase& c);

// The standard validity matrix: n in {50,100,300,500} x d in {2,8,16} x three
// generators x five seeds, plus 20 extra cases cycling the spanner strategies.
std::vector<InstanceCase> standard_matrix();

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::vector<std::string> messages;
    bool ok() const { return failures == 0; }

    void note(bool passed, const std::string& detail);
};

// Random euler_tour_join instances checked with validate_tour.
SuiteResult suite_joins(int count, uint64_t seed);

// Monte-Carlo check of the geometric decay of unfinished components under repeated
// compression rounds, on path/star/random graphs of 10..50 nodes.
SuiteResult suite_decay(int trials, uint64_t seed);

// Monte-Carlo check of the grid cut-probability bound w*sqrt(d)/L over random shifts.
SuiteResult suite_cuts(int trials, uint64_t seed);

// Pipeline-instance suites over a case list (tree, tour, sandwiches, hierarchy).
SuiteResult suite_instances(const std::vector<InstanceCase>& cases);

}  // namespace mstsim
