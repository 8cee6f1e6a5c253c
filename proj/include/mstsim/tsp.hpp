#pragma once

#include <string>
#include <vector>

#include "mstsim/euler.hpp"
#include "mstsim/points.hpp"

namespace mstsim {

struct HamiltonianCycle {
    std::vector<int> order;  // each point id exactly once, tour root first
    double cost = 0.0;       // consecutive distances plus the closing edge
};

// Keeps the first appearance of every point along the tour. Throws
// std::invalid_argument when the tour misses some of the points.
HamiltonianCycle shortcut(const EulerTour& tour, const PointSet& points);

double cycle_cost(const std::vector<int>& order, const PointSet& points);

void write_cycle(const std::string& path, const HamiltonianCycle& cycle);

}  // namespace mstsim
