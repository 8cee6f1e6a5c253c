#include "mstsim/tsp.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

#include "mstsim/common.hpp"

namespace mstsim {

double cycle_cost(const std::vector<int>& order, const PointSet& points) {
    if (order.size() < 2) return 0.0;
    double total = 0.0;
    for (size_t i = 0; i < order.size(); ++i)
        total += dist(points, order[i], order[(i + 1) % order.size()]);
    return total;
}

HamiltonianCycle shortcut(const EulerTour& tour, const PointSet& points) {
    HamiltonianCycle cycle;
    if (points.n == 1 && tour.empty()) {
        cycle.order = {0};
        return cycle;
    }
    std::vector<char> seen(points.n, 0);
    auto visit = [&](int v) {
        if (v < 0 || v >= points.n) throw std::invalid_argument("tour mentions unknown id");
        if (!seen[v]) {
            seen[v] = 1;
            cycle.order.push_back(v);
        }
    };
    if (!tour.empty()) visit(tour.seq.front().first);
    for (const auto& e : tour.seq) visit(e.second);
    if (static_cast<int>(cycle.order.size()) != points.n)
        throw std::invalid_argument("tour covers " + std::to_string(cycle.order.size()) +
                                    " of " + std::to_string(points.n) + " points");
    cycle.cost = cycle_cost(cycle.order, points);
    return cycle;
}

void write_cycle(const std::string& path, const HamiltonianCycle& cycle) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw io_error("cannot write " + path);
    for (int v : cycle.order) std::fprintf(f, "%d\n", v);
    std::fclose(f);
}

}  // namespace mstsim
