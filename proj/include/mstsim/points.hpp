#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace mstsim {

// Flat row-major storage; point i occupies coords[i*d .. i*d+d-1]. Ids are implicit
// 0..n-1. delta is the coordinate upper bound established by normalization (0 until
// normalize_aspect has run).
struct PointSet {
    int n = 0;
    int d = 0;
    double delta = 0.0;
    std::vector<double> coords;

    const double* point(int i) const { return coords.data() + static_cast<size_t>(i) * d; }
    double* point(int i) { return coords.data() + static_cast<size_t>(i) * d; }
};

inline double dist2(const PointSet& ps, int i, int j) {
    const double* a = ps.point(i);
    const double* b = ps.point(j);
    double s = 0.0;
    for (int k = 0; k < ps.d; ++k) {
        double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

inline double dist(const PointSet& ps, int i, int j) { return std::sqrt(dist2(ps, i, j)); }

// Point file format: one point per line, whitespace-separated coordinates, optional
// leading "# dim=<d>" header. Blank lines and other "#" lines are ignored.
PointSet read_points(const std::string& path);
void write_points(const std::string& path, const PointSet& ps);

// Generators used by the CLI and the test suites.
PointSet gen_uniform(int n, int d, uint64_t seed);
PointSet gen_gaussian_clusters(int n, int d, uint64_t seed);
PointSet gen_parallel_paths(int k, int len, int d);

}  // namespace mstsim
