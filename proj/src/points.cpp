#include "mstsim/points.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mstsim/common.hpp"
#include "mstsim/rng.hpp"

namespace mstsim {

PointSet read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open point file: " + path);

    PointSet ps;
    int declared_dim = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            size_t pos = line.find("dim=");
            if (pos != std::string::npos) declared_dim = std::atoi(line.c_str() + pos + 4);
            continue;
        }
        std::istringstream row(line);
        std::vector<double> values;
        double v;
        while (row >> v) values.push_back(v);
        if (values.empty()) continue;
        if (ps.d == 0) {
            ps.d = static_cast<int>(values.size());
        } else if (static_cast<int>(values.size()) != ps.d) {
            throw io_error("inconsistent dimension at line with " +
                           std::to_string(values.size()) + " values in " + path);
        }
        ps.coords.insert(ps.coords.end(), values.begin(), values.end());
        ++ps.n;
    }
    if (declared_dim > 0 && ps.n > 0 && declared_dim != ps.d)
        throw io_error("header dim=" + std::to_string(declared_dim) + " but rows have " +
                       std::to_string(ps.d) + " coordinates in " + path);
    if (ps.n == 0) throw io_error("no points in " + path);
    return ps;
}

void write_points(const std::string& path, const PointSet& ps) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write point file: " + path);
    out << "# dim=" << ps.d << "\n";
    char buf[64];
    for (int i = 0; i < ps.n; ++i) {
        const double* p = ps.point(i);
        for (int k = 0; k < ps.d; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[k]);
            out << (k ? " " : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw io_error("write failed: " + path);
}

PointSet gen_uniform(int n, int d, uint64_t seed) {
    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.coords.resize(static_cast<size_t>(n) * d);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k)
            ps.point(i)[k] = rng_unit(seed, rng_tag::generate, 1, i, k);
    return ps;
}

PointSet gen_gaussian_clusters(int n, int d, uint64_t seed) {
    int clusters = std::max(2, n / 50);
    std::vector<double> centers(static_cast<size_t>(clusters) * d);
    for (int c = 0; c < clusters; ++c)
        for (int k = 0; k < d; ++k)
            centers[static_cast<size_t>(c) * d + k] = rng_unit(seed, rng_tag::generate, 2, c, k);

    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.coords.resize(static_cast<size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        int c = static_cast<int>(rng_word(seed, rng_tag::generate, 3, i) % clusters);
        for (int k = 0; k < d; ++k)
            ps.point(i)[k] = centers[static_cast<size_t>(c) * d + k] +
                             0.05 * rng_normal(seed, rng_tag::generate, 4 + i, k);
    }
    return ps;
}

PointSet gen_parallel_paths(int k, int len, int d) {
    if (k < 1 || len < 1) throw std::invalid_argument("parallel-paths needs k >= 1, len >= 1");
    if (k > d - 1)
        throw std::invalid_argument("parallel-paths needs k <= d-1 (path runs along the last axis)");

    // One unit-spaced path along the last axis plus k copies, copy j offset along axis j.
    const double offset = 16.0 / std::sqrt(2.0);
    PointSet ps;
    ps.n = (k + 1) * len;
    ps.d = d;
    ps.coords.assign(static_cast<size_t>(ps.n) * d, 0.0);
    int idx = 0;
    for (int j = 0; j <= k; ++j) {
        for (int i = 0; i < len; ++i, ++idx) {
            double* p = ps.point(idx);
            p[d - 1] = static_cast<double>(i);
            if (j > 0) p[j - 1] = offset;
        }
    }
    return ps;
}

}  // namespace mstsim
