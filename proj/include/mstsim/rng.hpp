#pragma once

#include <cmath>
#include <cstdint>

namespace mstsim {

// Counter-based RNG: every random value is a pure function of (seed, stream tag,
// counters). Parallel loops can draw coins keyed by logical ids, so results do not
// depend on thread count or iteration order.

inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t rng_word(uint64_t seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0,
                         uint64_t c = 0) {
    uint64_t x = mix64(seed ^ mix64(tag));
    x = mix64(x ^ a);
    x = mix64(x ^ mix64(b));
    return mix64(x ^ c);
}

// Uniform in [0,1).
inline double rng_unit(uint64_t seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0,
                       uint64_t c = 0) {
    return static_cast<double>(rng_word(seed, tag, a, b, c) >> 11) * 0x1.0p-53;
}

inline bool rng_coin(uint64_t seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0,
                     uint64_t c = 0) {
    return (rng_word(seed, tag, a, b, c) & 1ull) != 0;
}

// Standard normal via Box-Muller on two counter draws.
inline double rng_normal(uint64_t seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0) {
    double u1 = rng_unit(seed, tag, a, b, 1);
    double u2 = rng_unit(seed, tag, a, b, 2);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Stream tags keep independent uses of the same seed from colliding.
namespace rng_tag {
constexpr uint64_t shift = 0x5348u;        // quadtree shift vector
constexpr uint64_t compress = 0x434fu;     // leader-compression coin bits
constexpr uint64_t sample = 0x53414du;     // sampled-leader edge selection
constexpr uint64_t project = 0x4a4cu;      // random projection matrix
constexpr uint64_t generate = 0x47454eu;   // point generators
}  // namespace rng_tag

}  // namespace mstsim
