#pragma once
#include <cmath>
#include <cstdint>

namespace metascope {

// splitmix64: tiny, bit-stable across platforms. Sequences and sub-seed
// derivation must not depend on the standard library's distributions.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in (0, 1]: never 0, so log() below is safe
    double uniform() { return (next() >> 11) * 0x1.0p-53 + 0x1.0p-53; }
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    SplitMix64 s(master ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL) ^
                 (c * 0x165667b19e3779f9ULL));
    s.next();
    return s.next();
}

// Box-Muller pair; deterministic given the generator state.
struct GaussPair {
    double a, b;
};
inline GaussPair gauss(SplitMix64& g) {
    double u1 = g.uniform();
    double u2 = g.uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

}  // namespace metascope
