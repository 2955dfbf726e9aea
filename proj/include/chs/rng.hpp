// Counter-based random number stream.
//
// Every normal variate is a pure function of (seed, path, step, mode), so
// coupled experiments can replay exactly the same noise while changing any
// other parameter, and distinct paths/steps can be generated concurrently.

#ifndef CHS_RNG_HPP
#define CHS_RNG_HPP

#include <cstdint>

namespace chs {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct NoiseKey {
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    std::uint64_t step = 0;
    std::uint64_t mode = 0;
};

inline std::uint64_t key_hash(const NoiseKey& k, std::uint64_t lane) {
    std::uint64_t h = mix64(k.seed ^ 0x243f6a8885a308d3ULL);
    h = mix64(h ^ k.path);
    h = mix64(h ^ k.step);
    h = mix64(h ^ k.mode);
    return mix64(h ^ lane);
}

// uniform in (0,1), never exactly 0 or 1
inline double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
}

// One standard normal variate per key (Box-Muller, cosine branch).
double standard_normal(const NoiseKey& key);

}  // namespace chs

#endif
