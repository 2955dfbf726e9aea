#include "chs/rng.hpp"

#include <cmath>
#include <numbers>

namespace chs {

double standard_normal(const NoiseKey& key) {
    const double u1 = to_unit(key_hash(key, 0));
    const double u2 = to_unit(key_hash(key, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace chs
