#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "zorich/core.hpp"

namespace zorich::detail {

// Per-index engine: sample i is reproducible regardless of how many samples
// are drawn, so sample streams are nested across sample counts.
inline std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t i) {
    return std::mt19937_64(seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
}

// Low-discrepancy lattice over [-1,1]^2 with an n-independent prefix.
inline Vec2 lattice_point(std::size_t i) {
    const double a1 = 0.75487766624669276005;
    const double a2 = 0.56984029099805326591;
    const double f1 = std::fmod(0.5 + static_cast<double>(i) * a1, 1.0);
    const double f2 = std::fmod(0.5 + static_cast<double>(i) * a2, 1.0);
    return {2.0 * f1 - 1.0, 2.0 * f2 - 1.0};
}

}  // namespace zorich::detail
