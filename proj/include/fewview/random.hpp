#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fewview {

/// Engine used for every seeded draw in the library.
using Engine = std::mt19937_64;

/// Uniform in [0, 1) from the top 53 bits of one engine output. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform in [-1, 1).
inline double uniform_symmetric(Engine& engine) { return 2.0 * uniform01(engine) - 1.0; }

/// `count` standard normal samples by the Box-Muller transform over Engine(seed).
std::vector<double> standard_normal(std::size_t count, std::uint64_t seed);

} // namespace fewview
