#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fewview/geometry.hpp"

namespace fewview {

/// Relative Gaussian noise level nu and the seed of the draw.
struct NoiseSpec {
    double nu = 0.0;
    std::uint64_t seed = 0;
};

/// y + nu * (||y|| / ||z||) z with z ~ N(0, I) drawn from `spec.seed`, so the
/// perturbation has norm exactly nu * ||y||. nu = 0 returns y unchanged.
Sinogram add_noise(const Sinogram& y, const NoiseSpec& spec);

/// Same rule with a caller-supplied direction z, so a sweep over nu can reuse
/// one draw.
Sinogram add_scaled_noise(const Sinogram& y, double nu, std::span<const double> z);

} // namespace fewview
