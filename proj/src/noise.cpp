#include "fewview/noise.hpp"

#include <cmath>
#include <numbers>

#include "fewview/errors.hpp"
#include "fewview/random.hpp"

namespace fewview {

std::vector<double> standard_normal(std::size_t count, std::uint64_t seed) {
    Engine engine(seed);
    std::vector<double> z(count);
    for (std::size_t i = 0; i < count; i += 2) {
        const double u1 = 1.0 - uniform01(engine); // (0, 1]
        const double u2 = uniform01(engine);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        z[i] = radius * std::cos(angle);
        if (i + 1 < count) z[i + 1] = radius * std::sin(angle);
    }
    return z;
}

Sinogram add_scaled_noise(const Sinogram& y, double nu, std::span<const double> z) {
    if (!(nu >= 0.0)) throw ParameterError("noise level must be non-negative");
    y.check();
    if (z.size() != y.size()) throw ConfigError("noise direction length does not match sinogram");
    if (nu == 0.0) return y;

    const double ny = linalg::norm2(y.data);
    if (ny == 0.0) throw DegenerateInputError("cannot scale relative noise to a zero sinogram");
    const double nz = linalg::norm2(z);
    if (nz == 0.0) throw DegenerateInputError("noise direction is zero");

    Sinogram out = y;
    const double scale = nu * ny / nz;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += scale * z[i];
    return out;
}

Sinogram add_noise(const Sinogram& y, const NoiseSpec& spec) {
    if (!(spec.nu >= 0.0)) throw ParameterError("noise level must be non-negative");
    if (spec.nu == 0.0) return y;
    const std::vector<double> z = standard_normal(y.size(), spec.seed);
    return add_scaled_noise(y, spec.nu, z);
}

} // namespace fewview
