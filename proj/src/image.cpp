#include "fewview/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fewview/errors.hpp"

namespace fewview {

Image::Image(std::size_t width, std::size_t height, double pixel_size, double fill)
    : width(width), height(height), pixel_size(pixel_size), data(width * height, fill) {}

bool Image::all_finite() const noexcept {
    return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

double Image::min() const {
    if (data.empty()) throw ConfigError("min of empty image");
    return *std::min_element(data.begin(), data.end());
}

double Image::max() const {
    if (data.empty()) throw ConfigError("max of empty image");
    return *std::max_element(data.begin(), data.end());
}

namespace linalg {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ConfigError("dot: size mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void clamp_nonnegative(std::span<double> a) {
    for (double& v : a) v = std::max(v, 0.0);
}

} // namespace linalg

} // namespace fewview
