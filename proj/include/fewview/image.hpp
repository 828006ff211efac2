#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fewview {

/// Row-major grid of real intensities. Row 0 is the top of the image.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    double pixel_size = 1.0;
    std::vector<double> data;

    Image() = default;
    Image(std::size_t width, std::size_t height, double pixel_size = 1.0, double fill = 0.0);

    std::size_t size() const noexcept { return data.size(); }

    double& operator()(std::size_t row, std::size_t col) { return data[row * width + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data[row * width + col]; }

    bool same_shape(const Image& other) const noexcept {
        return width == other.width && height == other.height;
    }

    bool all_finite() const noexcept;
    double min() const;
    double max() const;
};

/// Stacked forward differences Dx = (D_h x, D_v x), each of length n.
struct GradientField {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> horizontal;
    std::vector<double> vertical;

    GradientField() = default;
    GradientField(std::size_t width, std::size_t height)
        : width(width), height(height), horizontal(width * height, 0.0),
          vertical(width * height, 0.0) {}

    std::size_t pixels() const noexcept { return horizontal.size(); }
};

namespace linalg {

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// Clamp every entry to be >= 0.
void clamp_nonnegative(std::span<double> a);

} // namespace linalg

} // namespace fewview
