#pragma once

#include <span>

#include "fewview/image.hpp"

namespace fewview {

/// Forward differences D = [D_h; D_v]. The difference across the last column
/// (horizontal) and the last row (vertical) is 0, so ker(D) is the constants.
GradientField grad(const Image& x);

/// D^T, the negative divergence matching `grad`'s boundary rule.
Image grad_adjoint(const GradientField& f, double pixel_size = 1.0);

/// Per-pixel isotropic magnitude sqrt(h_i^2 + v_i^2).
Image gradient_magnitude(const GradientField& f, double pixel_size = 1.0);

/// Isotropic total variation, the l1 norm of `gradient_magnitude(grad(x))`.
double total_variation(const Image& x);

/// Span kernels for the solver. `h` and `v` each have width*height entries.
void grad_into(std::span<const double> x, std::size_t width, std::size_t height,
               std::span<double> h, std::span<double> v);
void grad_adjoint_into(std::span<const double> h, std::span<const double> v, std::size_t width,
                       std::size_t height, std::span<double> out);

} // namespace fewview
