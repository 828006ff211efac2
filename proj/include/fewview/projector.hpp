#pragma once

#include <span>
#include <vector>

#include "fewview/geometry.hpp"
#include "fewview/image.hpp"

namespace fewview {

/// Fan-beam forward projection K.
///
/// Each detector bin owns one ray from the source through the bin centre. The
/// line integral is approximated by bilinear samples of the image taken every
/// half pixel along the ray, so `backproject` reuses exactly the same weights
/// and the pair is an exact adjoint.
Sinogram project(const Image& x, const FanBeamGeometry& g);

/// Adjoint K^T of `project`.
Image backproject(const Sinogram& y, const FanBeamGeometry& g);

/// Span variants used inside iterative loops; `out` is overwritten.
void project_into(std::span<const double> x, const FanBeamGeometry& g, std::span<double> out);
void backproject_into(std::span<const double> y, const FanBeamGeometry& g, std::span<double> out);

/// Dense row-major m x n copy of K. Only for grids up to 32x32.
std::vector<double> materialize_dense(const FanBeamGeometry& g);

/// True iff K applied to the constant-one image is non-zero, which certifies
/// ker(K) and ker(D) = constants intersect only in 0.
bool kernel_assumption_check(const FanBeamGeometry& g, double tolerance = 1e-12);

/// Sampling step along each ray, in units of pixel_size.
inline constexpr double kRayStepFraction = 0.5;

} // namespace fewview
