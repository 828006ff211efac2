#pragma once

#include "fewview/image.hpp"

namespace fewview {

/// PSNR reported for identical images.
inline constexpr double kPsnrCap = 100.0;

struct MetricsRecord {
    double re = 0.0;
    double psnr = kPsnrCap;
    double ssim = 1.0;
};

/// ||x - ref||_2 / ||ref||_2.
double relative_error(const Image& x, const Image& ref);

/// 10 log10(peak^2 / MSE); kPsnrCap when MSE is 0.
double psnr(const Image& x, const Image& ref, double peak = 1.0);

/// Mean SSIM over all fully-contained 11x11 Gaussian windows (sigma 1.5,
/// K1 = 0.01, K2 = 0.03, dynamic range 1).
double ssim(const Image& x, const Image& ref);

MetricsRecord evaluate(const Image& x, const Image& ref);

} // namespace fewview
