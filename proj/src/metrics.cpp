#include "fewview/metrics.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "fewview/errors.hpp"

namespace fewview {
namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;

void check_pair(const Image& x, const Image& ref) {
    if (!x.same_shape(ref) || x.data.size() != ref.data.size())
        throw ConfigError("metric: image dimensions differ");
    if (ref.data.empty()) throw ConfigError("metric: empty image");
}

std::array<double, kWindow> gaussian_window() {
    std::array<double, kWindow> w{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kWindow / 2;
        w[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

/// Separable 'valid' filtering; output is (h - 10) x (w - 10).
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t width,
                                 std::size_t height) {
    static const auto w = gaussian_window();
    const std::size_t ow = width - kWindow + 1;
    const std::size_t oh = height - kWindow + 1;
    std::vector<double> rows(height * ow);
    for (std::size_t r = 0; r < height; ++r)
        for (std::size_t c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += w[k] * in[r * width + c + k];
            rows[r * ow + c] = acc;
        }
    std::vector<double> out(oh * ow);
    for (std::size_t r = 0; r < oh; ++r)
        for (std::size_t c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += w[k] * rows[(r + k) * ow + c];
            out[r * ow + c] = acc;
        }
    return out;
}

} // namespace

double relative_error(const Image& x, const Image& ref) {
    check_pair(x, ref);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        const double d = x.data[i] - ref.data[i];
        num += d * d;
        den += ref.data[i] * ref.data[i];
    }
    if (den == 0.0) throw DegenerateInputError("relative error against a zero reference");
    return std::sqrt(num / den);
}

double psnr(const Image& x, const Image& ref, double peak) {
    check_pair(x, ref);
    double sse = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        const double d = x.data[i] - ref.data[i];
        sse += d * d;
    }
    if (sse == 0.0) return kPsnrCap;
    const double mse = sse / static_cast<double>(ref.data.size());
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& x, const Image& ref) {
    check_pair(x, ref);
    if (x.width < kWindow || x.height < kWindow)
        throw ConfigError("ssim needs images of at least 11x11 pixels");
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;

    const std::size_t n = x.data.size();
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x.data[i] * x.data[i];
        yy[i] = ref.data[i] * ref.data[i];
        xy[i] = x.data[i] * ref.data[i];
    }
    const auto mu_x = filter_valid(x.data, x.width, x.height);
    const auto mu_y = filter_valid(ref.data, x.width, x.height);
    const auto e_xx = filter_valid(xx, x.width, x.height);
    const auto e_yy = filter_valid(yy, x.width, x.height);
    const auto e_xy = filter_valid(xy, x.width, x.height);

    double total = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mxy = mu_x[i] * mu_y[i];
        const double mxx = mu_x[i] * mu_x[i];
        const double myy = mu_y[i] * mu_y[i];
        const double sxy = e_xy[i] - mxy;
        const double sxx = e_xx[i] - mxx;
        const double syy = e_yy[i] - myy;
        total += ((2.0 * mxy + c1) * (2.0 * sxy + c2)) / ((mxx + myy + c1) * (sxx + syy + c2));
    }
    return total / static_cast<double>(mu_x.size());
}

MetricsRecord evaluate(const Image& x, const Image& ref) {
    return {relative_error(x, ref), psnr(x, ref), ssim(x, ref)};
}

} // namespace fewview
