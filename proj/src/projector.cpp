#include "fewview/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fewview/errors.hpp"

namespace fewview {
namespace {

/// Start point (in fractional pixel-index coordinates), per-sample increment
/// and sample count for one ray.
struct RaySamples {
    double col0 = 0.0;
    double row0 = 0.0;
    double dcol = 0.0;
    double drow = 0.0;
    long count = 0;
    double weight = 0.0;
};

class RayTable {
public:
    explicit RayTable(const FanBeamGeometry& g) : g_(g) {
        const std::size_t nv = g.num_views();
        cos_.resize(nv);
        sin_.resize(nv);
        for (std::size_t v = 0; v < nv; ++v) {
            const double beta = g.angles_deg[v] * std::numbers::pi / 180.0;
            cos_[v] = std::cos(beta);
            sin_[v] = std::sin(beta);
        }
        step_ = kRayStepFraction * g.pixel_size;
        // Bilinear support reaches half a pixel beyond the outermost centres.
        half_w_ = 0.5 * static_cast<double>(g.image_width + 1) * g.pixel_size;
        half_h_ = 0.5 * static_cast<double>(g.image_height + 1) * g.pixel_size;
    }

    RaySamples ray(std::size_t view, std::size_t det) const {
        const double c = cos_[view];
        const double s = sin_[view];
        const double sx = -g_.source_to_center * c;
        const double sy = -g_.source_to_center * s;
        const double u = (static_cast<double>(det) -
                          0.5 * static_cast<double>(g_.num_detectors - 1)) *
                         g_.detector_spacing;
        double dx = g_.source_to_detector * c - u * s;
        double dy = g_.source_to_detector * s + u * c;
        const double len = std::hypot(dx, dy);
        dx /= len;
        dy /= len;

        double t_in = -std::numeric_limits<double>::infinity();
        double t_out = std::numeric_limits<double>::infinity();
        if (!clip(sx, dx, half_w_, t_in, t_out) || !clip(sy, dy, half_h_, t_in, t_out))
            return {};
        if (!(t_out > t_in)) return {};

        RaySamples r;
        r.count = static_cast<long>(std::ceil((t_out - t_in) / step_));
        const double t0 = t_in + 0.5 * step_;
        const double px = sx + t0 * dx;
        const double py = sy + t0 * dy;
        const double inv = 1.0 / g_.pixel_size;
        r.col0 = px * inv + 0.5 * static_cast<double>(g_.image_width - 1);
        r.row0 = 0.5 * static_cast<double>(g_.image_height - 1) - py * inv;
        r.dcol = dx * step_ * inv;
        r.drow = -dy * step_ * inv;
        r.weight = step_;
        return r;
    }

private:
    static bool clip(double origin, double dir, double half, double& t_in, double& t_out) {
        if (std::abs(dir) < 1e-15) return std::abs(origin) < half;
        double a = (-half - origin) / dir;
        double b = (half - origin) / dir;
        if (a > b) std::swap(a, b);
        t_in = std::max(t_in, a);
        t_out = std::min(t_out, b);
        return true;
    }

    const FanBeamGeometry& g_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    double step_ = 0.0;
    double half_w_ = 0.0;
    double half_h_ = 0.0;
};

/// Calls visit(pixel_index, weight) for every bilinear tap of every sample.
/// Samples lie inside the support box, so fractional indices are >= -1 and the
/// +2 offset makes truncation a floor.
template <class Visit>
inline void trace(const RaySamples& r, long width, long height, Visit&& visit) {
    double fc = r.col0 + 2.0;
    double fr = r.row0 + 2.0;
    const double w = r.weight;
    const std::size_t stride = static_cast<std::size_t>(width);
    for (long k = 0; k < r.count; ++k, fc += r.dcol, fr += r.drow) {
        const long c0 = static_cast<long>(fc) - 2;
        const long r0 = static_cast<long>(fr) - 2;
        const double a = fc - static_cast<double>(c0 + 2);
        const double b = fr - static_cast<double>(r0 + 2);
        const double wa = w * a;
        const double wna = w - wa;
        const double w00 = wna * (1.0 - b);
        const double w01 = wa * (1.0 - b);
        const double w10 = wna * b;
        const double w11 = wa * b;
        if (static_cast<unsigned long>(c0) < static_cast<unsigned long>(width - 1) &&
            static_cast<unsigned long>(r0) < static_cast<unsigned long>(height - 1)) {
            const std::size_t i = static_cast<std::size_t>(r0) * stride + static_cast<std::size_t>(c0);
            visit(i, w00);
            visit(i + 1, w01);
            visit(i + stride, w10);
            visit(i + stride + 1, w11);
            continue;
        }
        const bool c0_in = c0 >= 0 && c0 < width;
        const bool c1_in = c0 + 1 >= 0 && c0 + 1 < width;
        const bool r0_in = r0 >= 0 && r0 < height;
        const bool r1_in = r0 + 1 >= 0 && r0 + 1 < height;
        if (r0_in && c0_in) visit(static_cast<std::size_t>(r0 * width + c0), w00);
        if (r0_in && c1_in) visit(static_cast<std::size_t>(r0 * width + c0 + 1), w01);
        if (r1_in && c0_in) visit(static_cast<std::size_t>((r0 + 1) * width + c0), w10);
        if (r1_in && c1_in) visit(static_cast<std::size_t>((r0 + 1) * width + c0 + 1), w11);
    }
}

} // namespace

void project_into(std::span<const double> x, const FanBeamGeometry& g, std::span<double> out) {
    if (x.size() != g.num_pixels()) throw ConfigError("project: image size does not match geometry");
    if (out.size() != g.num_measurements())
        throw ConfigError("project: sinogram size does not match geometry");
    const RayTable table(g);
    const long w = static_cast<long>(g.image_width);
    const long h = static_cast<long>(g.image_height);
    const double* xp = x.data();
    for (std::size_t v = 0; v < g.num_views(); ++v) {
        for (std::size_t d = 0; d < g.num_detectors; ++d) {
            double acc = 0.0;
            trace(table.ray(v, d), w, h, [&](std::size_t i, double wt) { acc += wt * xp[i]; });
            out[v * g.num_detectors + d] = acc;
        }
    }
}

void backproject_into(std::span<const double> y, const FanBeamGeometry& g, std::span<double> out) {
    if (y.size() != g.num_measurements())
        throw ConfigError("backproject: sinogram size does not match geometry");
    if (out.size() != g.num_pixels())
        throw ConfigError("backproject: image size does not match geometry");
    std::fill(out.begin(), out.end(), 0.0);
    const RayTable table(g);
    const long w = static_cast<long>(g.image_width);
    const long h = static_cast<long>(g.image_height);
    double* xp = out.data();
    for (std::size_t v = 0; v < g.num_views(); ++v) {
        for (std::size_t d = 0; d < g.num_detectors; ++d) {
            const double val = y[v * g.num_detectors + d];
            if (val == 0.0) continue;
            trace(table.ray(v, d), w, h, [&](std::size_t i, double wt) { xp[i] += wt * val; });
        }
    }
}

Sinogram project(const Image& x, const FanBeamGeometry& g) {
    g.check_image(x);
    Sinogram y(g);
    project_into(x.data, g, y.data);
    return y;
}

Image backproject(const Sinogram& y, const FanBeamGeometry& g) {
    y.check();
    if (y.geometry.num_measurements() != g.num_measurements())
        throw ConfigError("backproject: sinogram geometry does not match");
    Image x = g.blank_image();
    backproject_into(y.data, g, x.data);
    return x;
}

std::vector<double> materialize_dense(const FanBeamGeometry& g) {
    if (g.image_width > 32 || g.image_height > 32)
        throw ConfigError("materialize_dense is limited to grids of at most 32x32");
    const std::size_t n = g.num_pixels();
    std::vector<double> dense(g.num_measurements() * n, 0.0);
    const RayTable table(g);
    const long w = static_cast<long>(g.image_width);
    const long h = static_cast<long>(g.image_height);
    for (std::size_t v = 0; v < g.num_views(); ++v) {
        for (std::size_t d = 0; d < g.num_detectors; ++d) {
            double* row = dense.data() + (v * g.num_detectors + d) * n;
            trace(table.ray(v, d), w, h, [&](std::size_t i, double wt) { row[i] += wt; });
        }
    }
    return dense;
}

bool kernel_assumption_check(const FanBeamGeometry& g, double tolerance) {
    const Image ones(g.image_width, g.image_height, g.pixel_size, 1.0);
    const Sinogram y = project(ones, g);
    return linalg::norm2(y.data) > tolerance;
}

} // namespace fewview
