#include "fewview/fbp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "fewview/errors.hpp"

namespace fewview {
namespace {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * count)));
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

/// Frequency response of the spatial Ram-Lak kernel (times the sample
/// spacing) with the requested apodisation.
std::vector<double> filter_response(std::size_t padded, std::size_t detectors, double spacing,
                                    const FbpFilter& filter) {
    auto kernel = fftw_buffer<double>(padded);
    auto spectrum = fftw_buffer<fftw_complex>(padded / 2 + 1);
    std::fill(kernel.get(), kernel.get() + padded, 0.0);
    const double tau2 = spacing * spacing;
    kernel[0] = 1.0 / (4.0 * tau2);
    for (std::size_t k = 1; k < detectors; ++k) {
        if (k % 2 == 0) continue;
        const double kk = static_cast<double>(k);
        const double value = -1.0 / (kk * kk * std::numbers::pi * std::numbers::pi * tau2);
        kernel[k] = value;
        kernel[padded - k] = value;
    }
    Plan plan(fftw_plan_dft_r2c_1d(static_cast<int>(padded), kernel.get(), spectrum.get(),
                                   FFTW_ESTIMATE));
    fftw_execute(plan.get());

    std::vector<double> response(padded / 2 + 1);
    for (std::size_t k = 0; k < response.size(); ++k) {
        // The kernel is even, so its transform is real.
        double value = spectrum[k][0] * spacing;
        const double nu = 2.0 * static_cast<double>(k) / static_cast<double>(padded);
        if (nu > filter.cutoff) {
            value = 0.0;
        } else if (filter.kind == FbpFilter::Kind::hann) {
            value *= 0.5 * (1.0 + std::cos(std::numbers::pi * nu / filter.cutoff));
        }
        response[k] = value;
    }
    return response;
}

} // namespace

void FbpFilter::validate() const {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) throw ParameterError("FBP cutoff must lie in (0, 1]");
}

FbpFilter::Kind fbp_filter_kind_from_string(const std::string& name) {
    if (name == "ram-lak") return FbpFilter::Kind::ram_lak;
    if (name == "hann" || name == "hann-apodized-ram-lak") return FbpFilter::Kind::hann;
    throw ConfigError("unknown FBP filter '" + name + "'");
}

std::string to_string(FbpFilter::Kind kind) {
    return kind == FbpFilter::Kind::hann ? "hann" : "ram-lak";
}

Image fbp(const Sinogram& y, const FbpFilter& filter, bool clamp_nonnegative) {
    filter.validate();
    y.check();
    const FanBeamGeometry& g = y.geometry;
    g.validate();
    if (g.num_views() < 2) throw ConfigError("FBP needs at least two views");

    const std::size_t nd = g.num_detectors;
    const double sod = g.source_to_center;
    const double magnification = g.source_to_detector / sod;
    const double spacing = g.detector_spacing / magnification; // virtual detector at the centre
    const double centre = 0.5 * static_cast<double>(nd - 1);

    const std::size_t padded = next_pow2(2 * nd);
    const std::vector<double> response = filter_response(padded, nd, spacing, filter);

    auto line = fftw_buffer<double>(padded);
    auto spectrum = fftw_buffer<fftw_complex>(padded / 2 + 1);
    Plan forward(fftw_plan_dft_r2c_1d(static_cast<int>(padded), line.get(), spectrum.get(),
                                      FFTW_ESTIMATE));
    Plan inverse(fftw_plan_dft_c2r_1d(static_cast<int>(padded), spectrum.get(), line.get(),
                                      FFTW_ESTIMATE));

    std::vector<double> filtered(g.num_views() * nd);
    for (std::size_t v = 0; v < g.num_views(); ++v) {
        std::fill(line.get(), line.get() + padded, 0.0);
        for (std::size_t d = 0; d < nd; ++d) {
            const double u = (static_cast<double>(d) - centre) * spacing;
            line[d] = y.at(v, d) * sod / std::sqrt(sod * sod + u * u);
        }
        fftw_execute(forward.get());
        for (std::size_t k = 0; k < response.size(); ++k) {
            spectrum[k][0] *= response[k];
            spectrum[k][1] *= response[k];
        }
        fftw_execute(inverse.get());
        const double norm = 1.0 / static_cast<double>(padded);
        for (std::size_t d = 0; d < nd; ++d) filtered[v * nd + d] = line[d] * norm;
    }

    Image x = g.blank_image();
    const double s = g.pixel_size;
    const double half_w = 0.5 * static_cast<double>(g.image_width - 1);
    const double half_h = 0.5 * static_cast<double>(g.image_height - 1);
    const double angular = std::numbers::pi / static_cast<double>(g.num_views());
    for (std::size_t v = 0; v < g.num_views(); ++v) {
        const double beta = g.angles_deg[v] * std::numbers::pi / 180.0;
        const double cb = std::cos(beta);
        const double sb = std::sin(beta);
        const double* q = filtered.data() + v * nd;
        for (std::size_t r = 0; r < g.image_height; ++r) {
            const double py = (half_h - static_cast<double>(r)) * s;
            for (std::size_t c = 0; c < g.image_width; ++c) {
                const double px = (static_cast<double>(c) - half_w) * s;
                const double depth = sod + px * cb + py * sb;
                const double lateral = -px * sb + py * cb;
                const double u = sod * lateral / depth;
                const double pos = u / spacing + centre;
                const double f = std::floor(pos);
                const long i0 = static_cast<long>(f);
                if (i0 < -1 || i0 >= static_cast<long>(nd)) continue;
                const double a = pos - f;
                double value = 0.0;
                if (i0 >= 0) value += (1.0 - a) * q[i0];
                if (i0 + 1 < static_cast<long>(nd)) value += a * q[i0 + 1];
                x(r, c) += angular * value * (sod * sod) / (depth * depth);
            }
        }
    }
    if (clamp_nonnegative) linalg::clamp_nonnegative(x.data);
    return x;
}

} // namespace fewview
