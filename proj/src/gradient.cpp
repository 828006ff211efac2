#include "fewview/gradient.hpp"

#include <cmath>

#include "fewview/errors.hpp"

namespace fewview {

void grad_into(std::span<const double> x, std::size_t width, std::size_t height,
               std::span<double> h, std::span<double> v) {
    const std::size_t n = width * height;
    if (x.size() != n || h.size() != n || v.size() != n) throw ConfigError("grad: size mismatch");
    for (std::size_t r = 0; r < height; ++r) {
        const std::size_t row = r * width;
        for (std::size_t c = 0; c + 1 < width; ++c) h[row + c] = x[row + c + 1] - x[row + c];
        h[row + width - 1] = 0.0;
        if (r + 1 < height) {
            for (std::size_t c = 0; c < width; ++c) v[row + c] = x[row + width + c] - x[row + c];
        } else {
            for (std::size_t c = 0; c < width; ++c) v[row + c] = 0.0;
        }
    }
}

void grad_adjoint_into(std::span<const double> h, std::span<const double> v, std::size_t width,
                       std::size_t height, std::span<double> out) {
    const std::size_t n = width * height;
    if (out.size() != n || h.size() != n || v.size() != n)
        throw ConfigError("grad_adjoint: size mismatch");
    for (std::size_t r = 0; r < height; ++r) {
        const std::size_t row = r * width;
        for (std::size_t c = 0; c < width; ++c) {
            double acc = 0.0;
            if (c + 1 < width) acc -= h[row + c];
            if (c > 0) acc += h[row + c - 1];
            if (r + 1 < height) acc -= v[row + c];
            if (r > 0) acc += v[row - width + c];
            out[row + c] = acc;
        }
    }
}

GradientField grad(const Image& x) {
    if (x.data.size() != x.width * x.height) throw ConfigError("grad: malformed image");
    GradientField f(x.width, x.height);
    grad_into(x.data, x.width, x.height, f.horizontal, f.vertical);
    return f;
}

Image grad_adjoint(const GradientField& f, double pixel_size) {
    Image out(f.width, f.height, pixel_size);
    grad_adjoint_into(f.horizontal, f.vertical, f.width, f.height, out.data);
    return out;
}

Image gradient_magnitude(const GradientField& f, double pixel_size) {
    Image out(f.width, f.height, pixel_size);
    for (std::size_t i = 0; i < f.pixels(); ++i)
        out.data[i] = std::hypot(f.horizontal[i], f.vertical[i]);
    return out;
}

double total_variation(const Image& x) {
    const GradientField f = grad(x);
    double tv = 0.0;
    for (std::size_t i = 0; i < f.pixels(); ++i) tv += std::hypot(f.horizontal[i], f.vertical[i]);
    return tv;
}

} // namespace fewview
