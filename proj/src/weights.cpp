#include "fewview/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fewview/errors.hpp"
#include "fewview/gradient.hpp"

namespace fewview {
namespace {

void check_eta(double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ParameterError("eta must be positive and finite");
}

void check_p(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw ParameterError("p must lie in [0, 1)");
}

} // namespace

WeightField WeightField::unit(std::size_t width, std::size_t height) {
    WeightField w;
    w.width = width;
    w.height = height;
    w.data.assign(width * height, 1.0);
    return w;
}

Image WeightField::to_image(double pixel_size) const {
    Image img(width, height, pixel_size);
    img.data = data;
    return img;
}

double power_law_weight(double magnitude, double eta, double p) {
    if (magnitude == 0.0) return 1.0;
    return std::pow(eta / std::hypot(eta, magnitude), 1.0 - p);
}

WeightField weights_from_magnitude(const Image& magnitude, double eta, double p) {
    check_eta(eta);
    check_p(p);
    WeightField w;
    w.width = magnitude.width;
    w.height = magnitude.height;
    w.eta = eta;
    w.p_exponent = p;
    w.data.resize(magnitude.size());
    for (std::size_t i = 0; i < magnitude.size(); ++i)
        w.data[i] = power_law_weight(magnitude.data[i], eta, p);
    return w;
}

WeightField compute_weights(const Image& x_tilde, double eta, double p) {
    check_eta(eta);
    check_p(p);
    return weights_from_magnitude(gradient_magnitude(grad(x_tilde)), eta, p);
}

WeightField ir_update_A(const Image& x_k, double eta, double p) {
    return compute_weights(x_k, eta, p);
}

WeightField ir_update_B(const Image& x_k, double eta) {
    check_eta(eta);
    const GradientField f = grad(x_k);
    WeightField w;
    w.width = x_k.width;
    w.height = x_k.height;
    w.eta = eta;
    w.p_exponent = 0.0;
    w.data.resize(f.pixels());
    const double inv = 1.0 / (eta * eta);
    for (std::size_t i = 0; i < f.pixels(); ++i) {
        const double sq = f.horizontal[i] * f.horizontal[i] + f.vertical[i] * f.vertical[i];
        // exp underflows to 0 once the gradient exceeds ~27 eta; keep the field positive.
        w.data[i] = std::max(std::exp(-sq * inv), std::numeric_limits<double>::min());
    }
    return w;
}

} // namespace fewview
