#pragma once

#include <vector>

#include "fewview/image.hpp"

namespace fewview {

/// Per-pixel multipliers of the weighted TV term, each in (0, 1].
struct WeightField {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> data;
    double eta = 0.0;
    /// Exponent p of the power law; 0 for the exponential rule.
    double p_exponent = 0.0;

    std::size_t size() const noexcept { return data.size(); }

    /// All-ones field, which turns the weighted TV into plain TV.
    static WeightField unit(std::size_t width, std::size_t height);

    /// Copy into an Image for export and display.
    Image to_image(double pixel_size = 1.0) const;
};

/// w_i = (eta / sqrt(eta^2 + m_i^2))^(1 - p) for a gradient-magnitude image m.
/// w_i is exactly 1 where m_i = 0.
WeightField weights_from_magnitude(const Image& magnitude, double eta, double p);

/// Fixed adaptive weights computed from an intermediate image x_tilde.
WeightField compute_weights(const Image& x_tilde, double eta, double p);

/// Power-law reweighting of the current iterate (same law, evaluated on x_k).
WeightField ir_update_A(const Image& x_k, double eta, double p);

/// Exponential reweighting w_i = exp(-((D_h x)_i^2 + (D_v x)_i^2) / eta^2).
WeightField ir_update_B(const Image& x_k, double eta);

/// Scalar form of the power law, shared with tests and documentation.
double power_law_weight(double magnitude, double eta, double p);

} // namespace fewview
