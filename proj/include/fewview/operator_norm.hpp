#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "fewview/geometry.hpp"

namespace fewview {

/// Matrix-free linear map R^domain -> R^range with its adjoint.
struct LinearMap {
    std::size_t domain_size = 0;
    std::size_t range_size = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
    std::function<void(std::span<const double>, std::span<double>)> apply_adjoint;
};

/// M = [K; D] for the given geometry; range size m + 2n (K rows, then D_h, then D_v).
LinearMap stacked_operator(const FanBeamGeometry& g);

/// Power iteration on A^T A. Returns ||A v_k|| for the last unit iterate v_k,
/// which never decreases with k. Stops after `max_iters` or once the relative
/// change of the estimate drops below `rel_tol`.
double power_iteration_norm(const LinearMap& a, std::size_t max_iters, std::uint64_t seed,
                            double rel_tol = 1e-6);

/// Estimate of ||[K; D]||_2.
double operator_norm(const FanBeamGeometry& g, std::size_t iters = 50, std::uint64_t seed = 0,
                     double rel_tol = 1e-6);

} // namespace fewview
