#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fewview/geometry.hpp"
#include "fewview/image.hpp"
#include "fewview/metrics.hpp"
#include "fewview/weights.hpp"

namespace fewview {

/// Parameters of the primal-dual iteration.
///
/// The solver minimises 1/2 ||Kx - y||^2 + lambda ||w . |Dx| ||_1 over x >= 0.
/// Histories report J(x) = ||Kx - y||^2 + 2 lambda ||w . |Dx| ||_1, the same
/// problem without the 1/2 on the data term.
struct SolverConfig {
    double lambda = 1.0;
    /// Dual and primal steps. Non-positive values mean 1 / ||[K; D]||.
    double sigma = 0.0;
    double tau = 0.0;
    /// Extrapolation weight of the inertia step, in [0, 1].
    double beta = 1.0;
    std::size_t max_iters = 2000;
    /// Record objective (and metrics) every this many iterations.
    std::size_t record_every = 10;
    /// Stop once ||x_{k+1} - x_k|| / ||x_{k+1}|| falls below this value.
    double stop_tol = 1e-7;
    /// Iterations between weight refreshes in the reweighted solvers.
    std::size_t reweight_every = 10;
    /// Cached estimate of ||[K; D]||; computed on demand when absent.
    std::optional<double> operator_norm;
    std::size_t norm_iters = 50;
    std::uint64_t norm_seed = 0;

    void validate() const;
};

/// Dual iterates p (fidelity) and q (stacked gradient), and the extrapolated primal x_bar.
struct DualState {
    std::vector<double> dual_fid;
    std::vector<double> dual_grad;
    Image x_bar;
};

enum class StopReason { max_iters, tol_reached };
std::string to_string(StopReason reason);

struct ObjectiveSample {
    std::size_t iteration = 0;
    double value = 0.0;
};

struct MetricSample {
    std::size_t iteration = 0;
    MetricsRecord metrics;
};

struct ReconstructionResult {
    Image image;
    std::vector<ObjectiveSample> objective_history;
    std::vector<MetricSample> metric_history;
    std::size_t iters_run = 0;
    StopReason stop_reason = StopReason::max_iters;
    DualState dual;
    WeightField final_weights;
    /// Iterations at which the weight field was recomputed (reweighted solvers).
    std::vector<std::size_t> reweight_iterations;
    /// Count of iterations at which a feasibility invariant failed.
    std::size_t dual_violations = 0;
    std::size_t primal_violations = 0;
    double sigma = 0.0;
    double tau = 0.0;
    double operator_norm = 0.0;
};

/// Recomputes the weight field from the current iterate.
using WeightRule = std::function<WeightField(const Image&)>;

struct SolveOptions {
    /// Ground truth for RE/PSNR/SSIM histories; not owned.
    const Image* reference = nullptr;
    /// Resume from a previous dual state instead of p = 0, q = 0, x_bar = x0.
    const DualState* warm_start = nullptr;
    /// When set, w is replaced by rule(x_k) before iterations k = 0, r, 2r, ...
    /// with r = cfg.reweight_every.
    WeightRule reweight;
};

/// J(x) = ||Kx - y||^2 + lambda ||w . |Dx| ||_1.
double objective(const Image& x, const Sinogram& y, const WeightField& w, double lambda);

/// prox of sigma F1*, F1 = 1/2 ||. - y||^2: returns (p - sigma y) / (1 + sigma).
std::vector<double> prox_fidelity_dual(std::span<const double> p, double sigma, const Sinogram& y);

/// t = q + sigma Dx_bar, then each pixel pair (t_h,i, t_v,i) is projected
/// radially onto the disk of radius lambda w_i.
std::vector<double> prox_tv_dual(std::span<const double> q, double sigma, const WeightField& w,
                                 double lambda, const GradientField& dx_bar);

/// Chambolle-Pock iteration for the weighted-TV model with x >= 0.
/// Throws NumericalDivergenceError on a non-finite iterate.
ReconstructionResult chambolle_pock(const Sinogram& y, const WeightField& w, const SolverConfig& cfg,
                                    const Image& x0, const SolveOptions& options = {});

/// Plain isotropic TV (unit weights).
ReconstructionResult solve_global_tv(const Sinogram& y, double lambda, const SolverConfig& cfg,
                                     const Image& x0, const SolveOptions& options = {});

/// Iterate of `solve_global_tv` after exactly `k_early` iterations.
Image early_stopped_tv(const Sinogram& y, double lambda, std::size_t k_early,
                       const SolverConfig& cfg, const Image& x0);

enum class ReweightRule { A, B };

/// Iteratively reweighted TV: weights come from the current iterate every
/// cfg.reweight_every iterations (rule A: power law, rule B: exponential).
ReconstructionResult ir_reweighted_solve(const Sinogram& y, const SolverConfig& cfg,
                                         ReweightRule rule, double eta, double p, const Image& x0,
                                         const SolveOptions& options = {});

/// Step sizes actually used for `cfg` on geometry `g`, with the norm estimate.
struct StepSizes {
    double sigma;
    double tau;
    double operator_norm;
};
StepSizes resolve_steps(const SolverConfig& cfg, const FanBeamGeometry& g);

} // namespace fewview
