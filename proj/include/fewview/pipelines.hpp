#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fewview/fbp.hpp"
#include "fewview/geometry.hpp"
#include "fewview/image.hpp"
#include "fewview/metrics.hpp"
#include "fewview/noise.hpp"
#include "fewview/solver.hpp"
#include "fewview/weights.hpp"

namespace fewview {

enum class MethodKind {
    global_tv,
    gt_wl1,
    fbp_wl1,
    tv_wl1,
    fbp_net_wl1,
    fbp_gnet_wl1,
    irl1_a,
    irl1_b,
};

std::string to_string(MethodKind kind);
MethodKind method_kind_from_string(const std::string& name);

/// One reconstruction method and its model parameters.
struct ReconMethod {
    MethodKind kind = MethodKind::gt_wl1;
    double lambda = 0.01;
    double eta = 2e-5;
    double p = 0.3;
    /// Iterations of the early-stopped TV intermediate (tv-wl1).
    std::size_t k_early = 20;
    /// Regularisation of the early-stopped TV intermediate; defaults to `lambda`.
    std::optional<double> intermediate_lambda;
    /// Weight refresh cadence of the reweighted baselines.
    std::size_t reweight_every = 10;
    /// Network export consumed by fbp-net-wl1 / fbp-gnet-wl1.
    std::filesystem::path intermediate;
    FbpFilter filter;

    void validate() const;
    /// True for the methods that build weights from an intermediate image.
    bool uses_intermediate() const noexcept;
};

struct PipelineReport {
    ReconMethod method;
    std::optional<Image> x_tilde;
    std::optional<MetricsRecord> x_tilde_metrics;
    MetricsRecord final_metrics;
    /// RE(x*, x*_GT) against the solution computed with ground-truth weights.
    std::optional<double> re_vs_gt_weights_solution;
    ReconstructionResult result;
    /// Weight field of the final solve (last refresh for reweighted methods).
    WeightField weights;
    std::vector<std::filesystem::path> artifacts;
};

enum class InitialGuess { zero, fbp };

struct RunOptions {
    bool compare_with_gt_weights = false;
    /// Replaces the method's intermediate image; not owned.
    const Image* x_tilde_override = nullptr;
    /// When set, x_tilde, final image, weights and history are written here.
    std::optional<std::filesystem::path> artifact_dir;
    InitialGuess initial_guess = InitialGuess::zero;
};

/// y_delta = project(gt) plus relative Gaussian noise.
Sinogram simulate_measurement(const Image& gt, const FanBeamGeometry& g, const NoiseSpec& noise);

/// Intermediate image x_tilde for `method` (none for global-tv and the
/// reweighted baselines). `gt` is required by gt-wl1.
std::optional<Image> intermediate_image(const ReconMethod& method, const Sinogram& y,
                                        const Image* gt, const SolverConfig& cfg);

/// Reconstruct from existing data. `gt` (optional) drives metrics and the
/// gt-wl1 intermediate. cfg.lambda is replaced by method.lambda.
PipelineReport reconstruct(const ReconMethod& method, const Sinogram& y, const Image* gt,
                           const SolverConfig& cfg, const RunOptions& options = {});

/// Simulate, reconstruct, evaluate against `gt`.
PipelineReport run_method(const ReconMethod& method, const Image& gt, const FanBeamGeometry& g,
                          const NoiseSpec& noise, const SolverConfig& cfg,
                          const RunOptions& options = {});

struct SweepPoint {
    double value = 0.0;
    double distance = 0.0;
    /// Dual plus primal feasibility violations of the solves behind this point.
    std::size_t violations = 0;
};

/// RE(x*_nu, x*_0) for each nu. One noise draw (from `noise_seed`) is rescaled
/// across the sweep and the intermediate image is frozen (computed from the
/// data at nus.front()), so only delta varies. `nus` must be strictly
/// decreasing and end at 0.
std::vector<SweepPoint> noise_stability_sweep(const Image& gt, const FanBeamGeometry& g,
                                              const ReconMethod& method,
                                              std::span<const double> nus,
                                              const SolverConfig& cfg, std::uint64_t noise_seed);

enum class PerturbationSide { image, gradient };

/// RE(x*_eps, x*_GT) where x*_eps uses weights from a perturbed reconstructor:
/// image side, x_tilde = gt + eps ||gt|| u; gradient side,
/// |D x_tilde| = | |D gt| + eps || |D gt| || u |, with u a seeded unit-norm
/// Gaussian direction. eps is therefore the relative error of the reconstructor.
std::vector<SweepPoint> reconstructor_stability_sweep(const Image& gt, const FanBeamGeometry& g,
                                                      const NoiseSpec& noise,
                                                      std::span<const double> epsilons,
                                                      const ReconMethod& method,
                                                      const SolverConfig& cfg,
                                                      PerturbationSide side,
                                                      std::uint64_t perturbation_seed);

/// Named parameter sets. `lambda_*` are in this toolkit's units (see README).
struct Preset {
    std::string name;
    std::size_t num_views = 45;
    double nu = 0.0;
    double lambda_wl1 = 0.0;
    double eta = 2e-5;
    double p = 0.3;
    double lambda_tv = 0.0;
    double lambda_irl1_a = 0.0;
    double eta_irl1_a = 2e-3;
    double lambda_irl1_b = 0.0;
    double eta_irl1_b = 6e-3;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);
/// Method of `kind` parameterised by `preset`.
ReconMethod preset_method(const Preset& preset, MethodKind kind);

} // namespace fewview
