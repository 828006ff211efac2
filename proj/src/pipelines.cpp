#include "fewview/pipelines.hpp"

#include <algorithm>
#include <cmath>

#include "fewview/csv.hpp"
#include "fewview/errors.hpp"
#include "fewview/gradient.hpp"
#include "fewview/projector.hpp"
#include "fewview/random.hpp"
#include "fewview/raster_io.hpp"

namespace fewview {
namespace {

namespace fs = std::filesystem;

struct KindName {
    MethodKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {MethodKind::global_tv, "global-tv"},     {MethodKind::gt_wl1, "gt-wl1"},
    {MethodKind::fbp_wl1, "fbp-wl1"},         {MethodKind::tv_wl1, "tv-wl1"},
    {MethodKind::fbp_net_wl1, "fbp-net-wl1"}, {MethodKind::fbp_gnet_wl1, "fbp-gnet-wl1"},
    {MethodKind::irl1_a, "irl1-a"},           {MethodKind::irl1_b, "irl1-b"},
};

Image initial_image(const Sinogram& y, InitialGuess guess) {
    if (guess == InitialGuess::fbp) return fbp(y, {}, true);
    return y.geometry.blank_image();
}

SolverConfig with_lambda(const SolverConfig& cfg, double lambda) {
    SolverConfig c = cfg;
    c.lambda = lambda;
    return c;
}

std::vector<double> unit_direction(std::size_t count, std::uint64_t seed) {
    std::vector<double> u = standard_normal(count, seed);
    const double n = linalg::norm2(u);
    for (double& v : u) v /= n;
    return u;
}

void check_sweep_order(std::span<const double> values, bool must_end_at_zero, const char* what) {
    if (values.empty()) throw ConfigError(std::string(what) + ": empty sweep");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0)) throw ConfigError(std::string(what) + ": negative value");
        if (i > 0 && !(values[i] < values[i - 1]))
            throw ConfigError(std::string(what) + ": values must be strictly decreasing");
    }
    if (must_end_at_zero && values.back() != 0.0)
        throw ConfigError(std::string(what) + ": sweep must end at 0");
}

/// Ensures the operator norm is estimated once for a batch of solves.
SolverConfig with_cached_norm(const SolverConfig& cfg, const FanBeamGeometry& g) {
    SolverConfig c = cfg;
    if (!c.operator_norm) c.operator_norm = resolve_steps(cfg, g).operator_norm;
    return c;
}

std::size_t violations(const ReconstructionResult& r) {
    return r.dual_violations + r.primal_violations;
}

} // namespace

std::string to_string(MethodKind kind) {
    for (const auto& kn : kKindNames)
        if (kn.kind == kind) return kn.name;
    return "gt-wl1";
}

MethodKind method_kind_from_string(const std::string& name) {
    for (const auto& kn : kKindNames)
        if (name == kn.name) return kn.kind;
    throw ConfigError("unknown method '" + name + "'");
}

void ReconMethod::validate() const {
    if (!(lambda > 0.0)) throw ParameterError("method lambda must be positive");
    if (intermediate_lambda && !(*intermediate_lambda > 0.0))
        throw ParameterError("intermediate lambda must be positive");
    if (kind != MethodKind::global_tv) {
        if (!(eta > 0.0)) throw ParameterError("eta must be positive");
        if (kind != MethodKind::irl1_b && !(p >= 0.0 && p < 1.0))
            throw ParameterError("p must lie in [0, 1)");
    }
    if (reweight_every == 0) throw ParameterError("reweight_every must be at least 1");
    if ((kind == MethodKind::fbp_net_wl1 || kind == MethodKind::fbp_gnet_wl1) &&
        intermediate.empty())
        throw ConfigError(to_string(kind) + " needs the path of an exported intermediate image");
    filter.validate();
}

bool ReconMethod::uses_intermediate() const noexcept {
    return kind != MethodKind::global_tv && kind != MethodKind::irl1_a &&
           kind != MethodKind::irl1_b;
}

Sinogram simulate_measurement(const Image& gt, const FanBeamGeometry& g, const NoiseSpec& noise) {
    return add_noise(project(gt, g), noise);
}

std::optional<Image> intermediate_image(const ReconMethod& method, const Sinogram& y,
                                        const Image* gt, const SolverConfig& cfg) {
    switch (method.kind) {
    case MethodKind::gt_wl1:
        if (!gt) throw ConfigError("gt-wl1 needs the ground-truth image");
        return *gt;
    case MethodKind::fbp_wl1:
        return fbp(y, method.filter);
    case MethodKind::tv_wl1:
        return early_stopped_tv(y, method.intermediate_lambda.value_or(method.lambda),
                                method.k_early, cfg, y.geometry.blank_image());
    case MethodKind::fbp_net_wl1:
    case MethodKind::fbp_gnet_wl1: {
        if (!fs::exists(method.intermediate)) throw DependencyError(method.intermediate.string());
        Image x = read_image(method.intermediate);
        y.geometry.check_image(x);
        return x;
    }
    case MethodKind::global_tv:
    case MethodKind::irl1_a:
    case MethodKind::irl1_b:
        break;
    }
    return std::nullopt;
}

PipelineReport reconstruct(const ReconMethod& method, const Sinogram& y, const Image* gt,
                           const SolverConfig& cfg_in, const RunOptions& options) {
    method.validate();
    y.check();
    const FanBeamGeometry& g = y.geometry;
    g.validate();
    if (!kernel_assumption_check(g))
        throw ConfigError("geometry has no ray through the image; the model is ill-posed");
    if (gt) g.check_image(*gt);

    const SolverConfig cfg = with_lambda(with_cached_norm(cfg_in, g), method.lambda);
    const Image x0 = initial_image(y, options.initial_guess);
    SolveOptions solve;
    solve.reference = gt;

    PipelineReport report;
    report.method = method;

    if (method.uses_intermediate()) {
        report.x_tilde = options.x_tilde_override ? std::optional<Image>(*options.x_tilde_override)
                                                  : intermediate_image(method, y, gt, cfg);
        g.check_image(*report.x_tilde);
        if (gt) report.x_tilde_metrics = evaluate(*report.x_tilde, *gt);
        const WeightField w = compute_weights(*report.x_tilde, method.eta, method.p);
        report.result = chambolle_pock(y, w, cfg, x0, solve);
    } else if (method.kind == MethodKind::global_tv) {
        report.result = solve_global_tv(y, method.lambda, cfg, x0, solve);
    } else {
        SolverConfig c = cfg;
        c.reweight_every = method.reweight_every;
        const ReweightRule rule =
            method.kind == MethodKind::irl1_a ? ReweightRule::A : ReweightRule::B;
        report.result = ir_reweighted_solve(y, c, rule, method.eta, method.p, x0, solve);
    }
    report.weights = report.result.final_weights;
    if (gt) report.final_metrics = evaluate(report.result.image, *gt);

    if (options.compare_with_gt_weights && method.uses_intermediate()) {
        if (!gt) throw ConfigError("comparison with the GT-weight solution needs the ground truth");
        if (method.kind == MethodKind::gt_wl1 && !options.x_tilde_override) {
            report.re_vs_gt_weights_solution = 0.0;
        } else {
            const WeightField w_gt = compute_weights(*gt, method.eta, method.p);
            const ReconstructionResult ref = chambolle_pock(y, w_gt, cfg, x0);
            report.re_vs_gt_weights_solution = relative_error(report.result.image, ref.image);
        }
    }

    if (options.artifact_dir) {
        const fs::path& dir = *options.artifact_dir;
        fs::create_directories(dir);
        if (report.x_tilde) {
            write_image(dir / "x_tilde.f32", *report.x_tilde);
            report.artifacts.push_back(dir / "x_tilde.f32");
        }
        write_image(dir / "final.f32", report.result.image);
        report.artifacts.push_back(dir / "final.f32");
        write_weights(dir / "weights.f32", report.weights, g.pixel_size);
        report.artifacts.push_back(dir / "weights.f32");
        write_history_csv(dir / "history.csv", report.result);
        report.artifacts.push_back(dir / "history.csv");
    }
    return report;
}

PipelineReport run_method(const ReconMethod& method, const Image& gt, const FanBeamGeometry& g,
                          const NoiseSpec& noise, const SolverConfig& cfg,
                          const RunOptions& options) {
    g.validate();
    g.check_image(gt);
    const Sinogram y = simulate_measurement(gt, g, noise);
    return reconstruct(method, y, &gt, cfg, options);
}

std::vector<SweepPoint> noise_stability_sweep(const Image& gt, const FanBeamGeometry& g,
                                              const ReconMethod& method,
                                              std::span<const double> nus,
                                              const SolverConfig& cfg_in,
                                              std::uint64_t noise_seed) {
    method.validate();
    check_sweep_order(nus, true, "noise sweep");
    if (method.kind == MethodKind::irl1_a || method.kind == MethodKind::irl1_b)
        throw ConfigError("noise stability needs weights frozen across the sweep");
    g.check_image(gt);

    const SolverConfig cfg = with_lambda(with_cached_norm(cfg_in, g), method.lambda);
    const Sinogram clean = project(gt, g);
    const std::vector<double> z = standard_normal(clean.size(), noise_seed);

    WeightField w = WeightField::unit(g.image_width, g.image_height);
    if (method.uses_intermediate()) {
        const Sinogram first = add_scaled_noise(clean, nus.front(), z);
        const std::optional<Image> x_tilde = intermediate_image(method, first, &gt, cfg);
        w = compute_weights(*x_tilde, method.eta, method.p);
    }

    const Image x0 = g.blank_image();
    std::vector<ReconstructionResult> solutions;
    for (double nu : nus) solutions.push_back(chambolle_pock(add_scaled_noise(clean, nu, z), w, cfg, x0));

    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < nus.size(); ++i)
        out.push_back({nus[i], relative_error(solutions[i].image, solutions.back().image),
                       violations(solutions[i])});
    return out;
}

std::vector<SweepPoint> reconstructor_stability_sweep(const Image& gt, const FanBeamGeometry& g,
                                                      const NoiseSpec& noise,
                                                      std::span<const double> epsilons,
                                                      const ReconMethod& method,
                                                      const SolverConfig& cfg_in,
                                                      PerturbationSide side,
                                                      std::uint64_t perturbation_seed) {
    method.validate();
    check_sweep_order(epsilons, false, "reconstructor sweep");
    g.check_image(gt);

    const SolverConfig cfg = with_lambda(with_cached_norm(cfg_in, g), method.lambda);
    const Sinogram y = simulate_measurement(gt, g, noise);
    const Image x0 = g.blank_image();
    const std::vector<double> u = unit_direction(gt.size(), perturbation_seed);

    const WeightField w_gt = compute_weights(gt, method.eta, method.p);
    const ReconstructionResult reference = chambolle_pock(y, w_gt, cfg, x0);
    const Image gt_magnitude = gradient_magnitude(grad(gt), gt.pixel_size);
    const double gt_norm = linalg::norm2(gt.data);
    const double magnitude_norm = linalg::norm2(gt_magnitude.data);

    std::vector<SweepPoint> out;
    for (double eps : epsilons) {
        WeightField w;
        if (side == PerturbationSide::image) {
            Image x_tilde = gt;
            for (std::size_t i = 0; i < u.size(); ++i) x_tilde.data[i] += eps * gt_norm * u[i];
            w = compute_weights(x_tilde, method.eta, method.p);
        } else {
            Image magnitude = gt_magnitude;
            for (std::size_t i = 0; i < u.size(); ++i)
                magnitude.data[i] = std::abs(magnitude.data[i] + eps * magnitude_norm * u[i]);
            w = weights_from_magnitude(magnitude, method.eta, method.p);
        }
        const ReconstructionResult x = chambolle_pock(y, w, cfg, x0);
        out.push_back({eps, relative_error(x.image, reference.image),
                       violations(x) + violations(reference)});
    }
    return out;
}

const std::vector<Preset>& presets() {
    // Synthetic presets are calibrated for the default 4-unit field of view.
    // The COULE and Mayo entries keep their reference values; their absolute
    // lambda depends on the data scaling they were tuned for.
    static const std::vector<Preset> table = {
        {"synthetic-nu005", 45, 0.005, 0.01, 2e-5, 0.3, 0.003, 0.01, 2e-3, 0.1, 6e-3},
        {"synthetic-nu02", 45, 0.02, 0.01, 2e-5, 0.3, 0.003, 0.01, 2e-3, 0.1, 6e-3},
        {"coule-g90-nu03", 90, 0.03, 10.0, 2e-5, 0.3, 2.0, 10.0, 2e-3, 120.0, 6e-3},
        {"coule-g90-nu05", 90, 0.05, 12.0, 2e-5, 0.3, 3.0, 12.0, 2e-3, 500.0, 6e-3},
        {"coule-g45-nu01", 45, 0.01, 5.0, 2e-5, 0.3, 1.2, 5.0, 2e-3, 120.0, 6e-3},
        {"mayo-g45-nu005", 45, 0.005, 0.8, 2e-3, 0.3, 0.8, 0.05, 2e-3, 50.0, 6e-3},
    };
    return table;
}

const Preset& find_preset(const std::string& name) {
    for (const Preset& p : presets())
        if (p.name == name) return p;
    throw ConfigError("unknown preset '" + name + "'");
}

ReconMethod preset_method(const Preset& preset, MethodKind kind) {
    ReconMethod m;
    m.kind = kind;
    m.eta = preset.eta;
    m.p = preset.p;
    m.lambda = preset.lambda_wl1;
    m.intermediate_lambda = preset.lambda_tv;
    switch (kind) {
    case MethodKind::global_tv:
        m.lambda = preset.lambda_tv;
        break;
    case MethodKind::irl1_a:
        m.lambda = preset.lambda_irl1_a;
        m.eta = preset.eta_irl1_a;
        m.p = 0.0;
        break;
    case MethodKind::irl1_b:
        m.lambda = preset.lambda_irl1_b;
        m.eta = preset.eta_irl1_b;
        m.p = 0.0;
        break;
    default:
        break;
    }
    return m;
}

} // namespace fewview
