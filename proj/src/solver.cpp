#include "fewview/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fewview/errors.hpp"
#include "fewview/gradient.hpp"
#include "fewview/operator_norm.hpp"
#include "fewview/projector.hpp"

namespace fewview {
namespace {

constexpr double kFeasibilitySlack = 1e-12;

void check_weights(const WeightField& w, const FanBeamGeometry& g) {
    if (w.width != g.image_width || w.height != g.image_height || w.data.size() != g.num_pixels())
        throw ConfigError("weight field does not match the image grid");
}

/// Radial projection of each (h_i, v_i) pair onto the disk of radius lambda w_i.
void project_dual_disks(std::span<double> h, std::span<double> v, std::span<const double> w,
                        double lambda) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double radius = lambda * w[i];
        const double mag = std::hypot(h[i], v[i]);
        if (mag > radius) {
            const double scale = radius / mag;
            h[i] *= scale;
            v[i] *= scale;
        }
    }
}

} // namespace

void SolverConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
    if (!(stop_tol >= 0.0)) throw ParameterError("stop_tol must be non-negative");
    if (record_every == 0) throw ParameterError("record_every must be at least 1");
    if (reweight_every == 0) throw ParameterError("reweight_every must be at least 1");
    if (operator_norm && !(*operator_norm > 0.0))
        throw ParameterError("operator norm estimate must be positive");
}

std::string to_string(StopReason reason) {
    return reason == StopReason::tol_reached ? "tol-reached" : "max-iters";
}

StepSizes resolve_steps(const SolverConfig& cfg, const FanBeamGeometry& g) {
    const double norm =
        cfg.operator_norm ? *cfg.operator_norm : operator_norm(g, cfg.norm_iters, cfg.norm_seed);
    StepSizes steps{cfg.sigma, cfg.tau, norm};
    if (!(steps.sigma > 0.0)) steps.sigma = 1.0 / norm;
    if (!(steps.tau > 0.0)) steps.tau = 1.0 / norm;
    if (steps.sigma * steps.tau * norm * norm > 1.0 + 1e-6)
        throw ParameterError("sigma * tau * ||M||^2 must not exceed 1");
    return steps;
}

double objective(const Image& x, const Sinogram& y, const WeightField& w, double lambda) {
    const FanBeamGeometry& g = y.geometry;
    g.check_image(x);
    y.check();
    check_weights(w, g);
    std::vector<double> kx(g.num_measurements());
    project_into(x.data, g, kx);
    double data_term = 0.0;
    for (std::size_t i = 0; i < kx.size(); ++i) {
        const double r = kx[i] - y.data[i];
        data_term += r * r;
    }
    const GradientField f = grad(x);
    double tv = 0.0;
    for (std::size_t i = 0; i < f.pixels(); ++i)
        tv += w.data[i] * std::hypot(f.horizontal[i], f.vertical[i]);
    return data_term + lambda * tv;
}

std::vector<double> prox_fidelity_dual(std::span<const double> p, double sigma, const Sinogram& y) {
    if (p.size() != y.data.size()) throw ConfigError("prox_fidelity_dual: size mismatch");
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    std::vector<double> out(p.size());
    const double inv = 1.0 / (1.0 + sigma);
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = (p[i] - sigma * y.data[i]) * inv;
    return out;
}

std::vector<double> prox_tv_dual(std::span<const double> q, double sigma, const WeightField& w,
                                 double lambda, const GradientField& dx_bar) {
    const std::size_t n = w.size();
    if (q.size() != 2 * n || dx_bar.pixels() != n)
        throw ConfigError("prox_tv_dual: size mismatch");
    std::vector<double> out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = q[i] + sigma * dx_bar.horizontal[i];
        out[n + i] = q[n + i] + sigma * dx_bar.vertical[i];
    }
    std::span<double> all(out);
    project_dual_disks(all.subspan(0, n), all.subspan(n, n), w.data, lambda);
    return out;
}

ReconstructionResult chambolle_pock(const Sinogram& y, const WeightField& initial_weights,
                                    const SolverConfig& cfg, const Image& x0,
                                    const SolveOptions& options) {
    cfg.validate();
    y.check();
    const FanBeamGeometry& g = y.geometry;
    g.validate();
    g.check_image(x0);
    check_weights(initial_weights, g);
    if (options.reference) g.check_image(*options.reference);
    if (!x0.all_finite()) throw ConfigError("initial image has non-finite entries");

    const StepSizes steps = resolve_steps(cfg, g);
    const double sigma = steps.sigma;
    const double tau = steps.tau;
    const double lambda = cfg.lambda;
    const std::size_t n = g.num_pixels();
    const std::size_t m = g.num_measurements();
    const std::size_t width = g.image_width;
    const std::size_t height = g.image_height;

    ReconstructionResult result;
    result.sigma = sigma;
    result.tau = tau;
    result.operator_norm = steps.operator_norm;

    WeightField w = initial_weights;
    Image x = x0;
    DualState state;
    if (options.warm_start) {
        state = *options.warm_start;
        if (state.dual_fid.size() != m || state.dual_grad.size() != 2 * n)
            throw ConfigError("warm start dual state does not match the problem size");
        g.check_image(state.x_bar);
    } else {
        state.dual_fid.assign(m, 0.0);
        state.dual_grad.assign(2 * n, 0.0);
        state.x_bar = x0;
    }

    std::vector<double> kx(m);
    std::vector<double> primal_step(n);
    std::vector<double> dtq(n);
    std::vector<double> x_prev(n);
    std::span<double> qh(state.dual_grad.data(), n);
    std::span<double> qv(state.dual_grad.data() + n, n);
    std::span<const double> cqh(qh);
    std::span<const double> cqv(qv);

    auto record = [&](std::size_t iteration) {
        result.objective_history.push_back({iteration, objective(x, y, w, 2.0 * lambda)});
        if (options.reference)
            result.metric_history.push_back({iteration, evaluate(x, *options.reference)});
    };
    record(0);

    const double fid_scale = 1.0 / (1.0 + sigma);
    std::size_t k = 0;
    while (k < cfg.max_iters) {
        if (options.reweight && k % cfg.reweight_every == 0) {
            w = options.reweight(x);
            check_weights(w, g);
            result.reweight_iterations.push_back(k);
        }

        // Dual ascent on the fidelity term.
        project_into(state.x_bar.data, g, kx);
        for (std::size_t i = 0; i < m; ++i)
            state.dual_fid[i] = (state.dual_fid[i] + sigma * (kx[i] - y.data[i])) * fid_scale;

        // Dual ascent on the weighted TV term (reuse dtq/primal_step as scratch).
        grad_into(state.x_bar.data, width, height, dtq, primal_step);
        for (std::size_t i = 0; i < n; ++i) {
            qh[i] += sigma * dtq[i];
            qv[i] += sigma * primal_step[i];
        }
        project_dual_disks(qh, qv, w.data, lambda);

        // Primal descent with projection onto x >= 0.
        backproject_into(state.dual_fid, g, primal_step);
        grad_adjoint_into(cqh, cqv, width, height, dtq);
        x_prev = x.data;
        double diff2 = 0.0;
        double norm2 = 0.0;
        bool finite = true;
        bool nonnegative = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = x_prev[i] - tau * (primal_step[i] + dtq[i]);
            const double projected = v > 0.0 ? v : (std::isnan(v) ? v : 0.0);
            finite = finite && std::isfinite(projected);
            nonnegative = nonnegative && projected >= 0.0;
            x.data[i] = projected;
            const double d = projected - x_prev[i];
            diff2 += d * d;
            norm2 += projected * projected;
        }
        ++k;
        if (!finite) throw NumericalDivergenceError(k);

        // Inertia.
        for (std::size_t i = 0; i < n; ++i)
            state.x_bar.data[i] = x.data[i] + cfg.beta * (x.data[i] - x_prev[i]);

        if (!nonnegative) ++result.primal_violations;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::hypot(qh[i], qv[i]) > lambda * w.data[i] + kFeasibilitySlack) {
                ++result.dual_violations;
                break;
            }
        }

        const double change =
            norm2 > 0.0 ? std::sqrt(diff2 / norm2) : std::sqrt(diff2);
        const bool converged = change < cfg.stop_tol;
        if (k % cfg.record_every == 0 || converged || k == cfg.max_iters) record(k);
        if (converged) {
            result.stop_reason = StopReason::tol_reached;
            break;
        }
    }

    result.iters_run = k;
    result.image = std::move(x);
    result.dual = std::move(state);
    result.final_weights = std::move(w);
    return result;
}

ReconstructionResult solve_global_tv(const Sinogram& y, double lambda, const SolverConfig& cfg,
                                     const Image& x0, const SolveOptions& options) {
    SolverConfig c = cfg;
    c.lambda = lambda;
    const WeightField unit = WeightField::unit(y.geometry.image_width, y.geometry.image_height);
    return chambolle_pock(y, unit, c, x0, options);
}

Image early_stopped_tv(const Sinogram& y, double lambda, std::size_t k_early,
                       const SolverConfig& cfg, const Image& x0) {
    if (k_early == 0) {
        y.geometry.check_image(x0);
        return x0;
    }
    SolverConfig c = cfg;
    c.max_iters = k_early;
    c.stop_tol = 0.0;
    c.record_every = k_early;
    return solve_global_tv(y, lambda, c, x0).image;
}

ReconstructionResult ir_reweighted_solve(const Sinogram& y, const SolverConfig& cfg,
                                         ReweightRule rule, double eta, double p, const Image& x0,
                                         const SolveOptions& options) {
    SolveOptions opts = options;
    if (rule == ReweightRule::A) {
        opts.reweight = [eta, p](const Image& x) { return ir_update_A(x, eta, p); };
    } else {
        opts.reweight = [eta](const Image& x) { return ir_update_B(x, eta); };
    }
    // Validate parameters up front; the initial field is replaced at k = 0.
    const WeightField initial = opts.reweight(x0);
    return chambolle_pock(y, initial, cfg, x0, opts);
}

} // namespace fewview
