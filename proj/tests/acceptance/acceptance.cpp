// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fewview/gradient.hpp"
#include "fewview/metrics.hpp"
#include "fewview/operator_norm.hpp"
#include "fewview/phantom.hpp"
#include "fewview/pipelines.hpp"
#include "fewview/projector.hpp"
#include "fewview/solver.hpp"
#include "fewview/weights.hpp"
#include "oracles.hpp"

using namespace fewview;
namespace fs = std::filesystem;
using fewview::testing::random_vector;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t g_violations = 0;
std::vector<SweepPoint> g_noise_sweep;
std::size_t g_solves = 0;

void tally(const ReconstructionResult& r) {
    g_violations += r.dual_violations + r.primal_violations;
    ++g_solves;
}

void tally(const std::vector<SweepPoint>& points) {
    for (const SweepPoint& p : points) {
        g_violations += p.violations;
        ++g_solves;
    }
}

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

int g_failures = 0;

void check(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && seconds > limit_seconds) {
        o.pass = false;
        o.detail += "; over time budget " + fmt(limit_seconds) + " s";
    }
    if (!o.pass) ++g_failures;
    std::printf("%s  %s | %s | %.1f s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                seconds);
    std::fflush(stdout);
}

SolverConfig budget(std::size_t iters, std::size_t record_every) {
    SolverConfig c;
    c.max_iters = iters;
    c.record_every = record_every;
    c.stop_tol = 0.0;
    return c;
}

/// Non-increasing within a multiplicative slack.
bool decreasing_with_slack(const std::vector<SweepPoint>& pts, double slack) {
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].distance > (1.0 + slack) * pts[i - 1].distance) return false;
    return true;
}

std::string list(const std::vector<SweepPoint>& pts) {
    std::string s;
    for (const SweepPoint& p : pts) s += (s.empty() ? "" : ", ") + fmt(p.value) + ":" + fmt(p.distance);
    return s;
}

Outcome adjoint_suite() {
    double worst_k = 0.0, worst_d = 0.0;
    for (std::size_t views : {45u, 90u}) {
        const FanBeamGeometry g = FanBeamGeometry::standard(128, views, 4.0 / 128);
        for (std::uint64_t s = 0; s < 100; ++s) {
            Image x(128, 128, g.pixel_size);
            x.data = random_vector(x.size(), 2 * s);
            Sinogram y(g);
            y.data = random_vector(y.size(), 2 * s + 1);
            const double a = linalg::dot(project(x, g).data, y.data);
            const double b = linalg::dot(x.data, backproject(y, g).data);
            worst_k = std::max(worst_k, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));

            GradientField f(128, 128);
            f.horizontal = random_vector(f.pixels(), 7 * s + 2);
            f.vertical = random_vector(f.pixels(), 7 * s + 3);
            const GradientField dx = grad(x);
            const double c = linalg::dot(dx.horizontal, f.horizontal) + linalg::dot(dx.vertical, f.vertical);
            const double d = linalg::dot(x.data, grad_adjoint(f).data);
            worst_d = std::max(worst_d, std::abs(c - d) / std::max(std::abs(c), std::abs(d)));
        }
    }
    return {worst_k < 1e-6 && worst_d < 1e-10,
            "max K mismatch " + fmt(worst_k) + " (< 1e-6), max D mismatch " + fmt(worst_d) +
                " (< 1e-10), 2 geometries x 100 pairs at 128x128"};
}

Outcome operator_norm_check() {
    const FanBeamGeometry g = FanBeamGeometry::standard(16, 10, 4.0 / 16);
    const std::size_t n = g.num_pixels(), m = g.num_measurements();
    const std::vector<double> k = materialize_dense(g);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(m + 2 * n), Eigen::Index(n));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) a(Eigen::Index(r), Eigen::Index(c)) = k[r * n + c];
    for (std::size_t c = 0; c < n; ++c) {
        Image e(16, 16, g.pixel_size);
        e.data[c] = 1.0;
        const GradientField d = grad(e);
        for (std::size_t i = 0; i < n; ++i) {
            a(Eigen::Index(m + i), Eigen::Index(c)) = d.horizontal[i];
            a(Eigen::Index(m + n + i), Eigen::Index(c)) = d.vertical[i];
        }
    }
    const double svd = Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues()(0);
    const double est = operator_norm(g);
    const double rel = std::abs(est - svd) / svd;
    return {rel < 1e-3, "power iteration " + fmt(est, "%.8g") + " vs dense SVD " + fmt(svd, "%.8g") +
                            ", relative gap " + fmt(rel) + " (< 1e-3)"};
}

Outcome weight_law() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t bad = 0;
    for (int t = 0; t < 10000; ++t) {
        const double eta = std::pow(10.0, -6.0 + 6.0 * u(rng));
        const double mag = t % 10 == 0 ? 0.0 : eta * std::pow(10.0, -4.0 + 8.0 * u(rng));
        const double p = 0.999 * u(rng);
        const double w = power_law_weight(mag, eta, p);
        const double w2 = power_law_weight(2.0 * mag + 1e-3 * eta, eta, p);
        if (!(w > 0.0 && w <= 1.0) || (w == 1.0) != (mag == 0.0) || !(w2 < w)) ++bad;
    }
    Image m(1, 1);
    m.data[0] = 0.02 * std::sqrt(3.0);
    const double closed = weights_from_magnitude(m, 0.02, 0.3).data[0];
    const double gap = std::abs(closed - std::pow(0.5, 0.7));
    return {bad == 0 && gap < 1e-12, std::to_string(bad) + " of 10000 triples violate range/unit/monotone; " +
                                         "closed-form gap " + fmt(gap) + " (< 1e-12)"};
}

Outcome prox_correctness() {
    const FanBeamGeometry g = FanBeamGeometry::standard(8, 4);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ls(-4.0, 3.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        Sinogram y(g);
        y.data = random_vector(y.size(), 2 * t, -5.0, 5.0);
        const std::vector<double> p = random_vector(y.size(), 2 * t + 1, -5.0, 5.0);
        const double sigma = std::pow(10.0, ls(rng));
        const std::vector<double> out = prox_fidelity_dual(p, sigma, y);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double r = (out[i] - p[i]) + sigma * (out[i] + y.data[i]);
            worst = std::max(worst, std::abs(r) / (std::abs(p[i]) + sigma * std::abs(y.data[i]) + 1.0));
        }
    }
    std::size_t outside = 0;
    for (int t = 0; t < 1000; ++t) {
        WeightField w = WeightField::unit(8, 8);
        w.data = random_vector(64, 3 * t, 1e-8, 1.0);
        GradientField d(8, 8);
        d.horizontal = random_vector(64, 3 * t + 1, -4.0, 4.0);
        d.vertical = random_vector(64, 3 * t + 2, -4.0, 4.0);
        const std::vector<double> q = random_vector(128, 5 * t + 7, -3.0, 3.0);
        const double lambda = 0.01 + 0.1 * (t % 10);
        const std::vector<double> out = prox_tv_dual(q, 0.3, w, lambda, d);
        for (std::size_t i = 0; i < 64; ++i)
            if (std::hypot(out[i], out[64 + i]) > lambda * w.data[i] * (1.0 + 1e-15)) ++outside;
    }
    GradientField zero(1, 1);
    const std::vector<double> r = prox_tv_dual(std::vector<double>{3.0, 4.0}, 1.0, WeightField::unit(1, 1), 1.0, zero);
    const double gap = std::max(std::abs(r[0] - 0.6), std::abs(r[1] - 0.8));
    return {worst < 1e-12 && outside == 0 && gap < 1e-12,
            "fidelity residual " + fmt(worst) + " (< 1e-12) over 1000 cases; " + std::to_string(outside) +
                " dual pairs outside their disk; 3-4-5 gap " + fmt(gap)};
}

Outcome solver_oracle() {
    const FanBeamGeometry g = FanBeamGeometry::standard(32, 20, 4.0 / 32);
    const Image gt = fewview::testing::disk_image(32, 0.6, g.pixel_size);
    const Sinogram y = project(gt, g);
    const double lambda = 0.01;
    const ReconstructionResult run = solve_global_tv(y, lambda, budget(1000, 100), g.blank_image());
    const ReconstructionResult ref = solve_global_tv(y, lambda, budget(10000, 1000), g.blank_image());
    tally(run);
    tally(ref);
    const double j = run.objective_history.back().value;
    const double jref = ref.objective_history.back().value;
    const double obj_gap = std::abs(j - jref) / jref;
    const Image oracle = fewview::testing::smoothed_tv_oracle(
        y, lambda, run.operator_norm * run.operator_norm, {1e-2, 1e-3, 1e-4, 1e-5}, 2500);
    const double re = relative_error(run.image, oracle);
    return {obj_gap < 1e-4 && re < 1e-3, "objective gap to 10x budget " + fmt(obj_gap) +
                                             " (< 1e-4), RE to smoothed-TV oracle " + fmt(re) +
                                             " (< 1e-3)"};
}

Outcome method_ordering() {
    const std::size_t side = 256;
    const FanBeamGeometry g = FanBeamGeometry::standard(side, 45, 4.0 / double(side));
    const Image gt = make_phantom(synthetic_phantom_spec(side), g.pixel_size);
    SolverConfig cfg = budget(500, 100);
    cfg.operator_norm = operator_norm(g);
    bool pass = true;
    std::string detail;
    for (const char* name : {"synthetic-nu005", "synthetic-nu02"}) {
        const Preset& p = find_preset(name);
        const NoiseSpec noise{p.nu, 1};
        const PipelineReport a = run_method(preset_method(p, MethodKind::gt_wl1), gt, g, noise, cfg);
        const PipelineReport b = run_method(preset_method(p, MethodKind::fbp_wl1), gt, g, noise, cfg);
        const PipelineReport c = run_method(preset_method(p, MethodKind::global_tv), gt, g, noise, cfg);
        for (const auto* r : {&a, &b, &c}) tally(r->result);
        const bool ok = a.final_metrics.ssim >= 0.99 && a.final_metrics.re < b.final_metrics.re &&
                        a.final_metrics.re < c.final_metrics.re;
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + std::string("nu ") + fmt(p.nu) + ": GT-Wl1 RE " +
                  fmt(a.final_metrics.re) + " SSIM " + fmt(a.final_metrics.ssim, "%.4f") +
                  ", FBP-Wl1 RE " + fmt(b.final_metrics.re) + ", TV RE " + fmt(c.final_metrics.re);
    }
    return {pass, detail};
}

ReconMethod stability_method() {
    ReconMethod m;
    m.kind = MethodKind::gt_wl1;
    m.lambda = 0.01;
    m.eta = 2e-5;
    m.p = 0.3;
    return m;
}

Outcome noise_stability() {
    const FanBeamGeometry g = FanBeamGeometry::standard(128, 45, 4.0 / 128);
    const Image gt = make_phantom(synthetic_phantom_spec(128), g.pixel_size);
    SolverConfig cfg = budget(1000, 1000);
    cfg.operator_norm = operator_norm(g);
    const std::vector<double> nus{0.02, 0.01, 0.005, 0.0025, 0.0};
    const std::vector<SweepPoint> pts = noise_stability_sweep(gt, g, stability_method(), nus, cfg, 11);
    tally(pts);
    g_noise_sweep = pts;
    const std::vector<SweepPoint> noisy(pts.begin(), pts.end() - 1);
    // Least-squares line through (nu, distance), evaluated at nu = 0.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, dmax = 0;
    for (const SweepPoint& p : noisy) {
        sx += p.value;
        sy += p.distance;
        sxx += p.value * p.value;
        sxy += p.value * p.distance;
        dmax = std::max(dmax, p.distance);
    }
    const double k = double(noisy.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / k;
    const bool pass = decreasing_with_slack(noisy, 0.1) && std::abs(intercept) < 0.5 * dmax;
    return {pass, "distances " + list(pts) + "; extrapolated nu->0 " + fmt(intercept) + " (< " +
                      fmt(0.5 * dmax) + ")"};
}

Outcome noise_sweep_budget() {
    const FanBeamGeometry g = FanBeamGeometry::standard(128, 45, 4.0 / 128);
    const Image gt = make_phantom(synthetic_phantom_spec(128), g.pixel_size);
    SolverConfig cfg = budget(1000, 1000);
    cfg.operator_norm = operator_norm(g);
    const std::vector<double> nus{0.02, 0.01, 0.005, 0.0025, 0.0};
    const std::vector<SweepPoint> a = g_noise_sweep.empty()
                                          ? noise_stability_sweep(gt, g, stability_method(), nus, cfg, 11)
                                          : g_noise_sweep;
    cfg.max_iters *= 2;
    const std::vector<SweepPoint> b = noise_stability_sweep(gt, g, stability_method(), nus, cfg, 11);
    tally(b);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i].distance - b[i].distance) / b[i].distance);
    return {worst < 0.05, "largest relative change " + fmt(worst) + " (< 0.05) when doubling iterations"};
}

Outcome reconstructor_stability() {
    const FanBeamGeometry g = FanBeamGeometry::standard(128, 45, 4.0 / 128);
    const Image gt = make_phantom(synthetic_phantom_spec(128), g.pixel_size);
    SolverConfig cfg = budget(1000, 1000);
    cfg.operator_norm = operator_norm(g);
    const std::vector<double> eps{0.2, 0.1, 0.05, 0.01};
    bool pass = true;
    std::string detail;
    for (auto side : {PerturbationSide::image, PerturbationSide::gradient}) {
        const std::vector<SweepPoint> pts = reconstructor_stability_sweep(
            gt, g, NoiseSpec{0.01, 5}, eps, stability_method(), cfg, side, 21);
        tally(pts);
        pass = pass && decreasing_with_slack(pts, 0.1);
        detail += (detail.empty() ? "" : "; ") +
                  std::string(side == PerturbationSide::image ? "image " : "gradient ") + list(pts);
    }
    return {pass, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / "fewview_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "run.json") << R"({"phantom": {"preset": "coule", "size": 64, "seed": 2},
 "geometry": {"num_views": 45}, "noise": {"nu": 0.01},
 "method": {"kind": "tv-wl1", "lambda": 0.01}, "solver": {"max_iters": 100}})";
    for (const char* tag : {"a", "b"})
        for (const char* cmd : {"simulate", "reconstruct"}) {
            const std::string line = std::string(FEWVIEW_CLI) + " " + cmd + " -c " + (dir / "run.json").string() +
                                     " --seed 13 -o " + (dir / tag).string() + " > /dev/null";
            const int status = std::system(line.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
                return {false, std::string(cmd) + " exited abnormally"};
        }
    std::size_t files = 0, differ = 0;
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        ++files;
        if (slurp(e.path()) != slurp(dir / "b" / e.path().filename())) ++differ;
    }
    return {files > 0 && differ == 0,
            std::to_string(files) + " files compared, " + std::to_string(differ) + " differ"};
}

} // namespace

int main() {
    check("adjoint suite", 30, adjoint_suite);
    check("operator norm vs dense SVD", 10, operator_norm_check);
    check("weight law", 1, weight_law);
    check("prox correctness", 0, prox_correctness);
    check("solver oracle (32x32, 20 views, global TV)", 120, solver_oracle);
    check("method ordering on the synthetic phantom (256x256, 45 views)", 900, method_ordering);
    check("noise stability sweep (128x128)", 900, noise_stability);
    check("[supporting] noise sweep insensitive to solver budget", 0, noise_sweep_budget);
    check("reconstructor stability sweeps (128x128)", 900, reconstructor_stability);
    check("CLI determinism", 0, cli_determinism);
    check("feasibility invariants", 0, [] {
        return Outcome{g_violations == 0, std::to_string(g_violations) + " violations over " +
                                              std::to_string(g_solves) + " solves"};
    });
    std::printf("%s: %d failing\n", g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
    return g_failures == 0 ? 0 : 1;
}
