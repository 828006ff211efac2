#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "fewview/errors.hpp"
#include "fewview/phantom.hpp"
#include "fewview/pipelines.hpp"
#include "fewview/raster_io.hpp"

using namespace fewview;
namespace fs = std::filesystem;

namespace {

struct Setup {
    FanBeamGeometry g = FanBeamGeometry::standard(64, 45, 4.0 / 64);
    Image gt = make_phantom(synthetic_phantom_spec(64), 4.0 / 64);
    NoiseSpec noise{0.01, 1};
    SolverConfig cfg = [] {
        SolverConfig c;
        c.max_iters = 150;
        c.record_every = 50;
        c.stop_tol = 0.0;
        return c;
    }();
};

ReconMethod method(MethodKind kind, double lambda = 0.01) {
    ReconMethod m;
    m.kind = kind;
    m.lambda = lambda;
    return m;
}

const fs::path kFixture = fs::path(FEWVIEW_FIXTURES) / "net_export_64.f32";

} // namespace

TEST_CASE("method names round trip") {
    for (auto k : {MethodKind::global_tv, MethodKind::gt_wl1, MethodKind::fbp_wl1, MethodKind::tv_wl1,
                   MethodKind::fbp_net_wl1, MethodKind::fbp_gnet_wl1, MethodKind::irl1_a,
                   MethodKind::irl1_b})
        CHECK(method_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(method_kind_from_string("wl1"), ConfigError);
}

TEST_CASE("gt-wl1 uses the ground truth as intermediate") {
    Setup s;
    RunOptions opts;
    opts.compare_with_gt_weights = true;
    const PipelineReport r = run_method(method(MethodKind::gt_wl1), s.gt, s.g, s.noise, s.cfg, opts);
    REQUIRE(r.x_tilde_metrics);
    CHECK(r.x_tilde_metrics->re == 0.0);
    CHECK(r.x_tilde_metrics->psnr == 100.0);
    CHECK(r.x_tilde_metrics->ssim == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.re_vs_gt_weights_solution);
    CHECK(*r.re_vs_gt_weights_solution == 0.0);
    CHECK(r.final_metrics.re < 0.1);
}

TEST_CASE("intermediate metrics exist only for intermediate-based methods") {
    Setup s;
    CHECK_FALSE(run_method(method(MethodKind::global_tv), s.gt, s.g, s.noise, s.cfg).x_tilde_metrics);
    ReconMethod ir = method(MethodKind::irl1_a);
    ir.eta = 2e-3;
    ir.p = 0.0;
    CHECK_FALSE(run_method(ir, s.gt, s.g, s.noise, s.cfg).x_tilde_metrics);
    CHECK(run_method(method(MethodKind::tv_wl1), s.gt, s.g, s.noise, s.cfg).x_tilde_metrics);
    CHECK(run_method(method(MethodKind::fbp_wl1), s.gt, s.g, s.noise, s.cfg).x_tilde_metrics);
}

TEST_CASE("fbp-wl1 with an injected ground truth reproduces gt-wl1 bitwise") {
    Setup s;
    const PipelineReport gt_run = run_method(method(MethodKind::gt_wl1), s.gt, s.g, s.noise, s.cfg);
    RunOptions opts;
    opts.x_tilde_override = &s.gt;
    const PipelineReport fbp_run = run_method(method(MethodKind::fbp_wl1), s.gt, s.g, s.noise, s.cfg, opts);
    CHECK(fbp_run.result.image.data == gt_run.result.image.data);
    CHECK(fbp_run.weights.data == gt_run.weights.data);
}

TEST_CASE("network methods read an exported intermediate") {
    Setup s;
    ReconMethod m = method(MethodKind::fbp_net_wl1);
    m.intermediate = kFixture;
    const PipelineReport r = run_method(m, s.gt, s.g, s.noise, s.cfg);
    REQUIRE(r.x_tilde);
    CHECK(r.x_tilde->data == read_image(kFixture).data);
    CHECK(r.x_tilde_metrics->re < 0.05);

    m.kind = MethodKind::fbp_gnet_wl1;
    m.intermediate = fs::path(FEWVIEW_FIXTURES) / "absent.f32";
    try {
        run_method(m, s.gt, s.g, s.noise, s.cfg);
        FAIL("expected a dependency error");
    } catch (const DependencyError& e) {
        CHECK(e.path().find("absent.f32") != std::string::npos);
    }
    m.intermediate.clear();
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("runs are deterministic and emit every artifact") {
    Setup s;
    const fs::path dir = fs::temp_directory_path() / "fewview_test_pipelines";
    fs::remove_all(dir);
    RunOptions opts;
    opts.artifact_dir = dir;
    const PipelineReport a = run_method(method(MethodKind::tv_wl1), s.gt, s.g, s.noise, s.cfg, opts);
    const PipelineReport b = run_method(method(MethodKind::tv_wl1), s.gt, s.g, s.noise, s.cfg);
    CHECK(a.result.image.data == b.result.image.data);
    CHECK(a.final_metrics.re == b.final_metrics.re);
    for (const char* f : {"x_tilde.f32", "final.f32", "weights.f32", "history.csv"})
        CHECK(fs::exists(dir / f));
    CHECK(a.artifacts.size() == 4);
    CHECK(read_image(dir / "weights.f32").max() <= 1.0);
}

TEST_CASE("noise sweep") {
    Setup s;
    const std::vector<double> only_zero{0.0};
    const auto single = noise_stability_sweep(s.gt, s.g, method(MethodKind::gt_wl1), only_zero, s.cfg, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].distance == 0.0);

    const std::vector<double> nus{0.02, 0.005, 0.0};
    const auto sweep = noise_stability_sweep(s.gt, s.g, method(MethodKind::fbp_wl1), nus, s.cfg, 1);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[2].distance == 0.0);
    CHECK(sweep[0].distance > sweep[1].distance);

    const std::vector<double> unordered{0.01, 0.02, 0.0};
    CHECK_THROWS_AS(noise_stability_sweep(s.gt, s.g, method(MethodKind::gt_wl1), unordered, s.cfg, 1),
                    ConfigError);
    const std::vector<double> open_ended{0.02, 0.01};
    CHECK_THROWS_AS(noise_stability_sweep(s.gt, s.g, method(MethodKind::gt_wl1), open_ended, s.cfg, 1),
                    ConfigError);
    CHECK_THROWS_AS(noise_stability_sweep(s.gt, s.g, method(MethodKind::irl1_b), nus, s.cfg, 1),
                    ConfigError);
}

TEST_CASE("reconstructor sweep") {
    Setup s;
    const std::vector<double> eps{0.1, 0.0};
    for (auto side : {PerturbationSide::image, PerturbationSide::gradient}) {
        const auto sweep = reconstructor_stability_sweep(s.gt, s.g, s.noise, eps,
                                                         method(MethodKind::gt_wl1), s.cfg, side, 3);
        REQUIRE(sweep.size() == 2);
        CHECK(sweep[0].distance > 0.0);
        CHECK(sweep[1].distance == 0.0);
    }
}

TEST_CASE("presets") {
    CHECK(presets().size() == 6);
    const Preset& c = find_preset("coule-g90-nu03");
    CHECK(c.num_views == 90);
    CHECK(c.lambda_irl1_b == 120.0);
    CHECK_THROWS_AS(find_preset("none"), ConfigError);

    const ReconMethod tv = preset_method(c, MethodKind::global_tv);
    CHECK(tv.lambda == c.lambda_tv);
    const ReconMethod ia = preset_method(c, MethodKind::irl1_a);
    CHECK(ia.eta == c.eta_irl1_a);
    const ReconMethod w = preset_method(c, MethodKind::fbp_wl1);
    CHECK(w.lambda == c.lambda_wl1);
    CHECK(w.p == c.p);

    std::ifstream in(fs::path(FEWVIEW_PRESETS) / "presets.json");
    REQUIRE(in);
    const nlohmann::json shipped = nlohmann::json::parse(in);
    REQUIRE(shipped.size() == presets().size());
    for (std::size_t i = 0; i < presets().size(); ++i) {
        const Preset& p = presets()[i];
        CHECK(shipped[i].at("name") == p.name);
        CHECK(shipped[i].at("lambda_wl1") == p.lambda_wl1);
        CHECK(shipped[i].at("lambda_tv") == p.lambda_tv);
        CHECK(shipped[i].at("nu") == p.nu);
        CHECK(shipped[i].at("eta") == p.eta);
    }
}

TEST_CASE("method checks") {
    ReconMethod m;
    m.lambda = 0.0;
    CHECK_THROWS_AS(m.validate(), ParameterError);
    m = ReconMethod{};
    m.p = 1.0;
    CHECK_THROWS_AS(m.validate(), ParameterError);
    Setup s;
    const Image wrong(32, 32);
    CHECK_THROWS_AS(run_method(method(MethodKind::gt_wl1), wrong, s.g, s.noise, s.cfg), ConfigError);
}
