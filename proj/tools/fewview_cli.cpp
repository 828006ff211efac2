#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fewview/csv.hpp"
#include "fewview/errors.hpp"
#include "fewview/fbp.hpp"
#include "fewview/json_io.hpp"
#include "fewview/metrics.hpp"
#include "fewview/pipelines.hpp"
#include "fewview/projector.hpp"
#include "fewview/raster_io.hpp"
#include "fewview/render.hpp"
#include "fewview/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fewview;

namespace {

enum ExitCode : int { ok = 0, internal = 1, config = 2, dependency = 3, divergence = 4 };

struct CommonArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = load_run_config(args.config, args.seed);
    if (!args.out.empty()) cfg.output_dir = args.out;
    fs::create_directories(cfg.output_dir);
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
}

json metrics_json(const MetricsRecord& m) {
    return json{{"re", m.re}, {"psnr", m.psnr}, {"ssim", m.ssim}};
}

void cmd_simulate(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const std::optional<Image> gt = load_ground_truth(cfg);
    if (!gt) throw ConfigError("simulate needs 'phantom' or 'input'");
    const Sinogram clean = project(*gt, cfg.geometry);
    const Sinogram noisy = add_noise(clean, cfg.noise);
    const Image recon = fbp(noisy, cfg.method.filter);

    const fs::path& dir = cfg.output_dir;
    write_image(dir / "gt.f32", *gt);
    write_sinogram(dir / "sinogram_clean.f32", clean);
    write_sinogram(dir / "sinogram_noisy.f32", noisy);
    write_image(dir / "fbp.f32", recon);

    std::vector<double> e(clean.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = noisy.data[i] - clean.data[i];
    const double ratio = linalg::norm2(e) / linalg::norm2(clean.data);
    std::cout << "noise_ratio " << format_number(ratio) << "\n";
    std::cout << "fbp " << (metrics_csv(evaluate(recon, *gt)));
}

void cmd_reconstruct(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const std::optional<Image> gt = load_ground_truth(cfg);
    const Sinogram y = cfg.sinogram ? read_sinogram(*cfg.sinogram)
                                    : simulate_measurement(*gt, cfg.geometry, cfg.noise);

    RunOptions options;
    options.artifact_dir = cfg.output_dir;
    options.initial_guess = cfg.initial;
    options.compare_with_gt_weights = cfg.compare_with_gt_weights;
    const PipelineReport report = reconstruct(cfg.method, y, gt ? &*gt : nullptr, cfg.solver, options);

    json summary{{"method", to_string(report.method.kind)},
                 {"lambda", report.method.lambda},
                 {"iterations", report.result.iters_run},
                 {"stop_reason", to_string(report.result.stop_reason)},
                 {"operator_norm", report.result.operator_norm},
                 {"sigma", report.result.sigma},
                 {"tau", report.result.tau},
                 {"dual_violations", report.result.dual_violations},
                 {"primal_violations", report.result.primal_violations}};
    if (!report.result.objective_history.empty())
        summary["final_objective"] = report.result.objective_history.back().value;
    if (gt) {
        summary["final_metrics"] = metrics_json(report.final_metrics);
        write_text(cfg.output_dir / "metrics.csv", metrics_csv(report.final_metrics));
    }
    if (report.x_tilde_metrics) summary["x_tilde_metrics"] = metrics_json(*report.x_tilde_metrics);
    if (report.re_vs_gt_weights_solution)
        summary["re_vs_gt_weights_solution"] = *report.re_vs_gt_weights_solution;
    write_text(cfg.output_dir / "report.json", summary.dump(2) + "\n");

    std::cout << to_string(report.method.kind) << ": " << report.result.iters_run
              << " iterations (" << to_string(report.result.stop_reason) << ")\n";
    if (gt) std::cout << metrics_csv(report.final_metrics);
}

void cmd_evaluate(const std::string& x_path, const std::string& ref_path, const std::string& out) {
    const Image x = read_image(x_path);
    const Image ref = read_image(ref_path);
    if (!x.same_shape(ref))
        throw ConfigError("image " + std::to_string(x.width) + "x" + std::to_string(x.height) +
                          " does not match reference " + std::to_string(ref.width) + "x" +
                          std::to_string(ref.height));
    const std::string text = metrics_csv(evaluate(x, ref));
    std::cout << text;
    if (!out.empty()) write_text(out, text);
}

void cmd_stability(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const std::optional<Image> gt = load_ground_truth(cfg);
    if (!gt) throw ConfigError("stability needs 'phantom' or 'input'");
    const StabilityConfig& s = cfg.stability;
    if (s.values.empty()) throw ConfigError("stability.values is empty");

    std::vector<SweepPoint> points;
    if (s.kind == SweepKind::noise) {
        points = noise_stability_sweep(*gt, cfg.geometry, cfg.method, s.values, cfg.solver,
                                       cfg.noise.seed);
    } else {
        const auto side =
            s.kind == SweepKind::image ? PerturbationSide::image : PerturbationSide::gradient;
        points = reconstructor_stability_sweep(*gt, cfg.geometry, cfg.noise, s.values, cfg.method,
                                               cfg.solver, side, s.seed);
    }
    std::string text = s.kind == SweepKind::noise ? "nu,distance\n" : "epsilon,distance\n";
    for (const SweepPoint& p : points)
        text += format_number(p.value) + "," + format_number(p.distance) + "\n";
    write_text(cfg.output_dir / "stability.csv", text);
    std::cout << text;
}

void cmd_render(const std::string& raster, std::string out, const std::string& history,
                const std::string& curve) {
    const RasterFile r = read_raster(raster);
    Image x(r.width, r.height, r.pixel_size);
    for (std::size_t i = 0; i < x.size(); ++i) x.data[i] = r.payload[i];
    if (out.empty()) out = fs::path(raster).replace_extension(".png").string();
    write_png(out, x);
    std::cout << "wrote " << out << "\n";
    if (!history.empty()) {
        const std::string target =
            curve.empty() ? fs::path(out).replace_extension(".re.csv").string() : curve;
        write_re_curve(history, target);
        std::cout << "wrote " << target << "\n";
    }
}

void cmd_presets(const std::string& out) {
    json all = json::array();
    for (const Preset& p : presets()) {
        all.push_back({{"name", p.name},
                       {"num_views", p.num_views},
                       {"nu", p.nu},
                       {"lambda_wl1", p.lambda_wl1},
                       {"eta", p.eta},
                       {"p", p.p},
                       {"lambda_tv", p.lambda_tv},
                       {"lambda_irl1_a", p.lambda_irl1_a},
                       {"eta_irl1_a", p.eta_irl1_a},
                       {"lambda_irl1_b", p.lambda_irl1_b},
                       {"eta_irl1_b", p.eta_irl1_b}});
    }
    const std::string text = all.dump(2) + "\n";
    if (out.empty()) std::cout << text;
    else write_text(out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-view fan-beam CT reconstruction with adaptive weighted TV"};
    app.require_subcommand(1);

    CommonArgs common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config, "JSON run configuration")->required();
        sub->add_option("--seed", common.seed, "Replace every seed of the run");
        sub->add_option("-o,--out", common.out, "Output directory (overrides output_dir)");
    };

    auto* simulate = app.add_subcommand("simulate", "Simulate GT, sinograms and FBP image");
    add_common(simulate);
    auto* recon = app.add_subcommand("reconstruct", "Run one reconstruction method");
    add_common(recon);
    auto* stability = app.add_subcommand("stability", "Run a stability sweep");
    add_common(stability);

    std::string x_path, ref_path, eval_out;
    std::optional<std::uint64_t> unused_seed;
    auto* eval = app.add_subcommand("evaluate", "RE, PSNR and SSIM of an image against a reference");
    eval->add_option("image", x_path)->required();
    eval->add_option("reference", ref_path)->required();
    eval->add_option("-o,--out", eval_out, "Also write the CSV here");
    eval->add_option("--seed", unused_seed, "Accepted for uniformity; evaluation is deterministic");

    std::string raster, png_out, history, curve;
    auto* render = app.add_subcommand("render", "Export a raster as an 8-bit PNG");
    render->add_option("raster", raster)->required();
    render->add_option("-o,--out", png_out, "PNG path (default: raster path with .png)");
    render->add_option("--history", history, "Solver history CSV to turn into an RE curve");
    render->add_option("--curve", curve, "RE curve CSV path");
    render->add_option("--seed", unused_seed, "Accepted for uniformity; rendering is deterministic");

    std::string presets_out;
    auto* list = app.add_subcommand("presets", "Print the named parameter presets as JSON");
    list->add_option("-o,--out", presets_out);
    list->add_option("--seed", unused_seed, "Accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::config;
    }

    try {
        if (*simulate) cmd_simulate(common);
        else if (*recon) cmd_reconstruct(common);
        else if (*stability) cmd_stability(common);
        else if (*eval) cmd_evaluate(x_path, ref_path, eval_out);
        else if (*render) cmd_render(raster, png_out, history, curve);
        else if (*list) cmd_presets(presets_out);
    } catch (const DependencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::dependency;
    } catch (const NumericalDivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::divergence;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::config;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::config;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::internal;
    }
    return ExitCode::ok;
}
