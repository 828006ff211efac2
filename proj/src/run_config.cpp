#include "fewview/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "fewview/errors.hpp"
#include "fewview/json_io.hpp"
#include "fewview/raster_io.hpp"

namespace fewview {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void reject_unknown_keys(const json& j, std::string_view section,
                         std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(section) + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (std::string_view a : allowed) known = known || item.key() == a;
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + std::string(section));
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

ReconMethod parse_method(const json& j, const fs::path& base) {
    reject_unknown_keys(j, "method",
                        {"kind", "preset", "lambda", "eta", "p", "k_early", "intermediate_lambda",
                         "reweight_every", "intermediate", "filter", "cutoff"});
    const MethodKind kind = method_kind_from_string(j.value("kind", std::string("gt-wl1")));
    ReconMethod m;
    if (j.contains("preset")) {
        m = preset_method(find_preset(j.at("preset").get<std::string>()), kind);
    } else {
        m.kind = kind;
    }
    m.lambda = j.value("lambda", m.lambda);
    m.eta = j.value("eta", m.eta);
    m.p = j.value("p", m.p);
    m.k_early = j.value("k_early", m.k_early);
    if (j.contains("intermediate_lambda"))
        m.intermediate_lambda = j.at("intermediate_lambda").get<double>();
    m.reweight_every = j.value("reweight_every", m.reweight_every);
    if (j.contains("intermediate"))
        m.intermediate = resolve(base, j.at("intermediate").get<std::string>());
    if (j.contains("filter"))
        m.filter.kind = fbp_filter_kind_from_string(j.at("filter").get<std::string>());
    m.filter.cutoff = j.value("cutoff", m.filter.cutoff);
    return m;
}

SolverConfig parse_solver(const json& j) {
    reject_unknown_keys(j, "solver",
                        {"max_iters", "record_every", "stop_tol", "beta", "sigma", "tau",
                         "reweight_every", "operator_norm", "norm_iters", "norm_seed"});
    SolverConfig c;
    c.max_iters = j.value("max_iters", c.max_iters);
    c.record_every = j.value("record_every", c.record_every);
    c.stop_tol = j.value("stop_tol", c.stop_tol);
    c.beta = j.value("beta", c.beta);
    c.sigma = j.value("sigma", c.sigma);
    c.tau = j.value("tau", c.tau);
    c.reweight_every = j.value("reweight_every", c.reweight_every);
    if (j.contains("operator_norm")) c.operator_norm = j.at("operator_norm").get<double>();
    c.norm_iters = j.value("norm_iters", c.norm_iters);
    c.norm_seed = j.value("norm_seed", c.norm_seed);
    c.validate();
    return c;
}

StabilityConfig parse_stability(const json& j) {
    reject_unknown_keys(j, "stability", {"kind", "values", "seed"});
    StabilityConfig s;
    const auto kind = j.value("kind", std::string("noise"));
    if (kind == "noise") s.kind = SweepKind::noise;
    else if (kind == "image") s.kind = SweepKind::image;
    else if (kind == "gradient") s.kind = SweepKind::gradient;
    else throw ConfigError("unknown stability kind '" + kind + "'");
    s.values = j.at("values").get<std::vector<double>>();
    s.seed = j.value("seed", s.seed);
    return s;
}

} // namespace

RunConfig parse_run_config(const json& j_in, const fs::path& base_dir,
                           std::optional<std::uint64_t> seed) {
    try {
        json j = j_in;
        if (seed) {
            if (j.contains("phantom") && j["phantom"].contains("preset")) j["phantom"]["seed"] = *seed;
            j["noise"]["seed"] = *seed;
            if (!j.contains("solver")) j["solver"] = json::object();
            j["solver"]["norm_seed"] = *seed;
            if (j.contains("stability")) j["stability"]["seed"] = *seed;
        }
        reject_unknown_keys(j, "config",
                            {"phantom", "input", "sinogram", "geometry", "noise", "method",
                             "solver", "initial", "compare_with_gt_weights", "stability",
                             "output_dir"});
        RunConfig cfg;
        const int sources = int(j.contains("phantom")) + int(j.contains("input"));
        if (sources > 1) throw ConfigError("give either 'phantom' or 'input', not both");
        if (j.contains("phantom")) cfg.phantom = phantom_from_json(j.at("phantom"));
        if (j.contains("input")) cfg.input = resolve(base_dir, j.at("input").get<std::string>());
        if (j.contains("sinogram"))
            cfg.sinogram = resolve(base_dir, j.at("sinogram").get<std::string>());
        if (!cfg.phantom && !cfg.input && !cfg.sinogram)
            throw ConfigError("config needs 'phantom', 'input' or 'sinogram'");

        for (const auto& p : {cfg.input, cfg.sinogram})
            if (p && !fs::exists(*p)) throw DependencyError(p->string());

        if (j.contains("geometry")) {
            json gj = j.at("geometry");
            if (cfg.phantom && !gj.contains("image_size") && !gj.contains("image_width"))
                gj["image_size"] = cfg.phantom->size;
            cfg.geometry = geometry_from_json(gj);
        } else if (cfg.sinogram) {
            cfg.geometry = read_sinogram(*cfg.sinogram).geometry;
        } else if (cfg.phantom) {
            cfg.geometry = geometry_from_json(json{{"image_size", cfg.phantom->size}});
        } else {
            const RasterFile r = read_raster(*cfg.input);
            if (r.width != r.height)
                throw ConfigError("non-square input needs an explicit geometry");
            cfg.geometry = geometry_from_json(json{{"image_size", r.width}});
        }

        if (j.contains("noise")) {
            const json& n = j.at("noise");
            reject_unknown_keys(n, "noise", {"nu", "seed"});
            cfg.noise.nu = n.value("nu", 0.0);
            cfg.noise.seed = n.value("seed", std::uint64_t{0});
            if (!(cfg.noise.nu >= 0.0)) throw ParameterError("noise level must be non-negative");
        }
        if (j.contains("method")) cfg.method = parse_method(j.at("method"), base_dir);
        if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"));
        const auto initial = j.value("initial", std::string("zero"));
        if (initial == "zero") cfg.initial = InitialGuess::zero;
        else if (initial == "fbp") cfg.initial = InitialGuess::fbp;
        else throw ConfigError("unknown initial guess '" + initial + "'");
        cfg.compare_with_gt_weights = j.value("compare_with_gt_weights", false);
        if (j.contains("stability")) cfg.stability = parse_stability(j.at("stability"));
        if (j.contains("output_dir"))
            cfg.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
        else
            cfg.output_dir = base_dir / "out";
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

RunConfig load_run_config(const fs::path& path, std::optional<std::uint64_t> seed) {
    if (!fs::exists(path)) throw DependencyError(path.string());
    std::ifstream in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_run_config(j, path.parent_path().empty() ? fs::path(".") : path.parent_path(),
                            seed);
}

std::optional<Image> load_ground_truth(const RunConfig& cfg) {
    if (cfg.phantom) return make_phantom(*cfg.phantom, cfg.geometry.pixel_size);
    if (cfg.input) {
        Image x = read_image(*cfg.input);
        cfg.geometry.check_image(x);
        x.pixel_size = cfg.geometry.pixel_size;
        return x;
    }
    return std::nullopt;
}

} // namespace fewview
