#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fewview/raster_io.hpp"

using namespace fewview;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "fewview_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args) {
    const fs::path out = workdir() / "stdout.txt";
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = std::string(FEWVIEW_CLI) + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

json base_config() {
    return {{"phantom", {{"preset", "synthetic"}, {"size", 32}}},
            {"geometry", {{"num_views", 20}}},
            {"noise", {{"nu", 0.02}, {"seed", 5}}},
            {"method", {{"kind", "gt-wl1"}, {"lambda", 0.01}}},
            {"solver", {{"max_iters", 40}, {"record_every", 10}}}};
}

bool same_files(const fs::path& a, const fs::path& b) {
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const fs::path other = b / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
        ++count;
    }
    return count > 0;
}

} // namespace

TEST_CASE("simulate writes rasters and reports the noise ratio") {
    const fs::path cfg = write_config("sim.json", base_config());
    const Run r = run("simulate -c " + cfg.string() + " -o " + (workdir() / "sim").string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("noise_ratio 0.02") != std::string::npos);
    for (const char* f : {"gt.f32", "sinogram_clean.f32", "sinogram_noisy.f32", "fbp.f32"})
        CHECK(fs::exists(workdir() / "sim" / f));
}

TEST_CASE("zero noise gives byte-identical sinograms") {
    json j = base_config();
    j["noise"]["nu"] = 0.0;
    const fs::path cfg = write_config("sim0.json", j);
    REQUIRE(run("simulate -c " + cfg.string() + " -o " + (workdir() / "sim0").string()).code == 0);
    CHECK(slurp(workdir() / "sim0" / "sinogram_clean.f32") ==
          slurp(workdir() / "sim0" / "sinogram_noisy.f32"));
}

TEST_CASE("seeded runs are byte-identical") {
    const fs::path cfg = write_config("det.json", base_config());
    for (const char* cmd : {"simulate", "reconstruct"}) {
        const std::string a = (workdir() / (std::string(cmd) + "_a")).string();
        const std::string b = (workdir() / (std::string(cmd) + "_b")).string();
        REQUIRE(run(std::string(cmd) + " -c " + cfg.string() + " --seed 7 -o " + a).code == 0);
        REQUIRE(run(std::string(cmd) + " -c " + cfg.string() + " --seed 7 -o " + b).code == 0);
        CHECK(same_files(a, b));
    }
    const std::string c = (workdir() / "simulate_c").string();
    REQUIRE(run("simulate -c " + cfg.string() + " --seed 8 -o " + c).code == 0);
    CHECK(slurp(workdir() / "simulate_a" / "sinogram_noisy.f32") !=
          slurp(workdir() / "simulate_c" / "sinogram_noisy.f32"));
}

TEST_CASE("reconstruct writes image, weights and history") {
    const fs::path cfg = write_config("rec.json", base_config());
    const fs::path out = workdir() / "rec";
    const Run r = run("reconstruct -c " + cfg.string() + " -o " + out.string());
    REQUIRE(r.code == 0);
    for (const char* f : {"final.f32", "weights.f32", "history.csv", "x_tilde.f32", "metrics.csv", "report.json"})
        CHECK(fs::exists(out / f));
    const Image w = read_image(out / "weights.f32");
    CHECK(w.max() == 1.0);
    CHECK(w.data[0] == 1.0);
    CHECK(slurp(out / "history.csv").rfind("iteration,objective,re,psnr,ssim\n", 0) == 0);
}

TEST_CASE("exit codes") {
    json bad = base_config();
    bad["method"]["kind"] = "mystery";
    CHECK(run("reconstruct -c " + write_config("bad.json", bad).string()).code == 2);

    json missing = base_config();
    missing["method"] = {{"kind", "fbp-net-wl1"}, {"intermediate", "no_such_export.f32"}};
    const Run dep = run("reconstruct -c " + write_config("dep.json", missing).string() + " -o " +
                        (workdir() / "dep").string());
    CHECK(dep.code == 3);
    CHECK(dep.err.find("no_such_export.f32") != std::string::npos);

    json diverge = base_config();
    diverge["solver"] = {{"max_iters", 5000}, {"operator_norm", 1e-3}};
    CHECK(run("reconstruct -c " + write_config("div.json", diverge).string() + " -o " +
              (workdir() / "div").string())
              .code == 4);

    CHECK(run("reconstruct").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("reconstruct -c " + (workdir() / "nope.json").string()).code == 3);
}

TEST_CASE("evaluate prints CSV metrics") {
    const fs::path gt = workdir() / "sim" / "gt.f32";
    REQUIRE(fs::exists(gt));
    const Run same = run("evaluate " + gt.string() + " " + gt.string() + " -o " +
                         (workdir() / "eval.csv").string());
    REQUIRE(same.code == 0);
    CHECK(same.out == "re,psnr,ssim\n0,100,1\n");
    CHECK(slurp(workdir() / "eval.csv") == same.out);

    write_image(workdir() / "small.f32", Image(16, 16, 1.0, 0.5));
    CHECK(run("evaluate " + (workdir() / "small.f32").string() + " " + gt.string()).code == 2);
}

TEST_CASE("stability sweeps") {
    json j = base_config();
    j["stability"] = {{"kind", "noise"}, {"values", {0.0}}};
    const fs::path out = workdir() / "stab0";
    const Run r = run("stability -c " + write_config("stab0.json", j).string() + " -o " + out.string());
    REQUIRE(r.code == 0);
    CHECK(slurp(out / "stability.csv") == "nu,distance\n0,0\n");

    j["stability"] = {{"kind", "gradient"}, {"values", {0.2, 0.1, 0.0}}};
    const fs::path cfg = write_config("stab1.json", j);
    REQUIRE(run("stability -c " + cfg.string() + " -o " + (workdir() / "stab1").string()).code == 0);
    REQUIRE(run("stability -c " + cfg.string() + " -o " + (workdir() / "stab2").string()).code == 0);
    const std::string csv = slurp(workdir() / "stab1" / "stability.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv == slurp(workdir() / "stab2" / "stability.csv"));
}

TEST_CASE("render exports PNG and RE curve idempotently") {
    write_image(workdir() / "flat.f32", Image(8, 8, 1.0, 3.0));
    const fs::path png = workdir() / "flat.png";
    REQUIRE(run("render " + (workdir() / "flat.f32").string()).code == 0);
    const std::string first = slurp(png);
    CHECK(first.substr(1, 3) == "PNG");
    REQUIRE(run("render " + (workdir() / "flat.f32").string()).code == 0);
    CHECK(slurp(png) == first);

    const fs::path rec = workdir() / "rec";
    REQUIRE(fs::exists(rec / "history.csv"));
    REQUIRE(run("render " + (rec / "final.f32").string() + " --history " + (rec / "history.csv").string() +
                " --curve " + (workdir() / "curve.csv").string())
                .code == 0);
    CHECK(slurp(workdir() / "curve.csv").rfind("iteration,re\n0,1\n", 0) == 0);
}

TEST_CASE("presets command matches the shipped file") {
    const Run r = run("presets");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out) == json::parse(slurp(fs::path(FEWVIEW_PRESETS) / "presets.json")));
}
