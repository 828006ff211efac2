#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "fewview/geometry.hpp"
#include "fewview/noise.hpp"
#include "fewview/phantom.hpp"
#include "fewview/pipelines.hpp"
#include "fewview/solver.hpp"

namespace fewview {

enum class SweepKind { noise, image, gradient };

struct StabilityConfig {
    SweepKind kind = SweepKind::noise;
    std::vector<double> values;
    std::uint64_t seed = 0;
};

/// Everything one CLI command needs. Paths are resolved against the directory
/// of the config file.
struct RunConfig {
    std::optional<PhantomSpec> phantom;
    /// Ground-truth image raster, used instead of `phantom`.
    std::optional<std::filesystem::path> input;
    /// Existing measurement; when set, `reconstruct` skips simulation.
    std::optional<std::filesystem::path> sinogram;
    FanBeamGeometry geometry;
    NoiseSpec noise;
    ReconMethod method;
    SolverConfig solver;
    InitialGuess initial = InitialGuess::zero;
    bool compare_with_gt_weights = false;
    StabilityConfig stability;
    std::filesystem::path output_dir = "out";
};

/// `seed`, when given, replaces every seed of the run: noise draw, phantom
/// generator, power iteration start and sweep direction.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                           std::optional<std::uint64_t> seed = std::nullopt);
RunConfig load_run_config(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed = std::nullopt);

/// Ground truth of the run, or nullopt when only a sinogram is given.
std::optional<Image> load_ground_truth(const RunConfig& cfg);

} // namespace fewview
