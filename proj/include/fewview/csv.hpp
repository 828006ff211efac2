#pragma once

#include <filesystem>
#include <string>

#include "fewview/metrics.hpp"
#include "fewview/solver.hpp"

namespace fewview {

/// Shortest round-trip decimal form of `v` ('.' separator, locale independent).
std::string format_number(double v);

/// iteration,objective,re,psnr,ssim; metric cells are empty when the solve had
/// no reference image.
void write_history_csv(const std::filesystem::path& path, const ReconstructionResult& result);

/// re,psnr,ssim header followed by one row.
std::string metrics_csv(const MetricsRecord& m);

} // namespace fewview
