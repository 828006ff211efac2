#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fewview/image.hpp"

namespace fewview {

/// Min-max normalised 8-bit grey levels over the finite entries; a constant
/// image maps to mid-grey (128) and non-finite entries to 0.
std::vector<std::uint8_t> to_gray8(const Image& x);

/// Writes an 8-bit greyscale PNG of `to_gray8(x)`.
void write_png(const std::filesystem::path& path, const Image& x);

/// Copies the (iteration, re) columns of a solver history CSV into a
/// two-column CSV for plotting. Rows without an RE value are skipped.
void write_re_curve(const std::filesystem::path& history_csv, const std::filesystem::path& out_csv);

} // namespace fewview
