#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fewview/geometry.hpp"
#include "fewview/image.hpp"
#include "fewview/weights.hpp"

namespace fewview {

enum class RasterKind { image, sinogram, weights };
std::string to_string(RasterKind kind);
RasterKind raster_kind_from_string(const std::string& name);

/// Raw little-endian float32 payload plus a JSON sidecar with the same stem.
///
/// Sidecar fields: width, height, dtype ("f32le"), kind, pixel_size and, for
/// sinograms, the full geometry. Images are row-major; sinograms are
/// view-major (height = number of views, width = detector bins).
struct RasterFile {
    RasterKind kind = RasterKind::image;
    std::size_t width = 0;
    std::size_t height = 0;
    double pixel_size = 1.0;
    std::optional<FanBeamGeometry> geometry;
    std::vector<float> payload;
};

/// Sidecar path for a payload path: `foo.f32` -> `foo.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& payload);

void write_raster(const std::filesystem::path& payload_path, const RasterFile& raster);
/// Throws ConfigError on malformed or inconsistent files and DependencyError
/// when either file is missing.
RasterFile read_raster(const std::filesystem::path& payload_path);

void write_image(const std::filesystem::path& path, const Image& x,
                 RasterKind kind = RasterKind::image);
Image read_image(const std::filesystem::path& path);

void write_weights(const std::filesystem::path& path, const WeightField& w, double pixel_size);

void write_sinogram(const std::filesystem::path& path, const Sinogram& y);
Sinogram read_sinogram(const std::filesystem::path& path);

/// All image rasters (`*.f32` with an image sidecar) in `dir`, sorted by name.
std::vector<Image> load_image_directory(const std::filesystem::path& dir);

} // namespace fewview
