#pragma once

#include <cstddef>
#include <vector>

#include "fewview/image.hpp"

namespace fewview {

/// Flat-detector fan-beam scanner with the reconstruction grid it images.
///
/// The grid is centred on the rotation axis. For a view at angle beta the
/// source sits at -source_to_center * (cos beta, sin beta) and the detector is
/// perpendicular to the central ray at distance source_to_detector from the
/// source. Detector bins are centred symmetrically about the central ray.
struct FanBeamGeometry {
    std::vector<double> angles_deg;
    std::size_t num_detectors = 0;
    double detector_spacing = 1.0;
    double source_to_center = 0.0;
    double source_to_detector = 0.0;

    std::size_t image_width = 0;
    std::size_t image_height = 0;
    double pixel_size = 1.0;

    std::size_t num_views() const noexcept { return angles_deg.size(); }
    std::size_t num_measurements() const noexcept { return angles_deg.size() * num_detectors; }
    std::size_t num_pixels() const noexcept { return image_width * image_height; }

    /// Half of the physical image diagonal.
    double half_diagonal() const noexcept;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;

    /// Throws ConfigError unless `x` has the grid dimensions of this geometry.
    void check_image(const Image& x) const;

    /// Zero image matching the grid.
    Image blank_image() const;

    /// Default scanner for a square grid: source at 2x the image diagonal,
    /// detector at 4x, 2*side detector bins spanning the magnified field of view.
    static FanBeamGeometry standard(std::size_t image_side, std::size_t num_views,
                                    double pixel_size = 1.0);
};

/// `count` angles k*180/count, k = 0..count-1.
std::vector<double> uniform_angles(std::size_t count);

/// Measurements ordered view-major, then detector.
struct Sinogram {
    FanBeamGeometry geometry;
    std::vector<double> data;

    Sinogram() = default;
    explicit Sinogram(FanBeamGeometry g)
        : geometry(std::move(g)), data(geometry.num_measurements(), 0.0) {}

    std::size_t size() const noexcept { return data.size(); }
    double& at(std::size_t view, std::size_t det) { return data[view * geometry.num_detectors + det]; }
    double at(std::size_t view, std::size_t det) const {
        return data[view * geometry.num_detectors + det];
    }
    void check() const;
};

} // namespace fewview
