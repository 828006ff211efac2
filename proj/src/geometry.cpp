#include "fewview/geometry.hpp"

#include <cmath>
#include <string>

#include "fewview/errors.hpp"

namespace fewview {

double FanBeamGeometry::half_diagonal() const noexcept {
    const double w = static_cast<double>(image_width) * pixel_size;
    const double h = static_cast<double>(image_height) * pixel_size;
    return 0.5 * std::hypot(w, h);
}

void FanBeamGeometry::validate() const {
    if (image_width == 0 || image_height == 0) throw ConfigError("geometry: empty image grid");
    if (!(pixel_size > 0.0)) throw ConfigError("geometry: pixel_size must be positive");
    if (angles_deg.empty()) throw ConfigError("geometry: no views");
    if (num_detectors == 0) throw ConfigError("geometry: no detector bins");
    if (!(detector_spacing > 0.0)) throw ConfigError("geometry: detector_spacing must be positive");
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double a = angles_deg[i];
        if (!(a >= 0.0 && a < 180.0))
            throw ConfigError("geometry: angle " + std::to_string(a) + " outside [0, 180)");
        if (i > 0 && !(a > angles_deg[i - 1]))
            throw ConfigError("geometry: angles must be strictly increasing");
    }
    if (!(source_to_center > half_diagonal()))
        throw ConfigError("geometry: source must lie outside the image");
    if (!(source_to_detector > source_to_center))
        throw ConfigError("geometry: detector must lie beyond the rotation centre");
}

void FanBeamGeometry::check_image(const Image& x) const {
    if (x.width != image_width || x.height != image_height || x.data.size() != num_pixels())
        throw ConfigError("image " + std::to_string(x.width) + "x" + std::to_string(x.height) +
                          " does not match geometry grid " + std::to_string(image_width) + "x" +
                          std::to_string(image_height));
}

Image FanBeamGeometry::blank_image() const { return Image(image_width, image_height, pixel_size); }

FanBeamGeometry FanBeamGeometry::standard(std::size_t image_side, std::size_t num_views,
                                          double pixel_size) {
    FanBeamGeometry g;
    g.image_width = image_side;
    g.image_height = image_side;
    g.pixel_size = pixel_size;
    g.angles_deg = uniform_angles(num_views);

    const double diagonal = 2.0 * g.half_diagonal();
    g.source_to_center = 2.0 * diagonal;
    g.source_to_detector = 4.0 * diagonal;
    g.num_detectors = 2 * image_side;

    // Shadow of the circumscribed circle on the detector, with a small margin.
    const double r = g.half_diagonal();
    const double half_fan = std::asin(r / g.source_to_center);
    const double half_width = g.source_to_detector * std::tan(half_fan);
    g.detector_spacing = 1.02 * 2.0 * half_width / static_cast<double>(g.num_detectors);
    return g;
}

std::vector<double> uniform_angles(std::size_t count) {
    std::vector<double> angles(count);
    for (std::size_t k = 0; k < count; ++k)
        angles[k] = 180.0 * static_cast<double>(k) / static_cast<double>(count);
    return angles;
}

void Sinogram::check() const {
    if (data.size() != geometry.num_measurements())
        throw ConfigError("sinogram length " + std::to_string(data.size()) +
                          " does not match geometry (" +
                          std::to_string(geometry.num_measurements()) + ")");
}

} // namespace fewview
