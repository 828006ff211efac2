#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fewview/image.hpp"

namespace fewview {

enum class ShapeKind { disk, ellipse, rectangle, cross };

/// One constant-intensity primitive. Coordinates are normalised so the image
/// spans [-1, 1] on both axes with y pointing up.
///
/// - disk: radius `rx`.
/// - ellipse: semi-axes `rx`, `ry`, rotated by `rotation_deg`.
/// - rectangle: half-extents `rx`, `ry`, rotated.
/// - cross: two bars with half-lengths `rx` (horizontal) and `ry` (vertical)
///   and full width `thickness`, rotated.
struct Shape {
    ShapeKind kind = ShapeKind::disk;
    double cx = 0.0;
    double cy = 0.0;
    double rx = 0.5;
    double ry = 0.5;
    double rotation_deg = 0.0;
    double thickness = 0.05;
    double intensity = 1.0;
};

/// Painter's-order composition: later shapes overwrite earlier ones.
struct PhantomSpec {
    std::size_t size = 128;
    double background = 0.0;
    std::vector<Shape> elements;

    void validate() const;
};

/// Rasterise with pixel-centre sampling.
Image make_phantom(const PhantomSpec& spec, double pixel_size = 1.0);

/// Test object with flat regions (soft-tissue body, round masses), a
/// high-density insert and a thin cross.
PhantomSpec synthetic_phantom_spec(std::size_t size);

/// Seeded set of overlapping ellipses with uniform intensities inside a
/// circular support.
PhantomSpec coule_like_spec(std::size_t size, std::uint64_t seed, std::size_t count = 8);

ShapeKind shape_kind_from_string(const std::string& name);
std::string to_string(ShapeKind kind);

} // namespace fewview
