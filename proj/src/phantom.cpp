#include "fewview/phantom.hpp"

#include <cmath>
#include <numbers>

#include "fewview/errors.hpp"
#include "fewview/random.hpp"

namespace fewview {
namespace {

bool contains(const Shape& s, double u, double v) {
    const double du = u - s.cx;
    const double dv = v - s.cy;
    if (s.kind == ShapeKind::disk) return du * du + dv * dv <= s.rx * s.rx;

    const double a = s.rotation_deg * std::numbers::pi / 180.0;
    const double lx = std::cos(a) * du + std::sin(a) * dv;
    const double ly = -std::sin(a) * du + std::cos(a) * dv;
    switch (s.kind) {
    case ShapeKind::ellipse:
        return (lx * lx) / (s.rx * s.rx) + (ly * ly) / (s.ry * s.ry) <= 1.0;
    case ShapeKind::rectangle:
        return std::abs(lx) <= s.rx && std::abs(ly) <= s.ry;
    case ShapeKind::cross: {
        const double half = 0.5 * s.thickness;
        return (std::abs(lx) <= s.rx && std::abs(ly) <= half) ||
               (std::abs(ly) <= s.ry && std::abs(lx) <= half);
    }
    case ShapeKind::disk:
        break;
    }
    return false;
}

} // namespace

void PhantomSpec::validate() const {
    if (size == 0) throw ConfigError("phantom: size must be positive");
    if (elements.empty()) throw ConfigError("phantom: at least one element is required");
    if (!(background >= 0.0 && background <= 1.0))
        throw ConfigError("phantom: background must lie in [0, 1]");
    for (const Shape& s : elements) {
        if (!(s.intensity >= 0.0 && s.intensity <= 1.0))
            throw ConfigError("phantom: element intensity must lie in [0, 1]");
        if (!(s.rx > 0.0) || (s.kind != ShapeKind::disk && !(s.ry > 0.0)))
            throw ConfigError("phantom: element extents must be positive");
        if (s.kind == ShapeKind::cross && !(s.thickness > 0.0))
            throw ConfigError("phantom: cross thickness must be positive");
    }
}

Image make_phantom(const PhantomSpec& spec, double pixel_size) {
    spec.validate();
    const std::size_t n = spec.size;
    Image img(n, n, pixel_size, spec.background);
    const double scale = 2.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double v = 1.0 - (static_cast<double>(r) + 0.5) * scale;
        for (std::size_t c = 0; c < n; ++c) {
            const double u = (static_cast<double>(c) + 0.5) * scale - 1.0;
            for (const Shape& s : spec.elements)
                if (contains(s, u, v)) img(r, c) = s.intensity;
        }
    }
    return img;
}

PhantomSpec synthetic_phantom_spec(std::size_t size) {
    PhantomSpec spec;
    spec.size = size;
    // Thin structures must stay at least two pixels wide at the target size.
    const double px = 2.0 / static_cast<double>(size);
    auto add = [&spec](ShapeKind k, double cx, double cy, double rx, double ry, double rot,
                       double intensity, double thickness = 0.05) {
        spec.elements.push_back({k, cx, cy, rx, ry, rot, thickness, intensity});
    };
    add(ShapeKind::ellipse, 0.0, 0.0, 0.85, 0.70, 0.0, 0.20);
    add(ShapeKind::ellipse, -0.35, 0.25, 0.22, 0.15, 30.0, 0.45);
    add(ShapeKind::disk, 0.30, 0.30, 0.12, 0.12, 0.0, 0.60);
    add(ShapeKind::disk, -0.05, -0.40, 0.07, 0.07, 0.0, 0.55);
    add(ShapeKind::rectangle, -0.50, -0.20, 0.08, 0.05, 15.0, 1.00);
    add(ShapeKind::disk, 0.05, 0.05, 0.045, 0.045, 0.0, 0.90);
    add(ShapeKind::cross, 0.40, -0.30, 0.16, 0.16, 0.0, 0.75, std::max(2.0 * px, 0.02));
    add(ShapeKind::rectangle, 0.50, 0.00, 0.10, std::max(px, 0.01), 0.0, 0.35);
    return spec;
}

PhantomSpec coule_like_spec(std::size_t size, std::uint64_t seed, std::size_t count) {
    Engine engine(seed);
    PhantomSpec spec;
    spec.size = size;
    spec.elements.push_back({ShapeKind::disk, 0.0, 0.0, 0.9, 0.9, 0.0, 0.05, 0.10});
    for (std::size_t k = 0; k < count; ++k) {
        Shape s;
        s.kind = ShapeKind::ellipse;
        const double radius = 0.6 * uniform01(engine);
        const double angle = 2.0 * std::numbers::pi * uniform01(engine);
        s.cx = radius * std::cos(angle);
        s.cy = radius * std::sin(angle);
        s.rx = 0.05 + 0.25 * uniform01(engine);
        s.ry = 0.05 + 0.25 * uniform01(engine);
        s.rotation_deg = 180.0 * uniform01(engine);
        s.intensity = 0.2 + 0.8 * uniform01(engine);
        spec.elements.push_back(s);
    }
    return spec;
}

ShapeKind shape_kind_from_string(const std::string& name) {
    if (name == "disk") return ShapeKind::disk;
    if (name == "ellipse") return ShapeKind::ellipse;
    if (name == "rectangle") return ShapeKind::rectangle;
    if (name == "cross") return ShapeKind::cross;
    throw ConfigError("unknown phantom element kind '" + name + "'");
}

std::string to_string(ShapeKind kind) {
    switch (kind) {
    case ShapeKind::disk: return "disk";
    case ShapeKind::ellipse: return "ellipse";
    case ShapeKind::rectangle: return "rectangle";
    case ShapeKind::cross: return "cross";
    }
    return "disk";
}

} // namespace fewview
