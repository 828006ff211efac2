#include "fewview/json_io.hpp"

#include "fewview/errors.hpp"

namespace fewview {

using nlohmann::json;

json geometry_to_json(const FanBeamGeometry& g) {
    return json{{"angles_deg", g.angles_deg},
                {"num_detectors", g.num_detectors},
                {"detector_spacing", g.detector_spacing},
                {"source_to_center", g.source_to_center},
                {"source_to_detector", g.source_to_detector},
                {"image_width", g.image_width},
                {"image_height", g.image_height},
                {"pixel_size", g.pixel_size}};
}

FanBeamGeometry geometry_from_json(const json& j) {
    try {
        FanBeamGeometry g;
        if (j.contains("image_size")) {
            const auto side = j.at("image_size").get<std::size_t>();
            const double default_pixel = 4.0 / static_cast<double>(side);
            g = FanBeamGeometry::standard(side, j.value("num_views", std::size_t{45}),
                                          j.value("pixel_size", default_pixel));
        }
        if (j.contains("angles_deg")) g.angles_deg = j.at("angles_deg").get<std::vector<double>>();
        g.num_detectors = j.value("num_detectors", g.num_detectors);
        g.detector_spacing = j.value("detector_spacing", g.detector_spacing);
        g.source_to_center = j.value("source_to_center", g.source_to_center);
        g.source_to_detector = j.value("source_to_detector", g.source_to_detector);
        g.image_width = j.value("image_width", g.image_width);
        g.image_height = j.value("image_height", g.image_height);
        g.pixel_size = j.value("pixel_size", g.pixel_size);
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed geometry: ") + e.what());
    }
}

json phantom_to_json(const PhantomSpec& spec) {
    json elements = json::array();
    for (const Shape& s : spec.elements) {
        elements.push_back({{"kind", to_string(s.kind)},
                            {"center", {s.cx, s.cy}},
                            {"radii", {s.rx, s.ry}},
                            {"rotation_deg", s.rotation_deg},
                            {"thickness", s.thickness},
                            {"intensity", s.intensity}});
    }
    return json{{"size", spec.size}, {"background", spec.background}, {"elements", elements}};
}

PhantomSpec phantom_from_json(const json& j) {
    try {
        if (j.contains("preset")) {
            const auto preset = j.at("preset").get<std::string>();
            const auto size = j.value("size", std::size_t{128});
            if (preset == "synthetic") return synthetic_phantom_spec(size);
            if (preset == "coule")
                return coule_like_spec(size, j.value("seed", std::uint64_t{0}),
                                       j.value("count", std::size_t{8}));
            throw ConfigError("unknown phantom preset '" + preset + "'");
        }
        PhantomSpec spec;
        spec.size = j.at("size").get<std::size_t>();
        spec.background = j.value("background", 0.0);
        for (const json& e : j.at("elements")) {
            Shape s;
            s.kind = shape_kind_from_string(e.at("kind").get<std::string>());
            const auto c = e.at("center").get<std::vector<double>>();
            if (c.size() != 2) throw ConfigError("phantom element center needs two values");
            s.cx = c[0];
            s.cy = c[1];
            if (e.contains("radius")) {
                s.rx = s.ry = e.at("radius").get<double>();
            } else {
                const auto r = e.at("radii").get<std::vector<double>>();
                if (r.size() != 2) throw ConfigError("phantom element radii needs two values");
                s.rx = r[0];
                s.ry = r[1];
            }
            s.rotation_deg = e.value("rotation_deg", 0.0);
            s.thickness = e.value("thickness", s.thickness);
            s.intensity = e.at("intensity").get<double>();
            spec.elements.push_back(s);
        }
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed phantom spec: ") + e.what());
    }
}

} // namespace fewview
