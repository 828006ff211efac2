#include "fewview/raster_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fewview/errors.hpp"
#include "fewview/json_io.hpp"

namespace fewview {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

std::vector<float> to_float(const std::vector<double>& v) {
    std::vector<float> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double d) { return static_cast<float>(d); });
    return out;
}

std::vector<double> to_double(const std::vector<float>& v) {
    return std::vector<double>(v.begin(), v.end());
}

} // namespace

std::string to_string(RasterKind kind) {
    switch (kind) {
    case RasterKind::image: return "image";
    case RasterKind::sinogram: return "sinogram";
    case RasterKind::weights: return "weights";
    }
    return "image";
}

RasterKind raster_kind_from_string(const std::string& name) {
    if (name == "image") return RasterKind::image;
    if (name == "sinogram") return RasterKind::sinogram;
    if (name == "weights") return RasterKind::weights;
    throw ConfigError("unknown raster kind '" + name + "'");
}

fs::path sidecar_path(const fs::path& payload) {
    fs::path p = payload;
    p.replace_extension(".json");
    return p;
}

void write_raster(const fs::path& payload_path, const RasterFile& raster) {
    if (raster.payload.size() != raster.width * raster.height)
        throw ConfigError("raster payload does not match width*height");
    if (payload_path.extension() == ".json")
        throw ConfigError("raster payload path must not use the .json extension");
    if (payload_path.has_parent_path()) fs::create_directories(payload_path.parent_path());

    json header{{"width", raster.width},
                {"height", raster.height},
                {"dtype", "f32le"},
                {"kind", to_string(raster.kind)},
                {"pixel_size", raster.pixel_size}};
    if (raster.geometry) header["geometry"] = geometry_to_json(*raster.geometry);

    std::ofstream out(payload_path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + payload_path.string());
    for (float f : raster.payload) {
        const std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(f));
        out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!out) throw ConfigError("failed writing " + payload_path.string());

    std::ofstream side(sidecar_path(payload_path), std::ios::trunc);
    if (!side) throw ConfigError("cannot write " + sidecar_path(payload_path).string());
    side << header.dump(2) << '\n';
}

RasterFile read_raster(const fs::path& payload_path) {
    const fs::path side = sidecar_path(payload_path);
    if (!fs::exists(payload_path)) throw DependencyError(payload_path.string());
    if (!fs::exists(side)) throw DependencyError(side.string());

    json header;
    try {
        std::ifstream in(side);
        header = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("malformed raster header " + side.string() + ": " + e.what());
    }

    RasterFile raster;
    try {
        if (header.at("dtype").get<std::string>() != "f32le")
            throw ConfigError("unsupported raster dtype in " + side.string());
        raster.width = header.at("width").get<std::size_t>();
        raster.height = header.at("height").get<std::size_t>();
        raster.kind = raster_kind_from_string(header.at("kind").get<std::string>());
        raster.pixel_size = header.value("pixel_size", 1.0);
        if (header.contains("geometry")) raster.geometry = geometry_from_json(header.at("geometry"));
    } catch (const json::exception& e) {
        throw ConfigError("malformed raster header " + side.string() + ": " + e.what());
    }

    const std::uintmax_t bytes = fs::file_size(payload_path);
    if (bytes != raster.width * raster.height * sizeof(float))
        throw ConfigError("raster payload " + payload_path.string() + " has " +
                          std::to_string(bytes) + " bytes, header implies " +
                          std::to_string(raster.width * raster.height * sizeof(float)));

    std::ifstream in(payload_path, std::ios::binary);
    raster.payload.resize(raster.width * raster.height);
    for (float& f : raster.payload) {
        std::uint32_t bits = 0;
        in.read(reinterpret_cast<char*>(&bits), sizeof bits);
        f = std::bit_cast<float>(to_little_endian(bits));
    }
    if (!in) throw ConfigError("failed reading " + payload_path.string());
    return raster;
}

void write_image(const fs::path& path, const Image& x, RasterKind kind) {
    RasterFile r;
    r.kind = kind;
    r.width = x.width;
    r.height = x.height;
    r.pixel_size = x.pixel_size;
    r.payload = to_float(x.data);
    write_raster(path, r);
}

Image read_image(const fs::path& path) {
    RasterFile r = read_raster(path);
    if (r.kind == RasterKind::sinogram)
        throw ConfigError(path.string() + " holds a sinogram, expected an image");
    Image x(r.width, r.height, r.pixel_size);
    x.data = to_double(r.payload);
    return x;
}

void write_weights(const fs::path& path, const WeightField& w, double pixel_size) {
    write_image(path, w.to_image(pixel_size), RasterKind::weights);
}

void write_sinogram(const fs::path& path, const Sinogram& y) {
    y.check();
    RasterFile r;
    r.kind = RasterKind::sinogram;
    r.width = y.geometry.num_detectors;
    r.height = y.geometry.num_views();
    r.pixel_size = y.geometry.pixel_size;
    r.geometry = y.geometry;
    r.payload = to_float(y.data);
    write_raster(path, r);
}

Sinogram read_sinogram(const fs::path& path) {
    RasterFile r = read_raster(path);
    if (r.kind != RasterKind::sinogram || !r.geometry)
        throw ConfigError(path.string() + " is not a sinogram raster with geometry");
    if (r.width != r.geometry->num_detectors || r.height != r.geometry->num_views())
        throw ConfigError(path.string() + ": raster dimensions disagree with its geometry");
    Sinogram y(*r.geometry);
    y.data = to_double(r.payload);
    return y;
}

std::vector<Image> load_image_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DependencyError(dir.string());
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".f32") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    std::vector<Image> images;
    for (const auto& p : paths) {
        RasterFile r = read_raster(p);
        if (r.kind != RasterKind::image) continue;
        Image x(r.width, r.height, r.pixel_size);
        x.data = to_double(r.payload);
        images.push_back(std::move(x));
    }
    return images;
}

} // namespace fewview
