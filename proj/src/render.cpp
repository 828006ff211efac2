#include "fewview/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "fewview/errors.hpp"

namespace fewview {

std::vector<std::uint8_t> to_gray8(const Image& x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : x.data) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<std::uint8_t> out(x.data.size(), 0);
    if (!(hi >= lo)) return out;
    const double half_range = hi / 2 - lo / 2;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double v = x.data[i];
        if (!std::isfinite(v)) continue;
        if (!(half_range > 0.0)) {
            out[i] = 128;
            continue;
        }
        const double t = std::clamp((v / 2 - lo / 2) / half_range, 0.0, 1.0);
        out[i] = static_cast<std::uint8_t>(std::lround(255.0 * t));
    }
    return out;
}

void write_png(const std::filesystem::path& path, const Image& x) {
    if (x.width == 0 || x.height == 0) throw ConfigError("cannot render an empty image");
    const std::vector<std::uint8_t> gray = to_gray8(x);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());

    std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!file) throw ConfigError("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw ConfigError("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ConfigError("libpng failed writing " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(x.width), static_cast<png_uint_32>(x.height),
                 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < x.height; ++r)
        png_write_row(png, const_cast<png_bytep>(gray.data() + r * x.width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_re_curve(const std::filesystem::path& history_csv,
                    const std::filesystem::path& out_csv) {
    std::ifstream in(history_csv);
    if (!in) throw DependencyError(history_csv.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty history file " + history_csv.string());

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    int it_col = -1;
    int re_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "iteration") it_col = static_cast<int>(i);
        if (header[i] == "re") re_col = static_cast<int>(i);
    }
    if (it_col < 0 || re_col < 0)
        throw ConfigError(history_csv.string() + " lacks iteration/re columns");

    if (out_csv.has_parent_path()) std::filesystem::create_directories(out_csv.parent_path());
    std::ofstream out(out_csv, std::ios::trunc);
    out << "iteration,re\n";
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (static_cast<int>(cells.size()) <= re_col || cells[re_col].empty()) continue;
        out << cells[it_col] << ',' << cells[re_col] << '\n';
    }
}

} // namespace fewview
