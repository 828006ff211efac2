#include "fewview/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "fewview/errors.hpp"

namespace fewview {

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_history_csv(const std::filesystem::path& path, const ReconstructionResult& result) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "iteration,objective,re,psnr,ssim\n";
    std::size_t mi = 0;
    for (const ObjectiveSample& o : result.objective_history) {
        out << o.iteration << ',' << format_number(o.value);
        while (mi < result.metric_history.size() &&
               result.metric_history[mi].iteration < o.iteration)
            ++mi;
        if (mi < result.metric_history.size() &&
            result.metric_history[mi].iteration == o.iteration) {
            const MetricsRecord& m = result.metric_history[mi].metrics;
            out << ',' << format_number(m.re) << ',' << format_number(m.psnr) << ','
                << format_number(m.ssim);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
}

std::string metrics_csv(const MetricsRecord& m) {
    return "re,psnr,ssim\n" + format_number(m.re) + ',' + format_number(m.psnr) + ',' +
           format_number(m.ssim) + '\n';
}

} // namespace fewview
