#pragma once

#include <string>

#include "fewview/geometry.hpp"
#include "fewview/image.hpp"

namespace fewview {

struct FbpFilter {
    enum class Kind { ram_lak, hann };

    Kind kind = Kind::ram_lak;
    /// Fraction of the Nyquist frequency kept by the filter, in (0, 1].
    double cutoff = 1.0;

    void validate() const;
};

FbpFilter::Kind fbp_filter_kind_from_string(const std::string& name);
std::string to_string(FbpFilter::Kind kind);

/// Fan-beam filtered back projection for a flat detector.
///
/// Detector samples are cosine weighted on the virtual detector through the
/// rotation centre, ramp filtered per view (discrete Ram-Lak kernel applied in
/// the frequency domain with zero padding to a power of two), back projected
/// with the 1/U^2 distance weight and scaled by pi / N_v. The raw output may
/// be negative unless `clamp_nonnegative` is set.
Image fbp(const Sinogram& y, const FbpFilter& filter = {}, bool clamp_nonnegative = false);

} // namespace fewview
