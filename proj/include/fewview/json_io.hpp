#pragma once

#include <json.hpp>

#include "fewview/geometry.hpp"
#include "fewview/phantom.hpp"

namespace fewview {

nlohmann::json geometry_to_json(const FanBeamGeometry& g);

/// Full geometry (as written by geometry_to_json), or a short form
/// {"image_size", "num_views", "pixel_size"?} expanded with
/// FanBeamGeometry::standard; explicit fields override the defaults.
FanBeamGeometry geometry_from_json(const nlohmann::json& j);

nlohmann::json phantom_to_json(const PhantomSpec& spec);
/// Explicit spec {"size", "background", "elements": [...]}, or a generator
/// {"preset": "synthetic" | "coule", "size", "seed"?, "count"?}.
PhantomSpec phantom_from_json(const nlohmann::json& j);

} // namespace fewview
