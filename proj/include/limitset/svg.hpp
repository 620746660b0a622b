#pragma once

#include <optional>
#include <string>

#include "limitset/cone.hpp"

namespace limitset {

// Chamber-slice figure for n = 3: walls, rays, shaded hull, optional marked
// vector. Fixed chart: slice point x maps to x w1 + (1 - x) w2 with w1, w2 unit
// wall directions 60 degrees apart. Throws DimensionError for n != 3.
std::string cone_svg(const ConeEstimate& est, const std::optional<AVector>& marked = std::nullopt,
                     const std::string& title = "");

}  // namespace limitset
