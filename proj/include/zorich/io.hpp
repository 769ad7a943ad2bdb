#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zorich/render.hpp"

namespace zorich {

// CSV with header x1,x2,x3 (plus a leading curve index column when several
// curves are written together).
void write_points_csv(const std::string& path, const std::vector<Vec3>& points);
void write_curves_csv(const std::string& path,
                      const std::vector<std::vector<Vec3>>& curves);

// Raw row-major byte tensor plus a JSON sidecar (<path>.json) describing
// dtype, shape, element order, and the world-coordinate box of the raster.
void write_verdict_raw(const std::string& path, const RasterGrid& grid,
                       const SliceSpec& slice);

}  // namespace zorich
