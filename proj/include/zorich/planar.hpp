#pragma once

#include <vector>

#include "zorich/geometry.hpp"

namespace zorich {

struct PlanarPoint {
    double x = 0.0;  // horizontal coordinate, scaled height
    double y = 0.0;  // vertical coordinate, scaled diagonal position
};

inline PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
inline PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
inline double norm(PlanarPoint a) { return std::hypot(a.x, a.y); }

// Chart of the invariant diagonal plane x1 = x2:
// (t, t, x3) <-> (x3 + i*sqrt(2)*t) / lambda.
PlanarPoint plane_embed(const MapParams& params, Vec3 x);
Vec3 plane_lift(const MapParams& params, PlanarPoint z);

// The plane map conjugate to the restriction of the spatial map.
PlanarPoint g_eval(const MapParams& params, PlanarPoint z);

// Central-difference Jacobian determinant of the plane map.
double planar_det_fd(const MapParams& params, PlanarPoint z, double step = 1e-6);

// Area of the strip between the curves gamma_m and gamma_{m+1}.
double planar_area_Am(double lambda, int m);

// Polyline of gamma_m: the preimage under the plane map of the horizontal
// line {vertical coordinate = 2*sqrt(2)*m}, sampled over one vertical period
// y in [y_min, 2*sqrt(2) - y_min].  m >= 1.
std::vector<PlanarPoint> gamma_m_curve(const MapParams& params, int m, int n_points,
                                       double y_min = 1e-8);

struct AreaGrowth {
    std::vector<double> areas;   // occupied area after 0..n steps
    std::vector<double> ratios;  // areas[k+1] / areas[k] for steps taken before contact
    bool contact = false;        // some tracked region touched a fold line of the plane map
    int contact_step = -1;
};

// Iterates an axis-aligned rectangle under the plane map, tracking occupied
// area on bin grids.  Stops early when the region meets a horizontal fold
// line y in sqrt(2) + 2*sqrt(2)*Z, where the area lower bound no longer
// applies to the next step.
AreaGrowth area_growth_experiment(const MapParams& params, PlanarPoint lo, PlanarPoint hi,
                                  int n_steps, double resolution = 1e-3);

}  // namespace zorich
