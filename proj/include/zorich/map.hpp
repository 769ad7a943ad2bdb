#pragma once

#include <array>
#include <vector>

#include "zorich/geometry.hpp"

namespace zorich {

// One application of the map: exponential in the height, folded face in the plane.
Vec3 zorich_eval(const MapParams& params, Vec3 x);

struct OrbitTrace {
    enum class Stop { Completed, Escaped, Overflow };
    std::vector<Vec3> points;  // points[0] = start
    Stop stop = Stop::Completed;
    int steps() const { return static_cast<int>(points.size()) - 1; }
};

// Iterates until n steps are done, |point| exceeds escape_radius, or the
// height guard trips.  The exceeding point (if any) is the last entry.
OrbitTrace zorich_iterate(const MapParams& params, Vec3 x, int n, double escape_radius);

// Central-difference derivative, stored scaled by exp(-log_scale) so entries
// stay finite at large heights:  D = exp(log_scale) * m.
struct Jacobian {
    std::array<std::array<double, 3>, 3> m{};
    double log_scale = 0.0;
    double det_scaled() const;   // det(m)
    double log_abs_det() const;  // log|det D| = log|det m| + 3*log_scale
    double det() const;          // det(m) * exp(3*log_scale); may overflow to inf
    double op_norm() const;      // largest singular value of D
};

// Throws SeamContact when x is within 2*step of a fold seam, HeightOverflow
// when the stencil heights exceed the guard.  step = 0 picks 1e-5 * max(1,|x|).
Jacobian jacobian_fd(const MapParams& params, Vec3 x, double step = 0.0);

// Height dynamics along the vertical axis: t -> kappa * exp(t).
struct ExpFamily {
    double kappa = 1.0;
};

struct ExpOrbit {
    std::vector<double> values;  // values[0] = start
    bool overflowed = false;
};

ExpOrbit exp_iter(ExpFamily f, double t, int n, double guard = 700.0);

}  // namespace zorich
