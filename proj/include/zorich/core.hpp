#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace zorich {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct Vec3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x1, s * a.x2, s * a.x3}; }

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double dot(Vec3 a, Vec3 b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }
inline double norm(Vec3 a) { return std::hypot(a.x1, a.x2, a.x3); }

// Projection onto the horizontal plane and the height coordinate.
inline Vec2 plane_part(Vec3 x) { return {x.x1, x.x2}; }
inline double height(Vec3 x) { return x.x3; }

// Rotated plane coordinates; beams and wedges are axis-aligned boxes in (s, d).
inline double coord_s(Vec2 x) { return x.x1 + x.x2; }
inline double coord_d(Vec2 x) { return x.x1 - x.x2; }
inline double coord_s(Vec3 x) { return x.x1 + x.x2; }
inline double coord_d(Vec3 x) { return x.x1 - x.x2; }
inline Vec2 from_sd(double s, double d) { return {(s + d) / 2.0, (s - d) / 2.0}; }

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Height beyond which exponentiation is refused rather than allowed to overflow.
struct HeightOverflow : std::runtime_error {
    double height_value;
    explicit HeightOverflow(double h)
        : std::runtime_error("height " + std::to_string(h) + " exceeds overflow guard"),
          height_value(h) {}
};

// Finite-difference stencil would straddle a non-smooth seam.
struct SeamContact : std::runtime_error {
    Vec3 where;
    explicit SeamContact(Vec3 x)
        : std::runtime_error("point too close to a fold seam for differentiation"), where(x) {}
};

// A pullback step received a point outside the required wedge closure.
struct InadmissibleStep : std::runtime_error {
    int step;
    InadmissibleStep(int k, const std::string& what_arg)
        : std::runtime_error(what_arg), step(k) {}
};

// Level-surface height requested at a point where the defining combination vanishes.
struct SingularSurfacePoint : std::runtime_error {
    Vec2 where;
    explicit SingularSurfacePoint(Vec2 u)
        : std::runtime_error("level surface has no finite height over this point"), where(u) {}
};

}  // namespace zorich
