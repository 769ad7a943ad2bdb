#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>

#include "zorich/core.hpp"

namespace zorich {

// One-dimensional fold onto [-lambda, lambda]: reflections across the odd
// multiples of lambda, period 4*lambda.  `reflections` counts the reflections
// composed by the canonical peel-down (2 per full period); its parity decides
// the sign flip of the vertical face component.
struct Fold1 {
    double t = 0.0;
    long long reflections = 0;
};

Fold1 fold_coordinate(double t, double lambda);

struct FoldResult {
    Vec2 u;
    int parity = 0;  // total reflection count mod 2
};

FoldResult fold_plane(Vec2 x, double lambda);

// Distance from x to the nearest non-smooth seam of the folded face map:
// the planes x_i = (2k+1)*lambda and the diagonals x1 = +-x2 + 2k*lambda.
double seam_distance(Vec2 x, double lambda);

enum class FaceKind { Sphere, Pyramid, Generalized };

// User-supplied face over the unit square Q = [-1,1]^2.  `eval` sends Q onto a
// surface with eval(0,0) = (0,0,1); `invert_ray` recovers u in Q from any ray
// direction w (w3 >= 0) meeting the surface.
struct GeneralizedFace {
    std::function<Vec3(Vec2)> eval;
    std::function<Vec2(Vec3)> invert_ray;
};

struct MapParams {
    double lambda = 2.0;
    double nu = 1.0;
    FaceKind face = FaceKind::Sphere;
    std::shared_ptr<const GeneralizedFace> generalized;  // required iff face == Generalized
    double overflow_guard = 700.0;
};

// Spherical face: central projection of the square pyramid cap onto the
// sphere of radius lambda.
Vec3 face_sphere_eval(Vec2 u, double lambda);
// Inverse from a point s on the upper sphere of radius lambda (|s| = lambda
// within tolerance, s3 >= 0).
Vec2 face_sphere_invert(Vec3 s, double lambda);

// Pyramid face: graph of u -> lambda - max(|u1|, |u2|) over lambda*Q.
Vec3 face_pyramid_eval(Vec2 u, double lambda);
// Inverse from any ray direction w with w3 >= 0, w != 0.
Vec2 face_pyramid_invert(Vec3 w, double lambda);

// Face of the configured kind, scaled to lambda*Q.
Vec3 face_eval(const MapParams& params, Vec2 u);
// u in lambda*Q with face_eval(u) parallel to w; w3 >= 0, w != 0.
Vec2 face_invert_ray(const MapParams& params, Vec3 w);

// Sampled geometric constants of the unscaled face.
struct FaceModel {
    FaceKind kind = FaceKind::Sphere;
    std::shared_ptr<const GeneralizedFace> handle;
    double l_hat = 0.0;     // upper bilipschitz constant
    double ell_hat = 0.0;   // lower bilipschitz constant
    double min_norm = 0.0;  // min |face(v)| over Q
    double theta_s = 0.0;   // min acute angle between chords and position rays
};

// (l_hat, ell_hat) from sampled difference quotients; sample streams are
// nested, so l_hat is nondecreasing and ell_hat nonincreasing in n_samples.
std::pair<double, double> estimate_bilipschitz(const MapParams& params, int n_samples,
                                               std::uint64_t seed);
double estimate_face_angle(const MapParams& params, int n_samples, std::uint64_t seed);
double face_min_norm(const MapParams& params, int n_samples);

FaceModel make_face_model(const MapParams& params, int n_samples = 200000,
                          std::uint64_t seed = 1);

}  // namespace zorich
