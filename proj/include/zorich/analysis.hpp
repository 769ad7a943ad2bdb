#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zorich/inverse.hpp"
#include "zorich/map.hpp"

namespace zorich {

// Sampled face constants together with the parameter-regime thresholds they
// induce.  All quantities are estimates built from the face samples.
struct RegimeReport {
    double lambda = 0.0;
    double nu = 0.0;
    double l_hat = 0.0;
    double ell_hat = 0.0;
    double theta_hat = 0.0;
    double min_norm = 0.0;
    double lambda_threshold = 0.0;  // l_hat^5
    double nu_threshold = 0.0;      // sqrt(2 * l_hat / lambda)
    double axis_product = 0.0;      // nu * lambda, compared against 1/e
    double c_hgen = 0.0;            // max(l_hat^5, 2*l_hat) / (min_norm * sin(theta_hat))
    bool expanding_regime = false;  // lambda > l_hat^5 and nu > nu_threshold
    bool axis_regime = false;       // nu * lambda > 1/e
    int core_image_wedge = -1;      // image wedge of beam (0,0), probed at runtime
};

RegimeReport regime_report(const MapParams& params, const FaceModel& face);

// Combined distortion constant for the iterated determinant bound; reduces to
// l_hat^5 for the round face.
double distortion_constant(const FaceModel& face);

// Comparisons are carried out in logarithms so that large heights stay finite.
struct BoundCheck {
    double log_lhs = 0.0;
    double log_rhs = 0.0;
    bool ok = false;
};

// det DZ(x) >= (1 - rel_tol) * nu^3 e^{3 x3} lambda / l_hat^2.
// fd_step = 0 picks the default finite-difference step.
BoundCheck verify_single_det(const MapParams& params, const FaceModel& face, Vec3 x,
                             double rel_tol = 1e-3, double fd_step = 0.0);

// det D(Z^n)(x) >= (1 - rel_tol) * (lambda/C)^n * |plane part of Z^n(x)|^3 / lambda^3,
// with C = distortion_constant(face).
BoundCheck verify_iterated_det(const MapParams& params, const FaceModel& face, Vec3 x, int n,
                               double rel_tol = 1e-3, double fd_step = 0.0);

// Largest disk radius delta with face third coordinate > lambda - epsilon,
// the induced ascent constant c = 1 + log(nu*(lambda - epsilon)), and the
// sampled worst margin of height(Z(x)) - height(x) - c over the cone.
struct AscentResult {
    double delta = 0.0;
    double c = 0.0;
    double min_margin = 0.0;
    bool ok = false;
};

AscentResult ascent_constant(const MapParams& params, double epsilon, int n_checks = 10000,
                             std::uint64_t seed = 7);

// The three image walls bounding the core beam's level surfaces.
enum class WallKind { SumPlus, Diff, SumMinus };

WallKind surface_wall(const MapParams& params, Vec2 u);

// Height over u of the n-th level surface: the image lands on the wall at
// distance 2(n+1)*lambda.  Throws SingularSurfacePoint where the wall
// combination vanishes.
double level_surface_height(const MapParams& params, int n, Vec2 u);

// Signed volume below the n-th level surface over the core beam cross
// section (midpoint quadrature, singular corners notched out).
double volume_In(const MapParams& params, int n, int quad_resolution = 256);

struct VolumeTn {
    double numeric = 0.0;
    double formula = 0.0;  // 4 * lambda^2 * log((n+2)/(n+1))
};

// Volume of the shell between consecutive level surfaces.
VolumeTn volume_Tn(const MapParams& params, int n, int quad_resolution = 256);

// Worst sampled quotient |Z^n y1 - Z^n y2| / (bound * |y1 - y2|) over pairs
// in the ball of radius r, where bound chains the one-step stretch factors.
struct LipschitzCheck {
    double worst_ratio = 0.0;
    bool ok = false;
    int n_effective = 0;  // steps actually bounded before the guard tripped
};

LipschitzCheck verify_lipschitz_iterates(const MapParams& params, const FaceModel& face,
                                         double r, int n, int n_pairs, std::uint64_t seed,
                                         double rel_tol = 1e-3);

// Smallest iterate count N whose axis height c = E^N(0) - lambda satisfies
// the shell-capacity inequality, with the following five steps checked too.
struct KeyInequality {
    int n = 0;
    double c = 0.0;  // may be +inf when the height sequence leaves double range
    bool holds_onward = false;
};

bool key_inequality_holds(double c, double lambda, double nu);
KeyInequality key_inequality_N(const MapParams& params);

// Ball-inclusion property of the central-cell inverse branch: every sampled
// y in B(Z(x), R/alpha_hat) above the height threshold pulls back into B(x, R).
struct BallInclusionCheck {
    int triples_used = 0;
    int failures = 0;
    double worst = 0.0;  // max |pullback(y) - x| / R
};

BallInclusionCheck verify_ball_inclusion(const MapParams& params, double M, double alpha_hat,
                                         int n_triples, std::uint64_t seed);

// One verification record; lhs/rhs are in logs only where the check says so.
struct CheckRecord {
    std::string check;
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
    Vec3 worst_point{};
};

struct SuiteOptions {
    int n_samples = 2000;
    int n_pairs = 1000;
    std::uint64_t seed = 20260819;
};

std::vector<CheckRecord> run_verification_suite(const MapParams& params, const FaceModel& face,
                                                const SuiteOptions& options);

}  // namespace zorich
