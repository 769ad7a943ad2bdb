#include "zorich/geometry.hpp"

#include "zorich/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace zorich {

namespace {

void require_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lambda must be positive and finite");
    }
}

void require_finite(double t, const char* what) {
    if (!std::isfinite(t)) throw DomainError(std::string(what) + " must be finite");
}

double max_abs(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

}  // namespace

Fold1 fold_coordinate(double t, double lambda) {
    require_lambda(lambda);
    require_finite(t, "fold input");
    const double period = 4.0 * lambda;
    const double r = std::remainder(t, period);  // exact; r in [-2*lambda, 2*lambda]
    int band = 0;
    double folded = r;
    if (r > lambda) {
        band = 1;
        folded = 2.0 * lambda - r;
    } else if (r <= -lambda) {
        band = -1;
        folded = -2.0 * lambda - r;
    }
    const double whole_periods = std::round((t - r) / period);
    const double n = 2.0 * whole_periods + static_cast<double>(band);
    long long count;
    if (std::abs(n) < 9.0e18) {
        count = std::llabs(static_cast<long long>(n));
    } else {
        count = std::numeric_limits<long long>::max();  // beyond exact integer range
    }
    return {folded, count};
}

FoldResult fold_plane(Vec2 x, double lambda) {
    const Fold1 f1 = fold_coordinate(x.x1, lambda);
    const Fold1 f2 = fold_coordinate(x.x2, lambda);
    const int parity = static_cast<int>((f1.reflections + f2.reflections) & 1LL);
    return {{f1.t, f2.t}, parity};
}

double seam_distance(Vec2 x, double lambda) {
    require_lambda(lambda);
    const double two_lambda = 2.0 * lambda;
    const double d1 = std::abs(std::remainder(x.x1 - lambda, two_lambda));
    const double d2 = std::abs(std::remainder(x.x2 - lambda, two_lambda));
    const double ds = std::abs(std::remainder(coord_s(x), two_lambda)) / std::numbers::sqrt2;
    const double dd = std::abs(std::remainder(coord_d(x), two_lambda)) / std::numbers::sqrt2;
    return std::min(std::min(d1, d2), std::min(ds, dd));
}

Vec3 face_sphere_eval(Vec2 u, double lambda) {
    require_lambda(lambda);
    require_finite(u.x1, "face input");
    require_finite(u.x2, "face input");
    if (max_abs(u.x1, u.x2) > lambda * (1.0 + 1e-12)) {
        throw DomainError("face input outside the fundamental square");
    }
    const double v1 = u.x1 / lambda;
    const double v2 = u.x2 / lambda;
    const Vec3 q{v1, v2, 1.0 - max_abs(v1, v2)};
    const double n = norm(q);
    return (lambda / n) * q;
}

Vec2 face_sphere_invert(Vec3 s, double lambda) {
    require_lambda(lambda);
    const double r = norm(s);
    if (!std::isfinite(r) || std::abs(r - lambda) > 1e-6 * lambda) {
        throw DomainError("sphere inverse expects |s| = lambda");
    }
    if (s.x3 < -1e-9 * lambda) {
        throw DomainError("sphere inverse expects the upper hemisphere");
    }
    const double s1 = s.x1 / r;
    const double s2 = s.x2 / r;
    const double s3 = std::max(s.x3 / r, 0.0);
    const double mu = 1.0 / (s3 + max_abs(s1, s2));
    Vec2 u{lambda * mu * s1, lambda * mu * s2};
    u.x1 = std::clamp(u.x1, -lambda, lambda);
    u.x2 = std::clamp(u.x2, -lambda, lambda);
    return u;
}

Vec3 face_pyramid_eval(Vec2 u, double lambda) {
    require_lambda(lambda);
    require_finite(u.x1, "face input");
    require_finite(u.x2, "face input");
    if (max_abs(u.x1, u.x2) > lambda * (1.0 + 1e-12)) {
        throw DomainError("face input outside the fundamental square");
    }
    return {u.x1, u.x2, lambda - max_abs(u.x1, u.x2)};
}

Vec2 face_pyramid_invert(Vec3 w, double lambda) {
    require_lambda(lambda);
    const double r = norm(w);
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("pyramid inverse expects a nonzero ray");
    if (w.x3 < -1e-9 * r) throw DomainError("pyramid inverse expects an upward ray");
    const double denom = std::max(w.x3, 0.0) + max_abs(w.x1, w.x2);
    if (!(denom > 0.0)) throw DomainError("ray misses the pyramid face");
    const double t = lambda / denom;
    Vec2 u{t * w.x1, t * w.x2};
    u.x1 = std::clamp(u.x1, -lambda, lambda);
    u.x2 = std::clamp(u.x2, -lambda, lambda);
    return u;
}

Vec3 face_eval(const MapParams& params, Vec2 u) {
    switch (params.face) {
        case FaceKind::Sphere:
            return face_sphere_eval(u, params.lambda);
        case FaceKind::Pyramid:
            return face_pyramid_eval(u, params.lambda);
        case FaceKind::Generalized: {
            if (!params.generalized || !params.generalized->eval) {
                throw ConfigError("generalized face handle not set");
            }
            const double lambda = params.lambda;
            require_lambda(lambda);
            if (max_abs(u.x1, u.x2) > lambda * (1.0 + 1e-12)) {
                throw DomainError("face input outside the fundamental square");
            }
            return lambda * params.generalized->eval({u.x1 / lambda, u.x2 / lambda});
        }
    }
    throw DomainError("unknown face kind");
}

Vec2 face_invert_ray(const MapParams& params, Vec3 w) {
    switch (params.face) {
        case FaceKind::Sphere: {
            const double r = norm(w);
            if (!(r > 0.0) || !std::isfinite(r)) {
                throw DomainError("face inverse expects a nonzero ray");
            }
            return face_sphere_invert((params.lambda / r) * w, params.lambda);
        }
        case FaceKind::Pyramid:
            return face_pyramid_invert(w, params.lambda);
        case FaceKind::Generalized: {
            if (!params.generalized || !params.generalized->invert_ray) {
                throw ConfigError("generalized face handle not set");
            }
            const Vec2 v = params.generalized->invert_ray(w);
            return {params.lambda * v.x1, params.lambda * v.x2};
        }
    }
    throw DomainError("unknown face kind");
}

namespace {

Vec2 clamp_to_square(Vec2 v) {
    return {std::clamp(v.x1, -1.0, 1.0), std::clamp(v.x2, -1.0, 1.0)};
}

MapParams unit_face(const MapParams& params) {
    MapParams unit;
    unit.lambda = 1.0;
    unit.nu = 1.0;
    unit.face = params.face;
    unit.generalized = params.generalized;
    return unit;
}

constexpr Vec2 kAnchors[8] = {{0.0, 0.0},  {1.0, 1.0},  {-1.0, 1.0}, {1.0, -1.0},
                              {0.5, 0.0},  {-0.5, 0.0}, {0.0, 0.5},  {0.0, -0.5}};

}  // namespace

std::pair<double, double> estimate_bilipschitz(const MapParams& params, int n_samples,
                                               std::uint64_t seed) {
    if (n_samples < 2) throw DomainError("bilipschitz estimate needs at least 2 samples");
    const MapParams unit = unit_face(params);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_samples); ++i) {
        const Vec2 u = detail::lattice_point(2 * i);
        auto eng = detail::engine_for(seed, i);
        Vec2 v;
        switch (i % 4) {
            case 0:
                v = detail::lattice_point(2 * i + 1);
                break;
            case 1:
            case 2: {
                const double scale = (i % 4 == 1) ? 1e-2 : 1e-4;
                const double ang = 2.0 * std::numbers::pi * unif(eng);
                const double delta = scale * (0.5 + 0.5 * unif(eng));
                v = clamp_to_square({u.x1 + delta * std::cos(ang), u.x2 + delta * std::sin(ang)});
                break;
            }
            default:
                v = kAnchors[eng() % 8];
                break;
        }
        const double dx = norm(u - v);
        if (dx < 1e-12) continue;
        const double dy = norm(face_eval(unit, u) - face_eval(unit, v));
        const double ratio = dy / dx;
        hi = std::max(hi, ratio);
        lo = std::min(lo, ratio);
    }
    if (!(hi > 0.0) || !std::isfinite(lo)) throw DomainError("no valid sample pairs");
    return {hi, lo};
}

double estimate_face_angle(const MapParams& params, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw DomainError("face angle estimate needs samples");
    const MapParams unit = unit_face(params);
    double theta = std::numbers::pi / 2.0;
    bool any = false;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_samples); ++i) {
        const Vec2 u = detail::lattice_point(i);
        const Vec3 z = face_eval(unit, u);
        const double zn = norm(z);
        if (zn < 1e-9) continue;
        auto eng = detail::engine_for(seed, i);
        Vec2 dir;
        switch (i % 6) {
            case 0: dir = {1.0, 0.0}; break;
            case 1: dir = {0.0, 1.0}; break;
            case 2: dir = {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}; break;
            case 3: dir = {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0}; break;
            default: {
                const double ang = 2.0 * std::numbers::pi * unif(eng);
                dir = {std::cos(ang), std::sin(ang)};
                break;
            }
        }
        const double delta = 1e-3 * (0.5 + 0.5 * unif(eng));
        const Vec2 v = clamp_to_square(u + delta * dir);
        const Vec3 d = z - face_eval(unit, v);
        const double dn = norm(d);
        if (dn < 1e-12) continue;
        const double c = std::clamp(std::abs(dot(z, d)) / (zn * dn), 0.0, 1.0);
        theta = std::min(theta, std::acos(c));
        any = true;
    }
    if (!any) throw DomainError("no valid chord samples");
    return theta;
}

double face_min_norm(const MapParams& params, int n_samples) {
    if (n_samples < 1) throw DomainError("min-norm estimate needs samples");
    const MapParams unit = unit_face(params);
    double m = std::numeric_limits<double>::infinity();
    for (const Vec2& a : kAnchors) m = std::min(m, norm(face_eval(unit, a)));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_samples); ++i) {
        m = std::min(m, norm(face_eval(unit, detail::lattice_point(i))));
    }
    return m;
}

FaceModel make_face_model(const MapParams& params, int n_samples, std::uint64_t seed) {
    FaceModel model;
    model.kind = params.face;
    model.handle = params.generalized;
    const auto [hi, lo] = estimate_bilipschitz(params, n_samples, seed);
    model.l_hat = hi;
    model.ell_hat = lo;
    const int half = std::max(n_samples / 2, 1000);
    model.theta_s = estimate_face_angle(params, half, seed + 1);
    model.min_norm = face_min_norm(params, half);
    return model;
}

}  // namespace zorich
