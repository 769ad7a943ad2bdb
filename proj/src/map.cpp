#include "zorich/map.hpp"

#include <cmath>

namespace zorich {

namespace {

void require_finite_point(Vec3 x) {
    if (!std::isfinite(x.x1) || !std::isfinite(x.x2) || !std::isfinite(x.x3)) {
        throw DomainError("map input must be finite");
    }
}

// Value of the map times exp(-log_scale); finite whenever x3 stays near log_scale.
Vec3 eval_scaled(const MapParams& params, Vec3 x, double log_scale) {
    const FoldResult f = fold_plane(plane_part(x), params.lambda);
    const Vec3 h = face_eval(params, f.u);
    const double s = params.nu * std::exp(x.x3 - log_scale);
    const double sign = (f.parity != 0) ? -1.0 : 1.0;
    return {s * h.x1, s * h.x2, sign * s * h.x3};
}

}  // namespace

Vec3 zorich_eval(const MapParams& params, Vec3 x) {
    require_finite_point(x);
    if (!(params.nu > 0.0) || !std::isfinite(params.nu)) {
        throw DomainError("nu must be positive and finite");
    }
    if (x.x3 > params.overflow_guard) throw HeightOverflow(x.x3);
    return eval_scaled(params, x, 0.0);
}

OrbitTrace zorich_iterate(const MapParams& params, Vec3 x, int n, double escape_radius) {
    if (n < 0) throw DomainError("orbit length must be nonnegative");
    if (!(escape_radius > 0.0)) throw DomainError("escape radius must be positive");
    OrbitTrace trace;
    trace.points.push_back(x);
    for (int k = 0; k < n; ++k) {
        Vec3 next;
        try {
            next = zorich_eval(params, x);
        } catch (const HeightOverflow&) {
            trace.stop = OrbitTrace::Stop::Overflow;
            return trace;
        }
        trace.points.push_back(next);
        x = next;
        if (norm(next) > escape_radius) {
            trace.stop = OrbitTrace::Stop::Escaped;
            return trace;
        }
    }
    return trace;
}

double Jacobian::det_scaled() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double Jacobian::log_abs_det() const {
    return std::log(std::abs(det_scaled())) + 3.0 * log_scale;
}

double Jacobian::det() const { return det_scaled() * std::exp(3.0 * log_scale); }

double Jacobian::op_norm() const {
    std::array<double, 3> v{1.0, 1.0, 1.0};
    double sigma = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        std::array<double, 3> w{};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) w[r] += m[r][c] * v[c];
        }
        const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        if (!(wn > 0.0)) return 0.0;
        std::array<double, 3> u{};
        for (int c = 0; c < 3; ++c) {
            for (int r = 0; r < 3; ++r) u[c] += m[r][c] * w[r];
        }
        const double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        if (!(un > 0.0)) return wn * std::exp(log_scale);
        for (int c = 0; c < 3; ++c) v[c] = u[c] / un;
        const double prev = sigma;
        sigma = un / wn;  // |M^T M v| / |M v| -> sigma_max
        if (iter > 2 && std::abs(sigma - prev) <= 1e-15 * sigma) break;
    }
    return sigma * std::exp(log_scale);
}

Jacobian jacobian_fd(const MapParams& params, Vec3 x, double step) {
    require_finite_point(x);
    if (step == 0.0) step = 1e-5 * std::max(1.0, norm(x));
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be positive");
    if (x.x3 + step > params.overflow_guard) throw HeightOverflow(x.x3 + step);
    if (seam_distance(plane_part(x), params.lambda) <= 2.0 * step) throw SeamContact(x);
    Jacobian jac;
    jac.log_scale = x.x3;
    const Vec3 axes[3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    for (int c = 0; c < 3; ++c) {
        const Vec3 hi = eval_scaled(params, x + step * axes[c], x.x3);
        const Vec3 lo = eval_scaled(params, x - step * axes[c], x.x3);
        jac.m[0][c] = (hi.x1 - lo.x1) / (2.0 * step);
        jac.m[1][c] = (hi.x2 - lo.x2) / (2.0 * step);
        jac.m[2][c] = (hi.x3 - lo.x3) / (2.0 * step);
    }
    return jac;
}

ExpOrbit exp_iter(ExpFamily f, double t, int n, double guard) {
    if (!(f.kappa > 0.0) || !std::isfinite(f.kappa)) {
        throw DomainError("kappa must be positive and finite");
    }
    if (n < 0) throw DomainError("orbit length must be nonnegative");
    ExpOrbit orbit;
    orbit.values.push_back(t);
    for (int k = 0; k < n; ++k) {
        if (t > guard) {
            orbit.overflowed = true;
            break;
        }
        const double next = f.kappa * std::exp(t);
        if (!std::isfinite(next)) {
            orbit.overflowed = true;
            break;
        }
        orbit.values.push_back(next);
        t = next;
    }
    return orbit;
}

}  // namespace zorich
