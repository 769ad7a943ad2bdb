#include "zorich/planar.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_set>

namespace zorich {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_finite(PlanarPoint z) {
    if (!std::isfinite(z.x) || !std::isfinite(z.y)) {
        throw DomainError("plane point must be finite");
    }
}

MapParams unit_face(const MapParams& params) {
    MapParams unit;
    unit.lambda = 1.0;
    unit.nu = 1.0;
    unit.face = params.face;
    unit.generalized = params.generalized;
    return unit;
}

// First face coordinate on the folded diagonal, in unit-face scale.
double diagonal_components(const MapParams& params, double y, double* third = nullptr) {
    const Fold1 f = fold_coordinate(y / kSqrt2, 1.0);
    const Vec3 h = face_eval(unit_face(params), {f.t, f.t});
    if (third != nullptr) *third = h.x3;
    return h.x1;
}

}  // namespace

PlanarPoint plane_embed(const MapParams& params, Vec3 x) {
    if (std::abs(x.x1 - x.x2) > 1e-9 * std::max(1.0, norm(x))) {
        throw DomainError("chart expects a point of the diagonal plane x1 = x2");
    }
    return {x.x3 / params.lambda, kSqrt2 * x.x1 / params.lambda};
}

Vec3 plane_lift(const MapParams& params, PlanarPoint z) {
    require_finite(z);
    const double t = params.lambda * z.y / kSqrt2;
    return {t, t, params.lambda * z.x};
}

PlanarPoint g_eval(const MapParams& params, PlanarPoint z) {
    require_finite(z);
    const double h = params.lambda * z.x;
    if (h > params.overflow_guard) throw HeightOverflow(h);
    double h3 = 0.0;
    const double h1 = diagonal_components(params, z.y, &h3);
    const double r = params.nu * std::exp(h);
    return {r * h3, r * kSqrt2 * h1};
}

double planar_det_fd(const MapParams& params, PlanarPoint z, double step) {
    require_finite(z);
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be positive");
    // Fold seams of the plane map sit at y in sqrt(2)*(1 + 2Z).
    const double seam = kSqrt2 * std::abs(std::remainder(z.y / kSqrt2 - 1.0, 2.0));
    if (seam <= 2.0 * step) throw SeamContact(plane_lift(params, z));
    if (params.lambda * (z.x + step) > params.overflow_guard) {
        throw HeightOverflow(params.lambda * (z.x + step));
    }
    const PlanarPoint xp = g_eval(params, {z.x + step, z.y});
    const PlanarPoint xm = g_eval(params, {z.x - step, z.y});
    const PlanarPoint yp = g_eval(params, {z.x, z.y + step});
    const PlanarPoint ym = g_eval(params, {z.x, z.y - step});
    const double axx = (xp.x - xm.x) / (2.0 * step);
    const double ayx = (xp.y - xm.y) / (2.0 * step);
    const double axy = (yp.x - ym.x) / (2.0 * step);
    const double ayy = (yp.y - ym.y) / (2.0 * step);
    return axx * ayy - axy * ayx;
}

double planar_area_Am(double lambda, int m) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (m < 1) throw DomainError("strip index must be at least 1");
    return (2.0 * kSqrt2 / lambda) * std::log1p(1.0 / static_cast<double>(m));
}

std::vector<PlanarPoint> gamma_m_curve(const MapParams& params, int m, int n_points,
                                       double y_min) {
    if (m < 1) throw DomainError("curve index must be at least 1");
    if (n_points < 2) throw DomainError("curve needs at least 2 points");
    if (!(y_min > 0.0) || !(y_min < kSqrt2)) {
        throw DomainError("y_min must lie in (0, sqrt(2))");
    }
    const double y_max = 2.0 * kSqrt2 - y_min;
    std::vector<PlanarPoint> curve;
    curve.reserve(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        const double y =
            y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(n_points - 1);
        const double h1 = diagonal_components(params, y);
        if (!(h1 > 0.0)) {
            throw DomainError("curve undefined where the diagonal face coordinate vanishes");
        }
        const double x = std::log(2.0 * static_cast<double>(m) / (params.nu * h1)) / params.lambda;
        curve.push_back({x, y});
    }
    return curve;
}

namespace {

using BinSet = std::unordered_set<std::uint64_t>;

std::uint64_t bin_key(long long ix, long long iy) {
    const std::uint64_t a = static_cast<std::uint64_t>(ix + (1LL << 31));
    const std::uint64_t b = static_cast<std::uint64_t>(iy + (1LL << 31));
    return (a << 32) | (b & 0xFFFFFFFFULL);
}

void paint(BinSet& bins, PlanarPoint p, double s) {
    bins.insert(bin_key(static_cast<long long>(std::floor(p.x / s)),
                        static_cast<long long>(std::floor(p.y / s))));
}

long long key_iy(std::uint64_t key) {
    return static_cast<long long>(key & 0xFFFFFFFFULL) - (1LL << 31);
}

bool bin_row_touches_fold_line(long long iy, double s) {
    const double y_lo = static_cast<double>(iy) * s;
    const double y_hi = y_lo + s;
    const double period = 2.0 * kSqrt2;
    const double q = std::round((0.5 * (y_lo + y_hi) - kSqrt2) / period);
    const double line = kSqrt2 + period * q;
    return line >= y_lo && line <= y_hi;
}

void map_cell(const MapParams& params, double x0, double y0, double s, double s_out,
              BinSet& out, int depth) {
    const PlanarPoint c00 = g_eval(params, {x0, y0});
    const PlanarPoint c10 = g_eval(params, {x0 + s, y0});
    const PlanarPoint c01 = g_eval(params, {x0, y0 + s});
    const PlanarPoint c11 = g_eval(params, {x0 + s, y0 + s});
    const double diam = std::max(std::max(norm(c10 - c00), norm(c01 - c00)),
                                 std::max(norm(c11 - c00), norm(c11 - c10)));
    if (diam <= s_out || depth >= 14) {
        paint(out, c00, s_out);
        paint(out, c10, s_out);
        paint(out, c01, s_out);
        paint(out, c11, s_out);
        paint(out, g_eval(params, {x0 + 0.5 * s, y0 + 0.5 * s}), s_out);
        return;
    }
    const double half = 0.5 * s;
    map_cell(params, x0, y0, half, s_out, out, depth + 1);
    map_cell(params, x0 + half, y0, half, s_out, out, depth + 1);
    map_cell(params, x0, y0 + half, half, s_out, out, depth + 1);
    map_cell(params, x0 + half, y0 + half, half, s_out, out, depth + 1);
}

}  // namespace

AreaGrowth area_growth_experiment(const MapParams& params, PlanarPoint lo, PlanarPoint hi,
                                  int n_steps, double resolution) {
    require_finite(lo);
    require_finite(hi);
    if (!(lo.x < hi.x) || !(lo.y < hi.y)) throw DomainError("window must be a nonempty rectangle");
    if (n_steps < 1) throw DomainError("experiment needs at least one step");
    if (!(resolution > 0.0)) throw DomainError("resolution must be positive");

    AreaGrowth result;
    double s = resolution;
    BinSet bins;
    for (long long ix = static_cast<long long>(std::floor(lo.x / s));
         ix <= static_cast<long long>(std::floor(hi.x / s)); ++ix) {
        for (long long iy = static_cast<long long>(std::floor(lo.y / s));
             iy <= static_cast<long long>(std::floor(hi.y / s)); ++iy) {
            bins.insert(bin_key(ix, iy));
        }
    }
    result.areas.push_back(static_cast<double>(bins.size()) * s * s);

    constexpr double kTargetBins = 150000.0;
    for (int step = 0; step < n_steps; ++step) {
        for (const std::uint64_t key : bins) {
            if (bin_row_touches_fold_line(key_iy(key), s)) {
                result.contact = true;
                result.contact_step = step;
            }
        }
        if (result.contact) break;

        // Predict the image size from corner spans to pick the next bin size.
        double predicted = 0.0;
        for (const std::uint64_t key : bins) {
            const long long ix = static_cast<long long>(key >> 32) - (1LL << 31);
            const long long iy = key_iy(key);
            const double x0 = static_cast<double>(ix) * s;
            const double y0 = static_cast<double>(iy) * s;
            const PlanarPoint c00 = g_eval(params, {x0, y0});
            const PlanarPoint ex = g_eval(params, {x0 + s, y0}) - c00;
            const PlanarPoint ey = g_eval(params, {x0, y0 + s}) - c00;
            predicted += std::abs(ex.x * ey.y - ex.y * ey.x);
        }
        const double s_out = std::max(std::sqrt(std::max(predicted, 1e-300) / kTargetBins), 1e-12);

        BinSet next;
        for (const std::uint64_t key : bins) {
            const long long ix = static_cast<long long>(key >> 32) - (1LL << 31);
            const long long iy = key_iy(key);
            map_cell(params, static_cast<double>(ix) * s, static_cast<double>(iy) * s, s, s_out,
                     next, 0);
        }
        bins = std::move(next);
        s = s_out;
        result.areas.push_back(static_cast<double>(bins.size()) * s * s);
        result.ratios.push_back(result.areas.back() / result.areas[result.areas.size() - 2]);
    }
    return result;
}

}  // namespace zorich
