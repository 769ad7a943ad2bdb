#include "zorich/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "zorich/planar.hpp"
#include "zorich/sampling.hpp"

namespace zorich {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 random_unit3(std::mt19937_64& eng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        const Vec3 v{gauss(eng), gauss(eng), gauss(eng)};
        const double n = norm(v);
        if (n > 1e-6) return (1.0 / n) * v;
    }
}

Vec3 random_in_ball(std::mt19937_64& eng, double radius) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return (radius * std::cbrt(unif(eng))) * random_unit3(eng);
}

// Sampled sup of |face| over the unit square, for stretch-factor chains.
double face_max_norm(const MapParams& params) {
    MapParams unit;
    unit.lambda = 1.0;
    unit.face = params.face;
    unit.generalized = params.generalized;
    double m = 0.0;
    for (std::size_t i = 0; i < 4096; ++i) {
        m = std::max(m, norm(face_eval(unit, detail::lattice_point(i))));
    }
    const Vec2 anchors[5] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}, {0, 0}};
    for (const Vec2& a : anchors) m = std::max(m, norm(face_eval(unit, a)));
    return m;
}

// Seam-distant point with lateral part in (-2l, 2l)^2 and height in [lo, hi].
Vec3 sample_seam_distant(const MapParams& params, std::mt19937_64& eng, double h_lo,
                         double h_hi) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int tries = 0; tries < 4000; ++tries) {
        const Vec3 x{params.lambda * (4.0 * unif(eng) - 2.0),
                     params.lambda * (4.0 * unif(eng) - 2.0),
                     h_lo + (h_hi - h_lo) * unif(eng)};
        const double step = 1e-5 * std::max(1.0, norm(x));
        if (seam_distance(plane_part(x), params.lambda) > 2.5 * step) return x;
    }
    throw DomainError("could not sample a seam-distant point");
}

}  // namespace

RegimeReport regime_report(const MapParams& params, const FaceModel& face) {
    RegimeReport r;
    r.lambda = params.lambda;
    r.nu = params.nu;
    r.l_hat = face.l_hat;
    r.ell_hat = face.ell_hat;
    r.theta_hat = face.theta_s;
    r.min_norm = face.min_norm;
    r.lambda_threshold = std::pow(face.l_hat, 5.0);
    r.nu_threshold = std::sqrt(2.0 * face.l_hat / params.lambda);
    r.axis_product = params.nu * params.lambda;
    r.c_hgen = std::max(std::pow(face.l_hat, 5.0), 2.0 * face.l_hat) /
               (face.min_norm * std::sin(face.theta_s));
    r.expanding_regime = params.lambda > r.lambda_threshold && params.nu > r.nu_threshold;
    r.axis_regime = r.axis_product > std::exp(-1.0);
    r.core_image_wedge = beam_wedge(params, BeamIndex{0, 0});
    return r;
}

double distortion_constant(const FaceModel& face) {
    if (face.kind == FaceKind::Sphere) return std::pow(face.l_hat, 5.0);
    return std::max(std::pow(face.l_hat, 5.0), 2.0 * face.l_hat) /
           (face.min_norm * std::sin(face.theta_s));
}

BoundCheck verify_single_det(const MapParams& params, const FaceModel& face, Vec3 x,
                             double rel_tol, double fd_step) {
    const Jacobian jac = jacobian_fd(params, x, fd_step);
    BoundCheck r;
    r.log_lhs = (jac.det_scaled() > 0.0) ? jac.log_abs_det() : -kInf;
    r.log_rhs = 3.0 * std::log(params.nu) + 3.0 * x.x3 + std::log(params.lambda) -
                2.0 * std::log(face.l_hat);
    r.ok = r.log_lhs >= r.log_rhs + std::log1p(-rel_tol);
    return r;
}

BoundCheck verify_iterated_det(const MapParams& params, const FaceModel& face, Vec3 x, int n,
                               double rel_tol, double fd_step) {
    if (n < 0) throw DomainError("iterate count must be nonnegative");
    const double log_c = std::log(distortion_constant(face));
    double log_lhs = 0.0;
    Vec3 cur = x;
    for (int k = 0; k < n; ++k) {
        const Jacobian jac = jacobian_fd(params, cur, fd_step);
        log_lhs = (jac.det_scaled() > 0.0) ? log_lhs + jac.log_abs_det() : -kInf;
        cur = zorich_eval(params, cur);
    }
    BoundCheck r;
    r.log_lhs = log_lhs;
    r.log_rhs = static_cast<double>(n) * (std::log(params.lambda) - log_c) +
                3.0 * std::log(norm(plane_part(cur))) - 3.0 * std::log(params.lambda);
    r.ok = r.log_lhs >= r.log_rhs + std::log1p(-rel_tol);
    return r;
}

AscentResult ascent_constant(const MapParams& params, double epsilon, int n_checks,
                             std::uint64_t seed) {
    const double lambda = params.lambda;
    if (!(epsilon > 0.0) || !(epsilon < lambda)) {
        throw DomainError("epsilon must lie in (0, lambda)");
    }
    const auto circle_min = [&](double rho) {
        double m = kInf;
        for (int k = 0; k < 720; ++k) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / 720.0;
            m = std::min(m, face_eval(params, {rho * std::cos(ang), rho * std::sin(ang)}).x3);
        }
        return m;
    };
    const double floor_value = lambda - epsilon;
    const auto tall_enough = [&](double rho) { return circle_min(rho) > floor_value; };

    AscentResult result;
    if (tall_enough(lambda * (1.0 - 1e-12))) {
        result.delta = lambda;
    } else {
        double lo = 0.0, hi = lambda;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (tall_enough(mid) ? lo : hi) = mid;
        }
        result.delta = lo;
    }
    result.c = 1.0 + std::log(params.nu * floor_value);

    // Margin of height(Z(x)) - height(x) - c over the cone, worst near the
    // height where the exponential bound is tight.
    const double t_star = -std::log(params.nu * floor_value);
    double min_margin = kInf;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n_checks; ++i) {
        auto eng = detail::engine_for(seed, static_cast<std::uint64_t>(i));
        const double rho = result.delta * (1.0 - 1e-9) * std::sqrt(unif(eng));
        const double ang = 2.0 * std::numbers::pi * unif(eng);
        const Vec2 u{rho * std::cos(ang), rho * std::sin(ang)};
        const double t = (i == 0) ? t_star : t_star + 24.0 * (unif(eng) - 0.5);
        if (t > params.overflow_guard) continue;
        const double h3 = face_eval(params, u).x3;
        const double margin = params.nu * std::exp(t) * h3 - (t + result.c);
        min_margin = std::min(min_margin, margin);
    }
    result.min_margin = min_margin;
    result.ok = min_margin >= -1e-9 * std::max(1.0, std::abs(result.c));
    return result;
}

WallKind surface_wall(const MapParams& params, Vec2 u) {
    const double lambda = params.lambda;
    const double tol = 1e-9 * lambda;
    const double s = coord_s(u);
    const double d = coord_d(u);
    if (std::abs(s) > 2.0 * lambda + tol || d < -tol || d > 2.0 * lambda + tol) {
        throw DomainError("point outside the core beam cross section");
    }
    const FoldResult f = fold_plane(u, lambda);
    const Vec3 h = face_eval(params, f.u);
    if (h.x2 >= 0.0 && h.x1 >= h.x2) return WallKind::SumPlus;
    if (h.x2 <= 0.0 && h.x1 >= 0.0) return WallKind::Diff;
    if (h.x1 <= 0.0 && h.x2 <= h.x1) return WallKind::SumMinus;
    throw DomainError("image direction not covered by the wall regions");
}

double level_surface_height(const MapParams& params, int n, Vec2 u) {
    if (n < 0) throw DomainError("surface index must be nonnegative");
    const WallKind wall = surface_wall(params, u);
    const FoldResult f = fold_plane(u, params.lambda);
    const Vec3 h = face_eval(params, f.u);
    double combo = 0.0;
    switch (wall) {
        case WallKind::SumPlus: combo = h.x1 + h.x2; break;
        case WallKind::Diff: combo = h.x1 - h.x2; break;
        case WallKind::SumMinus: combo = -(h.x1 + h.x2); break;
    }
    if (!(combo > 1e-12 * params.lambda)) throw SingularSurfacePoint(u);
    return std::log(2.0 * static_cast<double>(n + 1) * params.lambda / (params.nu * combo));
}

namespace {

template <typename F>
double core_beam_quadrature(const MapParams& params, int res, F&& integrand) {
    if (res < 2) throw DomainError("quadrature resolution must be at least 2");
    const double lambda = params.lambda;
    const double ds = 4.0 * lambda / static_cast<double>(res);
    const double dd = 2.0 * lambda / static_cast<double>(res);
    const double cell_area = 0.5 * ds * dd;  // (s,d) -> (x1,x2) halves areas
    const Vec2 singular[3] = {{0.0, 0.0}, {2.0 * lambda, 0.0}, {0.0, -2.0 * lambda}};
    const double notch = 1e-6 * lambda;
    double sum = 0.0;
    for (int a = 0; a < res; ++a) {
        const double s = -2.0 * lambda + (static_cast<double>(a) + 0.5) * ds;
        for (int b = 0; b < res; ++b) {
            const double d = (static_cast<double>(b) + 0.5) * dd;
            const Vec2 u = from_sd(s, d);
            bool skip = false;
            for (const Vec2& sing : singular) {
                if (norm(u - sing) < notch) skip = true;
            }
            if (skip) continue;
            try {
                sum += integrand(u);
            } catch (const SingularSurfacePoint&) {
                // treated like the notch: measure-zero corner spikes
            }
        }
    }
    return sum * cell_area;
}

}  // namespace

double volume_In(const MapParams& params, int n, int quad_resolution) {
    return core_beam_quadrature(params, quad_resolution, [&](Vec2 u) {
        return level_surface_height(params, n, u);
    });
}

VolumeTn volume_Tn(const MapParams& params, int n, int quad_resolution) {
    VolumeTn v;
    v.numeric = core_beam_quadrature(params, quad_resolution, [&](Vec2 u) {
        return level_surface_height(params, n + 1, u) - level_surface_height(params, n, u);
    });
    v.formula = 4.0 * params.lambda * params.lambda * std::log1p(1.0 / static_cast<double>(n + 1));
    return v;
}

LipschitzCheck verify_lipschitz_iterates(const MapParams& params, const FaceModel& face,
                                         double r, int n, int n_pairs, std::uint64_t seed,
                                         double rel_tol) {
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
    if (n < 1) throw DomainError("iterate count must be positive");
    if (n_pairs < 1) throw DomainError("check needs pairs");

    const double kappa_eff = params.nu * params.lambda * face_max_norm(params);
    const ExpOrbit chain = exp_iter({kappa_eff}, r, n, params.overflow_guard);
    const int n_eff = std::min(n, static_cast<int>(chain.values.size()) - 1);
    double log_bound =
        static_cast<double>(n_eff) * std::log(std::max(face.l_hat, params.lambda) / params.lambda);
    for (int k = 1; k <= n_eff; ++k) log_bound += std::log(chain.values[static_cast<std::size_t>(k)]);

    LipschitzCheck check;
    check.n_effective = n_eff;
    double worst_log = -kInf;
    for (int i = 0; i < n_pairs; ++i) {
        auto eng = detail::engine_for(seed, static_cast<std::uint64_t>(i));
        const Vec3 y1 = random_in_ball(eng, r);
        const Vec3 y2 = random_in_ball(eng, r);
        const double dy = norm(y1 - y2);
        if (dy < 1e-14) continue;
        Vec3 a = y1, b = y2;
        bool skipped = false;
        for (int k = 0; k < n_eff; ++k) {
            try {
                a = zorich_eval(params, a);
                b = zorich_eval(params, b);
            } catch (const HeightOverflow&) {
                skipped = true;
                break;
            }
        }
        if (skipped) continue;
        worst_log = std::max(worst_log, std::log(norm(a - b)) - log_bound - std::log(dy));
    }
    check.worst_ratio = std::exp(std::min(worst_log, 700.0));
    check.ok = check.worst_ratio <= 1.0 + rel_tol;
    return check;
}

bool key_inequality_holds(double c, double lambda, double nu) {
    if (std::isinf(c)) return c > 0.0;
    if (!(c + lambda > 0.0)) return false;
    const double lg = std::log(c + lambda);
    const double lhs = (lg + 1.0) * lg + (c + lambda) + 2.0 * std::log(nu * lambda) -
                       0.5 * nu * lambda * std::exp(c);
    return lhs <= std::log(lambda);
}

KeyInequality key_inequality_N(const MapParams& params) {
    const double kappa = params.nu * params.lambda;
    double t = 0.0;
    for (int n = 1; n <= 1000; ++n) {
        t = kappa * std::exp(t);
        const double c = t - params.lambda;
        if (key_inequality_holds(c, params.lambda, params.nu)) {
            bool onward = true;
            double tt = t;
            for (int j = 0; j < 5; ++j) {
                tt = kappa * std::exp(tt);
                if (!key_inequality_holds(tt - params.lambda, params.lambda, params.nu)) {
                    onward = false;
                    break;
                }
            }
            return {n, c, onward};
        }
    }
    throw DomainError("height sequence never satisfies the shell-capacity inequality");
}

BallInclusionCheck verify_ball_inclusion(const MapParams& params, double M, double alpha_hat,
                                         int n_triples, std::uint64_t seed) {
    if (!(alpha_hat > 0.0)) throw DomainError("contraction factor must be positive");
    if (n_triples < 1) throw DomainError("check needs triples");
    const double threshold = params.nu * params.lambda * std::exp(M);
    BallInclusionCheck check;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n_triples; ++i) {
        auto eng = detail::engine_for(seed, static_cast<std::uint64_t>(i));
        Vec3 x{};
        bool found = false;
        for (int tries = 0; tries < 200 && !found; ++tries) {
            const Vec2 u{params.lambda * 0.98 * (2.0 * unif(eng) - 1.0),
                         params.lambda * 0.98 * (2.0 * unif(eng) - 1.0)};
            const double x3 = M + 0.2 + 2.8 * unif(eng);
            const double img_h = params.nu * std::exp(x3) * face_eval(params, u).x3;
            if (img_h > 1.02 * threshold) {
                x = {u.x1, u.x2, x3};
                found = true;
            }
        }
        if (!found) continue;
        const Vec3 z = zorich_eval(params, x);
        const double radius = 0.02 * threshold * alpha_hat * std::pow(10.0, -2.0 * unif(eng));
        const Vec3 y = z + random_in_ball(eng, radius / alpha_hat);
        if (!(y.x3 > threshold)) continue;
        ++check.triples_used;
        const double q = norm(cell_inverse(params, y) - x) / radius;
        check.worst = std::max(check.worst, q);
        if (q > 1.0 + 1e-9) ++check.failures;
    }
    return check;
}

namespace {

std::string param_tag(const MapParams& p) {
    std::ostringstream os;
    os << "lambda=" << p.lambda << " nu=" << p.nu;
    return os.str();
}

}  // namespace

std::vector<CheckRecord> run_verification_suite(const MapParams& params, const FaceModel& face,
                                                const SuiteOptions& options) {
    std::vector<CheckRecord> records;
    const std::string tag = param_tag(params);
    const double kappa = params.nu * params.lambda;
    const double h_hi = std::min(0.5, 1.0 - std::log(std::max(kappa, 1e-12)));
    const double h_lo = h_hi - 3.5;

    {  // pointwise determinant lower bound, in logs
        CheckRecord rec{"det_pointwise", tag + " samples=" + std::to_string(options.n_samples)};
        double worst = kInf;
        std::mt19937_64 eng(options.seed);
        for (int i = 0; i < options.n_samples; ++i) {
            const Vec3 x = sample_seam_distant(params, eng, h_lo, h_hi);
            const BoundCheck b = verify_single_det(params, face, x);
            const double margin = b.log_lhs - b.log_rhs;
            if (margin < worst) {
                worst = margin;
                rec.lhs = b.log_lhs;
                rec.rhs = b.log_rhs;
                rec.worst_point = x;
            }
        }
        rec.ok = worst >= std::log1p(-1e-3);
        records.push_back(rec);
    }

    {  // iterated determinant bound over 3 steps, in logs
        CheckRecord rec{"det_iterated", tag + " n=3 samples=" + std::to_string(options.n_pairs)};
        double worst = kInf;
        std::mt19937_64 eng(options.seed + 1);
        int used = 0;
        for (int i = 0; i < options.n_pairs; ++i) {
            for (int tries = 0; tries < 200; ++tries) {
                const Vec3 x = sample_seam_distant(params, eng, h_lo, h_hi);
                try {
                    const BoundCheck b = verify_iterated_det(params, face, x, 3);
                    const double margin = b.log_lhs - b.log_rhs;
                    if (margin < worst) {
                        worst = margin;
                        rec.lhs = b.log_lhs;
                        rec.rhs = b.log_rhs;
                        rec.worst_point = x;
                    }
                    ++used;
                    break;
                } catch (const SeamContact&) {
                } catch (const HeightOverflow&) {
                }
            }
        }
        rec.ok = used > 0 && worst >= std::log1p(-1e-3);
        records.push_back(rec);
    }

    {  // cone ascent margin
        CheckRecord rec{"ascent", tag + " epsilon=0.05*lambda"};
        const AscentResult a = ascent_constant(params, 0.05 * params.lambda,
                                               options.n_samples, options.seed + 2);
        rec.lhs = a.min_margin;
        rec.rhs = 0.0;
        rec.ok = a.ok;
        records.push_back(rec);
    }

    {  // shell volumes against the closed form
        CheckRecord rec{"volume_shells", tag + " n=0..5 res=128"};
        double worst = 0.0;
        for (int n = 0; n <= 5; ++n) {
            const VolumeTn v = volume_Tn(params, n, 128);
            worst = std::max(worst, std::abs(v.numeric - v.formula) / v.formula);
        }
        rec.lhs = worst;
        rec.rhs = 1e-6;
        rec.ok = worst <= 1e-6;
        records.push_back(rec);
    }

    {  // chained stretch bound
        CheckRecord rec{"lipschitz_iterates", tag + " r=0.5 n=3"};
        const LipschitzCheck c = verify_lipschitz_iterates(params, face, 0.5, 3,
                                                           options.n_pairs, options.seed + 3);
        rec.lhs = c.worst_ratio;
        rec.rhs = 1.0 + 1e-3;
        rec.ok = c.ok;
        records.push_back(rec);
    }

    {  // shell-capacity step count
        CheckRecord rec{"key_inequality", tag};
        const KeyInequality k = key_inequality_N(params);
        rec.lhs = static_cast<double>(k.n);
        rec.rhs = std::isinf(k.c) ? kInf : std::log(k.c + params.lambda) + 2.0;
        rec.ok = k.holds_onward && rec.lhs <= rec.rhs;
        records.push_back(rec);
    }

    {  // inverse-branch contraction and ball inclusion
        CheckRecord rec{"contraction", tag};
        const double m0 = find_contraction_threshold(params, options.n_pairs * 5,
                                                     options.seed + 4);
        const double alpha = estimate_contraction(params, m0, options.n_pairs * 5,
                                                  options.seed + 4);
        rec.params += " M0=" + std::to_string(m0);
        rec.lhs = alpha;
        rec.rhs = 0.95;
        rec.ok = alpha > 0.0 && alpha < 0.95;
        records.push_back(rec);

        CheckRecord ball{"ball_inclusion", tag + " M0=" + std::to_string(m0)};
        const BallInclusionCheck b = verify_ball_inclusion(params, m0, alpha,
                                                           options.n_pairs, options.seed + 5);
        ball.lhs = b.worst;
        ball.rhs = 1.0;
        ball.ok = b.triples_used > 0 && b.failures == 0;
        records.push_back(ball);
    }

    {  // the plane map matches the spatial map through the chart
        CheckRecord rec{"plane_conjugacy", tag + " samples=" + std::to_string(options.n_samples)};
        std::mt19937_64 eng(options.seed + 6);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < options.n_samples; ++i) {
            const PlanarPoint z{-2.0 + 3.5 * unif(eng),
                                2.0 * std::numbers::sqrt2 * unif(eng)};
            const PlanarPoint via_plane = g_eval(params, z);
            const PlanarPoint via_space = plane_embed(params, zorich_eval(params, plane_lift(params, z)));
            const double err = norm(via_plane - via_space) / std::max(1.0, norm(via_plane));
            if (err > worst) {
                worst = err;
                rec.worst_point = plane_lift(params, z);
            }
        }
        rec.lhs = worst;
        rec.rhs = 1e-9;
        rec.ok = worst <= 1e-9;
        records.push_back(rec);
    }

    {  // plane Jacobian determinant lower bound
        CheckRecord rec{"plane_det_lower", tag + " samples=" + std::to_string(options.n_samples)};
        std::mt19937_64 eng(options.seed + 7);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double worst = kInf;
        const double step = 1e-6;
        int used = 0;
        for (int i = 0; i < options.n_samples; ++i) {
            const PlanarPoint z{-1.5 + 3.0 * unif(eng),
                                2.0 * std::numbers::sqrt2 * unif(eng)};
            const double seam = std::numbers::sqrt2 *
                                std::abs(std::remainder(z.y / std::numbers::sqrt2 - 1.0, 2.0));
            if (seam <= 4.0 * step) continue;
            const double det = std::abs(planar_det_fd(params, z, step));
            const double bound = params.nu * params.nu * params.lambda *
                                 std::exp(2.0 * params.lambda * z.x) / face.l_hat;
            const double ratio = det / bound;
            if (ratio < worst) {
                worst = ratio;
                rec.worst_point = plane_lift(params, z);
            }
            ++used;
        }
        rec.lhs = worst;
        rec.rhs = 1.0 - 1e-3;
        rec.ok = used > 0 && worst >= 1.0 - 1e-3;
        records.push_back(rec);
    }

    {  // strip areas from curve quadrature against the closed form
        CheckRecord rec{"strip_areas", tag + " m=1..3"};
        double worst = 0.0;
        for (int m = 1; m <= 3; ++m) {
            const auto lo = gamma_m_curve(params, m, 2001, 1e-6);
            const auto hi = gamma_m_curve(params, m + 1, 2001, 1e-6);
            double area = 0.0;
            for (std::size_t k = 0; k + 1 < lo.size(); ++k) {
                const double w = lo[k + 1].y - lo[k].y;
                area += 0.5 * w * ((hi[k].x - lo[k].x) + (hi[k + 1].x - lo[k + 1].x));
            }
            const double formula = planar_area_Am(params.lambda, m);
            worst = std::max(worst, std::abs(area - formula) / formula);
        }
        rec.lhs = worst;
        rec.rhs = 1e-2;
        rec.ok = worst <= 1e-2;
        records.push_back(rec);
    }

    return records;
}

}  // namespace zorich
