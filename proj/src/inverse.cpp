#include "zorich/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zorich/sampling.hpp"

namespace zorich {

namespace {

const char* kWedgeNames[4] = {"{s>0, d>0}", "{s>0, d<0}", "{s<0, d<0}", "{s<0, d>0}"};

struct Unfold {
    double t = 0.0;
    int parity = 0;
};

// All preimages of u under the 1D fold that land in [lo - tol, hi + tol]:
// translates u + 4*lambda*k and reflections 2*lambda*(2k+1) - u.
void unfold_candidates(double u, double lambda, double lo, double hi, double tol,
                       std::vector<Unfold>& out) {
    out.clear();
    const double period = 4.0 * lambda;
    const double a = lo - tol;
    const double b = hi + tol;
    const auto push_range = [&](double base, int parity) {
        const long long k_lo = static_cast<long long>(std::ceil((a - base) / period - 1e-12));
        const long long k_hi = static_cast<long long>(std::floor((b - base) / period + 1e-12));
        for (long long k = k_lo; k <= k_hi; ++k) {
            const double t = base + period * static_cast<double>(k);
            if (t >= a && t <= b) out.push_back({t, parity});
        }
    };
    push_range(u, 0);
    push_range(2.0 * lambda - u, 1);
}

void require_finite_target(Vec3 y) {
    if (!std::isfinite(y.x1) || !std::isfinite(y.x2) || !std::isfinite(y.x3)) {
        throw DomainError("inverse branch target must be finite");
    }
}

}  // namespace

Vec2 beam_center(BeamIndex b, double lambda) {
    const double s = (2.0 * static_cast<double>(b.i) + 1.0) * lambda;
    const double d = (2.0 * static_cast<double>(b.j) + 1.0) * lambda;
    return from_sd(s, d);
}

bool in_beam_closure(Vec2 x, BeamIndex b, double lambda, double tol) {
    const double s = coord_s(x);
    const double d = coord_d(x);
    const double s_lo = 2.0 * lambda * static_cast<double>(b.i);
    const double d_lo = 2.0 * lambda * static_cast<double>(b.j);
    return s >= s_lo - tol && s <= s_lo + 2.0 * lambda + tol && d >= d_lo - tol &&
           d <= d_lo + 2.0 * lambda + tol;
}

int wedge_of(Vec2 x) {
    const double s = coord_s(x);
    const double d = coord_d(x);
    if (s > 0.0) return d > 0.0 ? 0 : 1;
    return d > 0.0 ? 3 : 2;
}

bool in_wedge_closure(Vec2 x, int wedge, double tol) {
    const double s = coord_s(x);
    const double d = coord_d(x);
    switch (wedge) {
        case 0: return s >= -tol && d >= -tol;
        case 1: return s >= -tol && d <= tol;
        case 2: return s <= tol && d <= tol;
        case 3: return s <= tol && d >= -tol;
        default: throw DomainError("wedge index must be 0..3");
    }
}

int beam_wedge(const MapParams& params, BeamIndex b) {
    const double lambda = params.lambda;
    const double s_c = (2.0 * static_cast<double>(b.i) + 1.0) * lambda;
    const double d_c = (2.0 * static_cast<double>(b.j) + 1.0) * lambda;
    constexpr double kOffsets[][2] = {{0.6, 0.2},   {0.3, -0.5}, {-0.4, 0.3},
                                      {0.2, 0.7},   {-0.55, -0.25}, {0.45, 0.45}};
    for (const auto& off : kOffsets) {
        const Vec2 probe = from_sd(s_c + off[0] * lambda, d_c + off[1] * lambda);
        const Vec3 w = zorich_eval(params, {probe.x1, probe.x2, 0.0});
        const double s_w = coord_s(w);
        const double d_w = coord_d(w);
        if (std::min(std::abs(s_w), std::abs(d_w)) > 1e-9 * std::max(1.0, norm(w))) {
            return wedge_of(plane_part(w));
        }
    }
    throw DomainError("beam image wedge could not be determined from probes");
}

Vec3 cell_inverse(const MapParams& params, Vec3 y) {
    require_finite_target(y);
    if (!(y.x3 > 0.0)) {
        throw DomainError("central-cell inverse branch needs a point with positive height");
    }
    const double r = norm(y);
    const Vec2 u = face_invert_ray(params, y);
    const Vec3 h = face_eval(params, u);
    const double x3 = std::log(r / (params.nu * norm(h)));
    return {u.x1, u.x2, x3};
}

Vec3 branch_inverse(const MapParams& params, BeamIndex beam, Vec3 y) {
    require_finite_target(y);
    const double r = norm(y);
    if (!(r > 0.0)) throw DomainError("inverse branch target must be nonzero");
    const double lambda = params.lambda;
    const int wedge = beam_wedge(params, beam);
    const double adm_tol = 1e-9 * std::max(1.0, r);
    if (!in_wedge_closure(plane_part(y), wedge, adm_tol)) {
        throw DomainError(std::string("target lies outside the beam's image wedge closure ") +
                          kWedgeNames[wedge]);
    }

    const Vec3 upward{y.x1, y.x2, std::abs(y.x3)};
    const Vec2 u = face_invert_ray(params, upward);
    const Vec3 h = face_eval(params, u);
    const double x3 = std::log(r / (params.nu * norm(h)));
    const int target_parity = (y.x3 >= 0.0) ? 0 : 1;

    // Bounding box of the beam in the unrotated coordinates.
    const double fi = static_cast<double>(beam.i);
    const double fj = static_cast<double>(beam.j);
    const double lo1 = (fi + fj) * lambda, hi1 = (fi + fj + 2.0) * lambda;
    const double lo2 = (fi - fj - 1.0) * lambda, hi2 = (fi - fj + 1.0) * lambda;
    const double box_tol = 1e-9 * lambda * (2.0 + std::abs(fi) + std::abs(fj));

    std::vector<Unfold> c1, c2;
    unfold_candidates(u.x1, lambda, lo1, hi1, box_tol, c1);
    unfold_candidates(u.x2, lambda, lo2, hi2, box_tol, c2);
    const auto by_t = [](const Unfold& a, const Unfold& b) { return a.t < b.t; };
    std::sort(c1.begin(), c1.end(), by_t);
    std::sort(c2.begin(), c2.end(), by_t);

    const bool sign_free = (y.x3 == 0.0);
    for (int pass = 0; pass < (sign_free ? 2 : 1); ++pass) {
        const int want = (target_parity + pass) & 1;
        for (const Unfold& a : c1) {
            for (const Unfold& b : c2) {
                if (((a.parity + b.parity) & 1) != want) continue;
                if (!in_beam_closure({a.t, b.t}, beam, lambda, box_tol)) continue;
                const Vec3 x{a.t, b.t, x3};
                const Vec3 z = zorich_eval(params, x);
                if (norm(z - y) <= 1e-6 * std::max(1.0, r)) return x;
            }
        }
    }
    throw DomainError("no unfolded preimage lands in the requested beam");
}

double estimate_contraction(const MapParams& params, double M, int n_pairs,
                            std::uint64_t seed) {
    if (n_pairs < 1) throw DomainError("contraction estimate needs pairs");
    const double threshold = params.nu * params.lambda * std::exp(M);
    if (!std::isfinite(threshold)) throw DomainError("height threshold overflows");
    const double band_top = 12.0;  // master sample band: heights in nu*lambda*e^[0, 12]
    double worst = 0.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n_pairs); ++i) {
        auto eng = detail::engine_for(seed, i);
        const double h_a = params.nu * params.lambda * std::exp(band_top * unif(eng));
        const Vec3 a{h_a * (3.0 * unif(eng) - 1.5), h_a * (3.0 * unif(eng) - 1.5), h_a};
        Vec3 b;
        if (i % 3 == 0) {
            const double h_b = params.nu * params.lambda * std::exp(band_top * unif(eng));
            b = {h_b * (3.0 * unif(eng) - 1.5), h_b * (3.0 * unif(eng) - 1.5), h_b};
        } else {
            const double scale = (i % 3 == 1) ? std::pow(10.0, -3.0 * unif(eng)) : 1e-5;
            const double phi = 2.0 * std::numbers::pi * unif(eng);
            const double cz = 2.0 * unif(eng) - 1.0;
            const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
            const Vec3 dir{sz * std::cos(phi), sz * std::sin(phi), cz};
            b = a + (scale * h_a) * dir;
        }
        if (!(a.x3 > threshold) || !(b.x3 > threshold)) continue;
        const double dy = norm(a - b);
        if (dy < 1e-300) continue;
        const double dx = norm(cell_inverse(params, a) - cell_inverse(params, b));
        worst = std::max(worst, dx / dy);
    }
    return worst;
}

double find_contraction_threshold(const MapParams& params, int n_pairs, std::uint64_t seed,
                                  double alpha_target) {
    for (double m = 0.0; m <= 11.5; m += 0.5) {
        const double alpha = estimate_contraction(params, m, n_pairs, seed);
        if (alpha > 0.0 && alpha < alpha_target) return m;
    }
    throw DomainError("no contracting height threshold found in the sampled band");
}

std::vector<Vec3> pullback_orbit(const MapParams& params, std::span<const BeamIndex> word,
                                 Vec3 y) {
    if (word.empty()) throw DomainError("pullback needs a nonempty word");
    std::vector<Vec3> orbit(word.size());
    Vec3 cur = y;
    for (int k = static_cast<int>(word.size()) - 1; k >= 0; --k) {
        try {
            cur = branch_inverse(params, word[static_cast<std::size_t>(k)], cur);
        } catch (const DomainError& e) {
            throw InadmissibleStep(k, std::string("pullback step ") + std::to_string(k) +
                                          ": " + e.what());
        }
        orbit[static_cast<std::size_t>(k)] = cur;
    }
    return orbit;
}

}  // namespace zorich
