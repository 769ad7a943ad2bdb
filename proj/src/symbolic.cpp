#include "zorich/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace zorich {

TileIndex beam_index(Vec3 x, double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    const double s = coord_s(x);
    const double d = coord_d(x);
    TileIndex t;
    t.i = static_cast<long long>(std::ceil((s - 2.0 * lambda) / (4.0 * lambda)));
    t.j = static_cast<long long>(std::floor((d + 2.0 * lambda) / (4.0 * lambda)));
    return t;
}

TileIndex coarse_tile_of_beam(BeamIndex b) {
    const auto half_up = [](long long v) {
        // floor((v + 1) / 2) for either sign
        return (v >= -1) ? (v + 1) / 2 : -((-v) / 2);
    };
    return {half_up(b.i), half_up(b.j)};
}

Itinerary itinerary(const MapParams& params, Vec3 x, int n_steps) {
    if (n_steps < 0) throw DomainError("step count must be nonnegative");
    Itinerary it;
    it.symbols.reserve(static_cast<std::size_t>(n_steps) + 1);
    Vec3 cur = x;
    it.symbols.push_back(beam_index(cur, params.lambda));
    for (int k = 0; k < n_steps; ++k) {
        try {
            cur = zorich_eval(params, cur);
        } catch (const HeightOverflow&) {
            it.truncated = true;
            break;
        }
        it.symbols.push_back(beam_index(cur, params.lambda));
    }
    return it;
}

Classification classify_point(const MapParams& params, Vec3 x, int horizon,
                              double escape_radius) {
    if (horizon < 1) throw DomainError("horizon must be positive");
    if (!(escape_radius > 0.0)) throw DomainError("escape radius must be positive");

    Classification c;
    double heights[3] = {x.x3, x.x3, x.x3};
    int recorded = 0;
    Vec3 cur = x;
    for (int k = 1; k <= horizon; ++k) {
        bool overflowed = false;
        try {
            cur = zorich_eval(params, cur);
        } catch (const HeightOverflow& e) {
            overflowed = true;
            heights[recorded % 3] = e.height_value;
        }
        if (!overflowed) {
            heights[recorded % 3] = cur.x3;
        }
        ++recorded;
        if (overflowed || norm(cur) > escape_radius) {
            const int have = std::min(recorded, 3);
            bool increasing = true;
            for (int m = 1; m < have; ++m) {
                const int newer = (recorded - 1 - (m - 1)) % 3;
                const int older = (recorded - 1 - m) % 3;
                if (!(heights[newer] > heights[older])) increasing = false;
            }
            c.final_height = heights[(recorded - 1) % 3];
            if (increasing) {
                c.verdict = Verdict::Escaping;
                c.first_escape = k;
            }
            return c;
        }
    }
    c.final_height = cur.x3;
    const double box = std::max(2.0 * params.lambda,
                                std::numbers::e * params.nu * params.lambda);
    if (norm(cur) <= box) c.verdict = Verdict::Bounded;
    return c;
}

PeriodicResult periodic_point(const MapParams& params, std::span<const BeamIndex> word,
                              double tol, int max_rounds) {
    if (word.empty()) throw DomainError("word must be nonempty");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

    const double internal_tol = tol * 2e-1;
    PeriodicResult result;
    Vec3 cur{0.0, 0.0, params.nu * params.lambda * std::exp(4.0)};
    for (int round = 0; round < max_rounds; ++round) {
        const Vec3 next = pullback_orbit(params, word, cur).front();
        result.rounds = round + 1;
        const double delta = norm(next - cur);
        cur = next;
        if (delta < internal_tol) {
            result.converged = true;
            break;
        }
    }
    result.point = cur;
    Vec3 fwd = cur;
    for (std::size_t k = 0; k < word.size(); ++k) fwd = zorich_eval(params, fwd);
    result.residual = norm(fwd - cur);
    return result;
}

std::vector<std::vector<Vec3>> gamma_k_curves(const MapParams& params, int k_max,
                                              int n_points, double s_lo, double s_hi) {
    if (k_max < 0) throw DomainError("curve count must be nonnegative");
    if (n_points < 2) throw DomainError("need at least two sample points");
    std::vector<std::vector<Vec3>> curves;
    curves.reserve(static_cast<std::size_t>(k_max) + 1);

    std::vector<Vec3> axis;
    axis.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double s = s_lo + (s_hi - s_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_points - 1);
        axis.push_back({0.0, 0.0, -std::exp(s)});
    }
    curves.push_back(std::move(axis));

    const BeamIndex central{0, 0};
    for (int k = 1; k <= k_max; ++k) {
        const std::vector<Vec3>& prev = curves.back();
        std::vector<Vec3> next;
        next.reserve(prev.size());
        for (const Vec3& y : prev) next.push_back(branch_inverse(params, central, y));
        curves.push_back(std::move(next));
    }
    return curves;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
};

}  // namespace

GridComponents escaping_grid_components(const MapParams& params, int resolution,
                                        double box_half_width, double height_lo,
                                        double height_hi, int horizon,
                                        double escape_radius) {
    if (resolution < 2) throw DomainError("grid resolution must be at least 2");
    if (!(box_half_width > 0.0) || !(height_hi > height_lo)) {
        throw DomainError("grid box is empty");
    }
    const std::size_t n = static_cast<std::size_t>(resolution);
    const std::size_t total = n * n * n;
    std::vector<std::uint8_t> escaping(total, 0);

    const auto coord = [&](std::size_t idx, double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(idx) + 0.5) / static_cast<double>(n);
    };
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                const Vec3 x{coord(a, -box_half_width, box_half_width),
                             coord(b, -box_half_width, box_half_width),
                             coord(c, height_lo, height_hi)};
                const Classification cls = classify_point(params, x, horizon, escape_radius);
                escaping[(a * n + b) * n + c] = cls.verdict == Verdict::Escaping ? 1 : 0;
            }
        }
    }

    UnionFind uf(total);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                const std::size_t idx = (a * n + b) * n + c;
                if (!escaping[idx]) continue;
                for (int da = -1; da <= 1; ++da) {
                    for (int db = -1; db <= 1; ++db) {
                        for (int dc = -1; dc <= 1; ++dc) {
                            if (da == 0 && db == 0 && dc == 0) continue;
                            const long long na = static_cast<long long>(a) + da;
                            const long long nb = static_cast<long long>(b) + db;
                            const long long nc = static_cast<long long>(c) + dc;
                            if (na < 0 || nb < 0 || nc < 0) continue;
                            if (na >= static_cast<long long>(n) ||
                                nb >= static_cast<long long>(n) ||
                                nc >= static_cast<long long>(n)) {
                                continue;
                            }
                            const std::size_t nidx =
                                (static_cast<std::size_t>(na) * n + static_cast<std::size_t>(nb)) * n +
                                static_cast<std::size_t>(nc);
                            if (escaping[nidx]) uf.unite(idx, nidx);
                        }
                    }
                }
            }
        }
    }

    std::vector<std::size_t> count(total, 0);
    GridComponents out;
    out.total_cells = total;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (!escaping[idx]) continue;
        ++out.escaping_cells;
        ++count[uf.find(idx)];
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (count[idx] > 0) out.sizes.push_back(count[idx]);
    }
    std::sort(out.sizes.rbegin(), out.sizes.rend());

    std::ostringstream note;
    note << "grid observation at resolution " << resolution << ": " << out.sizes.size()
         << " escaping component(s) among " << out.escaping_cells
         << " escaping cells; a sampled grid cannot distinguish one connected set "
            "from several components joined below the grid scale";
    out.note = note.str();
    return out;
}

bool in_core_beam(Vec3 x, double lambda, double tol) {
    const double s = coord_s(x);
    const double d = coord_d(x);
    return std::abs(s) <= 2.0 * lambda + tol && d >= -tol && d <= 2.0 * lambda + tol;
}

std::vector<Vec3> lambda_z_approx(const MapParams& params, int resolution,
                                  double height_lo, double height_hi, int horizon) {
    if (resolution < 2) throw DomainError("grid resolution must be at least 2");
    if (!(height_hi > height_lo)) throw DomainError("height window is empty");
    if (horizon < 1) throw DomainError("horizon must be positive");

    const double lambda = params.lambda;
    std::vector<Vec3> survivors;
    for (int a = 0; a < resolution; ++a) {
        const double s = -2.0 * lambda +
                         4.0 * lambda * (static_cast<double>(a) + 0.5) / static_cast<double>(resolution);
        for (int b = 0; b < resolution; ++b) {
            const double d = 2.0 * lambda * (static_cast<double>(b) + 0.5) /
                             static_cast<double>(resolution);
            for (int c = 0; c < resolution; ++c) {
                const double h = height_lo + (height_hi - height_lo) *
                                                 (static_cast<double>(c) + 0.5) /
                                                 static_cast<double>(resolution);
                const Vec2 u = from_sd(s, d);
                Vec3 x{u.x1, u.x2, h};
                bool stays = true;
                Vec3 cur = x;
                for (int k = 0; k < horizon && stays; ++k) {
                    try {
                        cur = zorich_eval(params, cur);
                    } catch (const HeightOverflow&) {
                        stays = false;
                        break;
                    }
                    if (!in_core_beam(cur, lambda, 1e-12 * lambda)) stays = false;
                }
                if (stays) survivors.push_back(x);
            }
        }
    }
    return survivors;
}

}  // namespace zorich
