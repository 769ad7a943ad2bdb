#include "zorich/render.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

namespace zorich {

namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

bool finite_frame(const Vec3& v) {
    return std::isfinite(v.x1) && std::isfinite(v.x2) && std::isfinite(v.x3);
}

}  // namespace

void SliceSpec::validate() {
    if (!(u1 > u0) || !(v1 > v0)) throw ConfigError("slice window is empty");
    switch (kind) {
        case PlaneKind::Diagonal:
            origin = {0.0, 0.0, 0.0};
            e_u = {kHalfSqrt2, kHalfSqrt2, 0.0};
            e_v = {0.0, 0.0, 1.0};
            break;
        case PlaneKind::AntiDiagonal:
            origin = {0.0, 0.0, 0.0};
            e_u = {kHalfSqrt2, -kHalfSqrt2, 0.0};
            e_v = {0.0, 0.0, 1.0};
            break;
        case PlaneKind::X3Const:
            origin = {0.0, 0.0, offset};
            e_u = {1.0, 0.0, 0.0};
            e_v = {0.0, 1.0, 0.0};
            break;
        case PlaneKind::X2Const:
            origin = {0.0, offset, 0.0};
            e_u = {1.0, 0.0, 0.0};
            e_v = {0.0, 0.0, 1.0};
            break;
        case PlaneKind::X1Const:
            origin = {offset, 0.0, 0.0};
            e_u = {0.0, 1.0, 0.0};
            e_v = {0.0, 0.0, 1.0};
            break;
        case PlaneKind::General: {
            if (!finite_frame(origin) || !finite_frame(e_u) || !finite_frame(e_v)) {
                throw ConfigError("slice frame must be finite");
            }
            const double tol = 1e-12;
            if (std::abs(norm(e_u) - 1.0) > tol || std::abs(norm(e_v) - 1.0) > tol ||
                std::abs(dot(e_u, e_v)) > tol) {
                throw ConfigError("slice frame must be orthonormal");
            }
            break;
        }
    }
}

Vec3 SliceSpec::point_at(double u, double v) const {
    return origin + u * e_u + v * e_v;
}

RasterGrid render_slice(const MapParams& params, const SliceSpec& slice, int width,
                        int height, const RenderOptions& options) {
    if (width < 1 || height < 1) throw ConfigError("raster must have positive size");
    if (options.horizon < 1) throw ConfigError("horizon must be positive");
    if (!(options.escape_radius > 0.0)) throw ConfigError("escape radius must be positive");
    const int n_threads = std::max(1, options.n_threads);

    RasterGrid grid;
    grid.width = width;
    grid.height = height;
    const std::size_t n_px = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    grid.verdict.assign(n_px, 0);
    grid.first_escape.assign(n_px, -1);
    grid.final_height.assign(n_px, 0.0);

    const double du = (slice.u1 - slice.u0) / static_cast<double>(width);
    const double dv = (slice.v1 - slice.v0) / static_cast<double>(height);

    constexpr int kTile = 64;
    const int tiles_x = (width + kTile - 1) / kTile;
    const int tiles_y = (height + kTile - 1) / kTile;
    const int n_tiles = tiles_x * tiles_y;
    std::atomic<int> next_tile{0};

    const auto worker = [&]() {
        for (;;) {
            const int tile = next_tile.fetch_add(1, std::memory_order_relaxed);
            if (tile >= n_tiles) return;
            const int tx = tile % tiles_x;
            const int ty = tile / tiles_x;
            const int i_end = std::min(width, (tx + 1) * kTile);
            const int j_end = std::min(height, (ty + 1) * kTile);
            for (int j = ty * kTile; j < j_end; ++j) {
                const double v = slice.v1 - (static_cast<double>(j) + 0.5) * dv;
                for (int i = tx * kTile; i < i_end; ++i) {
                    const double u = slice.u0 + (static_cast<double>(i) + 0.5) * du;
                    const Classification cls = classify_point(
                        params, slice.point_at(u, v), options.horizon, options.escape_radius);
                    const std::size_t idx = grid.index(i, j);
                    grid.verdict[idx] = static_cast<std::uint8_t>(cls.verdict);
                    grid.first_escape[idx] = cls.first_escape;
                    grid.final_height[idx] = cls.final_height;
                }
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return grid;
}

Rgb escape_color(int first_escape) {
    const int k = first_escape >= 0 ? first_escape : 0;
    return kEscapePalette[static_cast<std::size_t>(k % 32)];
}

Rgb verdict_color(Verdict verdict, int first_escape) {
    switch (verdict) {
        case Verdict::Bounded: return {255, 255, 255};
        case Verdict::Escaping: return escape_color(first_escape);
        case Verdict::Undecided: break;
    }
    return {0, 0, 0};
}

void write_ppm(const std::string& path, const RasterGrid& grid) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ConfigError("cannot open output file: " + path);
    std::fprintf(f, "P6\n%d %d\n255\n", grid.width, grid.height);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(grid.width) * 3);
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            const std::size_t idx = grid.index(i, j);
            const Rgb c = verdict_color(static_cast<Verdict>(grid.verdict[idx]),
                                        grid.first_escape[idx]);
            row[static_cast<std::size_t>(i) * 3 + 0] = c.r;
            row[static_cast<std::size_t>(i) * 3 + 1] = c.g;
            row[static_cast<std::size_t>(i) * 3 + 2] = c.b;
        }
        if (std::fwrite(row.data(), 1, row.size(), f) != row.size()) {
            std::fclose(f);
            throw ConfigError("short write to output file: " + path);
        }
    }
    std::fclose(f);
}

}  // namespace zorich
