#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zorich/symbolic.hpp"

namespace zorich {

enum class PlaneKind : std::uint8_t {
    Diagonal,      // x1 = x2; coordinates (u, v) = (sqrt(2) x1, x3)
    AntiDiagonal,  // x1 = -x2
    X3Const,
    X2Const,
    X1Const,
    General,
};

// Axis-aligned window in plane coordinates (u, v) on a 2-plane slice of
// space. For the named kinds the frame is filled in by validate(); a General
// slice supplies origin and an orthonormal frame directly.
struct SliceSpec {
    PlaneKind kind = PlaneKind::Diagonal;
    double offset = 0.0;  // the fixed coordinate for the const kinds
    Vec3 origin{};
    Vec3 e_u{};
    Vec3 e_v{};
    double u0 = -8.0;
    double u1 = 8.0;
    double v0 = -8.0;
    double v1 = 8.0;

    void validate();
    Vec3 point_at(double u, double v) const;
};

struct RasterGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> verdict;     // Verdict values, row-major, row 0 at top
    std::vector<std::int32_t> first_escape;
    std::vector<double> final_height;

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(i);
    }
};

struct RenderOptions {
    int horizon = 64;
    double escape_radius = 1e10;
    int n_threads = 1;
};

// Classifies every pixel centre of the slice window. Work is handed out in
// 64x64 tiles from a shared counter; output bytes are independent of the
// worker count.
RasterGrid render_slice(const MapParams& params, const SliceSpec& slice, int width,
                        int height, const RenderOptions& options);

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
};

inline constexpr std::array<Rgb, 32> kEscapePalette = {{
    {66, 30, 15},    {25, 7, 26},     {9, 1, 47},      {4, 4, 73},
    {0, 7, 100},     {12, 44, 138},   {24, 82, 177},   {57, 125, 209},
    {134, 181, 229}, {211, 236, 248}, {241, 233, 191}, {248, 201, 95},
    {255, 170, 0},   {204, 128, 0},   {153, 87, 0},    {106, 52, 3},
    {90, 14, 60},    {139, 29, 83},   {188, 44, 106},  {219, 83, 125},
    {237, 130, 143}, {245, 177, 161}, {250, 214, 184}, {229, 223, 196},
    {181, 202, 187}, {120, 170, 173}, {70, 130, 157},  {40, 91, 134},
    {22, 57, 108},   {11, 31, 81},    {52, 36, 90},    {96, 36, 84},
}};

Rgb escape_color(int first_escape);
Rgb verdict_color(Verdict verdict, int first_escape);

// Binary PPM (P6, maxval 255) of the verdict raster.
void write_ppm(const std::string& path, const RasterGrid& grid);

}  // namespace zorich
