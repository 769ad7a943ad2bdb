#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zorich/inverse.hpp"
#include "zorich/map.hpp"

namespace zorich {

// Index of the coarse plane tile containing a point. Tiles are the 4l-periodic
// translates of the half-open base tile S in (-2l, 2l], D in [-2l, 2l), so
// every plane point lies in exactly one tile.
struct TileIndex {
    long long i = 0;
    long long j = 0;
    bool operator==(const TileIndex&) const = default;
};

TileIndex beam_index(Vec3 x, double lambda);

// Fine beam (i,j) sits inside coarse tile (floor((i+1)/2), floor((j+1)/2)).
TileIndex coarse_tile_of_beam(BeamIndex b);

// Tile indices of x, Z(x), Z^2(x), ... for as long as the orbit stays finite.
struct Itinerary {
    std::vector<TileIndex> symbols;
    bool truncated = false;  // stopped early on overflow
};

Itinerary itinerary(const MapParams& params, Vec3 x, int n_steps);

enum class Verdict : std::uint8_t { Undecided = 0, Bounded = 1, Escaping = 2 };

struct Classification {
    Verdict verdict = Verdict::Undecided;
    int first_escape = -1;   // step at which the escape radius was exceeded
    double final_height = 0.0;
};

// Escaping: the orbit exceeded the escape radius (or overflowed) while the
// last few heights were strictly increasing. Bounded: the orbit survived the
// horizon and ended inside a fixed box around the origin.
Classification classify_point(const MapParams& params, Vec3 x, int horizon,
                              double escape_radius);

struct PeriodicResult {
    Vec3 point{};
    double residual = 0.0;   // |Z^p(point) - point| after the forward check
    int rounds = 0;
    bool converged = false;
};

// Fixed point of the composed inverse branches along the word, found by
// iterating the pullback from an axis seed. The word lists beams for
// x, Z(x), ..., Z^{p-1}(x); admissibility of each step is required.
PeriodicResult periodic_point(const MapParams& params, std::span<const BeamIndex> word,
                              double tol = 1e-11, int max_rounds = 2000000);

// Successive pullbacks of the negative vertical axis under the central-beam
// inverse branch. Curve 0 is the axis itself, sampled at heights -exp(s).
std::vector<std::vector<Vec3>> gamma_k_curves(const MapParams& params, int k_max,
                                              int n_points, double s_lo = -6.0,
                                              double s_hi = 10.0);

// Connected components (26-neighbour) of the escaping set on a grid slab,
// reported as component sizes in decreasing order.
struct GridComponents {
    std::vector<std::size_t> sizes;
    std::size_t escaping_cells = 0;
    std::size_t total_cells = 0;
    std::string note;
};

GridComponents escaping_grid_components(const MapParams& params, int resolution,
                                        double box_half_width, double height_lo,
                                        double height_hi, int horizon,
                                        double escape_radius);

bool in_core_beam(Vec3 x, double lambda, double tol = 0.0);

// Points of a grid over the core beam whose orbits survive the horizon
// without leaving the closed core beam: a sampled stand-in for the invariant
// ray of the central branch.
std::vector<Vec3> lambda_z_approx(const MapParams& params, int resolution,
                                  double height_lo, double height_hi, int horizon);

}  // namespace zorich
