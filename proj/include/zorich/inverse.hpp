#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zorich/map.hpp"

namespace zorich {

// Index of a beam: the open box s in (2*lambda*i, 2*lambda*(i+1)),
// d in (2*lambda*j, 2*lambda*(j+1)) in the rotated plane coordinates,
// crossed with all heights.
struct BeamIndex {
    long long i = 0;
    long long j = 0;
    friend bool operator==(BeamIndex, BeamIndex) = default;
};

Vec2 beam_center(BeamIndex b, double lambda);
bool in_beam_closure(Vec2 x, BeamIndex b, double lambda, double tol);

// Wedges: the four open quadrants of the plane in (s, d) coordinates.
// 0: s>0, d>0   1: s>0, d<0   2: s<0, d<0   3: s<0, d>0.
int wedge_of(Vec2 x);
bool in_wedge_closure(Vec2 x, int wedge, double tol);

// Image wedge of a beam, detected by evaluating the map at interior probes.
int beam_wedge(const MapParams& params, BeamIndex b);

// Inverse branch into the central cell: sends the open upper half-space
// (y3 > 0) into (-lambda, lambda)^2 x R.
Vec3 cell_inverse(const MapParams& params, Vec3 y);

// Inverse branch into the requested beam; y must lie in the closure of the
// beam's image wedge (either sign of y3).
Vec3 branch_inverse(const MapParams& params, BeamIndex beam, Vec3 y);

// Sampled Lipschitz constant of the central-cell inverse branch over points
// with height above nu*lambda*exp(M).  Pair streams are nested across M, so
// the estimate is nonincreasing in M for a fixed (n_pairs, seed).
double estimate_contraction(const MapParams& params, double M, int n_pairs, std::uint64_t seed);

// Smallest M on the grid {0, 0.5, 1, ...} with sampled contraction below
// alpha_target.
double find_contraction_threshold(const MapParams& params, int n_pairs, std::uint64_t seed,
                                  double alpha_target = 0.95);

// Backward orbit through the word's branches: returns x_0..x_{N-1} with
// Z(x_k) = x_{k+1}, Z(x_{N-1}) = y, and x_k in the closure of beam word[k].
// Throws InadmissibleStep carrying the failing position.
std::vector<Vec3> pullback_orbit(const MapParams& params, std::span<const BeamIndex> word,
                                 Vec3 y);

}  // namespace zorich
