#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "zorich/inverse.hpp"

using namespace zorich;

namespace {

MapParams sphere_params(double lambda = 2.0, double nu = 1.0) {
    MapParams p;
    p.lambda = lambda;
    p.nu = nu;
    return p;
}

// Random point of the open beam, away from the boundary.
Vec3 random_in_beam(std::mt19937_64& eng, BeamIndex b, double lambda, double h_lo,
                    double h_hi) {
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const double s = 2.0 * lambda * (static_cast<double>(b.i) + unif(eng));
    const double d = 2.0 * lambda * (static_cast<double>(b.j) + unif(eng));
    const Vec2 u = from_sd(s, d);
    return {u.x1, u.x2, h_lo + (h_hi - h_lo) * unif(eng)};
}

}  // namespace

TEST_CASE("beam geometry helpers") {
    CHECK(norm(beam_center({2, 2}, 2.0) - Vec2{10.0, 0.0}) <= 1e-15);
    CHECK(norm(beam_center({0, 0}, 2.0) - Vec2{2.0, 0.0}) <= 1e-15);
    CHECK(in_beam_closure({2.0, 0.0}, {0, 0}, 2.0, 0.0));
    CHECK_FALSE(in_beam_closure({-2.0, 0.0}, {0, 0}, 2.0, 1e-9));

    CHECK(wedge_of({1.0, 0.0}) == 0);
    CHECK(wedge_of({0.0, -1.0}) == 3);
    CHECK(wedge_of({-1.0, 0.0}) == 2);
    CHECK(wedge_of({0.0, 1.0}) == 1);
    CHECK(in_wedge_closure({1.0, 1.0}, 0, 0.0));
    CHECK_FALSE(in_wedge_closure({-1.0, -1.0}, 0, 1e-9));
}

TEST_CASE("image wedges of probe beams") {
    const MapParams p = sphere_params();
    // The image wedge depends only on the beam, not on lambda.
    const std::array<std::pair<BeamIndex, int>, 7> table{{
        {{0, 0}, 0},
        {{0, -1}, 1},
        {{1, 1}, 2},
        {{2, 2}, 0},
        {{3, 2}, 1},
        {{2, -3}, 1},
        {{-2, -2}, 0},
    }};
    for (const auto& [beam, wedge] : table) {
        CHECK(beam_wedge(p, beam) == wedge);
        CHECK(beam_wedge(sphere_params(5.0, 0.3), beam) == wedge);
    }
}

TEST_CASE("central cell inverse pinned values") {
    const MapParams p = sphere_params();
    // The positive vertical axis pulls back onto the axis.
    const Vec3 a = cell_inverse(p, {0.0, 0.0, 8.0});
    CHECK(a.x1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(a.x2 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(a.x3 == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK_THROWS_AS(cell_inverse(p, {0.0, 0.0, -1.0}), DomainError);
}

TEST_CASE("branch inverse pinned value on the negative axis") {
    const MapParams p = sphere_params();
    // The gamma-curve seed: the central branch sends (0,0,-t) to (2*lambda,0,...).
    const Vec3 x = branch_inverse(p, {0, 0}, {0.0, 0.0, -5.0});
    CHECK(x.x1 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(x.x2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(x.x3 == doctest::Approx(std::log(2.5)).epsilon(1e-12));
    const Vec3 y = zorich_eval(p, x);
    CHECK(norm(y - Vec3{0.0, 0.0, -5.0}) <= 1e-9);
}

TEST_CASE("branch inverse round trips across beams and parameters") {
    const std::array<BeamIndex, 7> beams{
        {{0, 0}, {2, 2}, {3, 2}, {2, -3}, {-2, -2}, {1, 1}, {0, -1}}};
    for (const MapParams& p : {sphere_params(), sphere_params(3.0, 0.5)}) {
        std::mt19937_64 eng(31);
        for (const BeamIndex& b : beams) {
            for (int i = 0; i < 60; ++i) {
                const Vec3 x = random_in_beam(eng, b, p.lambda, -2.0, 2.0);
                const Vec3 y = zorich_eval(p, x);
                const Vec3 back = branch_inverse(p, b, y);
                CHECK(norm(back - x) <= 1e-8 * std::max(1.0, norm(x)));
            }
        }
    }
}

TEST_CASE("branch inverse rejects points outside the image wedge") {
    const MapParams p = sphere_params();
    // Beam (0,0) maps into wedge 0; this target sits in wedge 2.
    CHECK_THROWS_AS(branch_inverse(p, {0, 0}, {-3.0, -3.0, 1.0}), DomainError);
}

TEST_CASE("contraction estimate shrinks as the band moves up") {
    const MapParams p = sphere_params(40.0, 0.4);
    const double a0 = estimate_contraction(p, 0.0, 800, 5);
    const double a2 = estimate_contraction(p, 2.0, 800, 5);
    const double a4 = estimate_contraction(p, 4.0, 800, 5);
    // Nested pair streams make the estimate monotone by construction.
    CHECK(a2 <= a0 + 1e-12);
    CHECK(a4 <= a2 + 1e-12);
    CHECK(a4 < 1.0);
}

TEST_CASE("contraction threshold in the expanding regime") {
    const MapParams p = sphere_params(40.0, 0.4);
    const double m0 = find_contraction_threshold(p, 1500, 7);
    CHECK(m0 >= 0.0);
    CHECK(m0 <= 6.0);
    CHECK(estimate_contraction(p, m0, 1500, 7) < 0.95);
}

TEST_CASE("pullback orbit follows the word") {
    const MapParams p = sphere_params();
    const std::array<BeamIndex, 2> word{{{2, 2}, {0, 0}}};
    const std::vector<Vec3> orbit = pullback_orbit(p, word, {0.0, 0.0, 30.0});
    REQUIRE(orbit.size() == 2);
    CHECK(in_beam_closure(plane_part(orbit[0]), {2, 2}, 2.0, 1e-9));
    CHECK(in_beam_closure(plane_part(orbit[1]), {0, 0}, 2.0, 1e-9));
    CHECK(norm(zorich_eval(p, orbit[0]) - orbit[1]) <= 1e-8 * norm(orbit[1]));
    CHECK(norm(zorich_eval(p, orbit[1]) - Vec3{0.0, 0.0, 30.0}) <= 1e-7 * 30.0);
}

TEST_CASE("pullback reports the inadmissible position") {
    const MapParams p = sphere_params();
    // Beam (0,0) maps into wedge 0 but beam (-2,-2) sits in wedge 2, so the
    // pullback of the first word position must fail.
    const std::array<BeamIndex, 2> word{{{0, 0}, {-2, -2}}};
    try {
        pullback_orbit(p, word, {0.0, 0.0, 30.0});
        FAIL("expected InadmissibleStep");
    } catch (const InadmissibleStep& e) {
        CHECK(e.step == 0);
    }
}
