#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "zorich/map.hpp"

using namespace zorich;

namespace {

MapParams sphere_params(double lambda = 2.0, double nu = 1.0) {
    MapParams p;
    p.lambda = lambda;
    p.nu = nu;
    return p;
}

Vec3 random_point(std::mt19937_64& eng, double lateral, double h_lo, double h_hi) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return {lateral * (2.0 * unif(eng) - 1.0), lateral * (2.0 * unif(eng) - 1.0),
            h_lo + (h_hi - h_lo) * unif(eng)};
}

}  // namespace

TEST_CASE("map pinned values") {
    const MapParams p = sphere_params();
    // One reflection in x1 flips the vertical component: (4,0,0) -> (0,0,-2).
    const Vec3 a = zorich_eval(p, {4.0, 0.0, 0.0});
    CHECK(a.x1 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.x2 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.x3 == doctest::Approx(-2.0).epsilon(1e-14));
    // The vertical axis maps up the axis with factor nu*lambda*exp(height).
    const Vec3 b = zorich_eval(p, {0.0, 0.0, 1.5});
    CHECK(b.x1 == 0.0);
    CHECK(b.x3 == doctest::Approx(2.0 * std::exp(1.5)).epsilon(1e-14));
}

TEST_CASE("image norm equals nu*lambda*exp(height) on the sphere face") {
    const MapParams p = sphere_params(2.0, 0.7);
    std::mt19937_64 eng(21);
    for (int i = 0; i < 2000; ++i) {
        const Vec3 x = random_point(eng, 10.0, -3.0, 3.0);
        const Vec3 y = zorich_eval(p, x);
        CHECK(norm(y) == doctest::Approx(0.7 * 2.0 * std::exp(x.x3)).epsilon(1e-12));
    }
}

TEST_CASE("double periodicity in the plane coordinates") {
    const MapParams p = sphere_params();
    std::mt19937_64 eng(22);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_point(eng, 6.0, -2.0, 2.0);
        const Vec3 y = zorich_eval(p, x);
        const Vec3 y1 = zorich_eval(p, x + Vec3{8.0, 0.0, 0.0});
        const Vec3 y2 = zorich_eval(p, x + Vec3{0.0, -8.0, 0.0});
        CHECK(norm(y1 - y) <= 1e-12 * norm(y));
        CHECK(norm(y2 - y) <= 1e-12 * norm(y));
    }
}

TEST_CASE("swap and vertical shift equivariance") {
    const MapParams p = sphere_params();
    std::mt19937_64 eng(23);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_point(eng, 6.0, -2.0, 2.0);
        const Vec3 y = zorich_eval(p, x);
        const Vec3 ys = zorich_eval(p, {x.x2, x.x1, x.x3});
        CHECK(ys.x1 == doctest::Approx(y.x2).epsilon(1e-13));
        CHECK(ys.x2 == doctest::Approx(y.x1).epsilon(1e-13));
        CHECK(ys.x3 == doctest::Approx(y.x3).epsilon(1e-13));
        const double s = unif(eng);
        const Vec3 yshift = zorich_eval(p, x + Vec3{0.0, 0.0, s});
        CHECK(norm(yshift - std::exp(s) * y) <= 1e-12 * std::exp(s) * norm(y));
    }
}

TEST_CASE("reflection across an odd plane flips the vertical image component") {
    const MapParams p = sphere_params();
    std::mt19937_64 eng(24);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_point(eng, 6.0, -2.0, 2.0);
        const Vec3 y = zorich_eval(p, x);
        const Vec3 yr = zorich_eval(p, {4.0 - x.x1, x.x2, x.x3});
        CHECK(yr.x1 == doctest::Approx(y.x1).epsilon(1e-12));
        CHECK(yr.x2 == doctest::Approx(y.x2).epsilon(1e-12));
        CHECK(yr.x3 == doctest::Approx(-y.x3).epsilon(1e-12));
    }
}

TEST_CASE("overflow guard") {
    const MapParams p = sphere_params();
    CHECK_THROWS_AS(zorich_eval(p, {0.0, 0.0, 701.0}), HeightOverflow);
    try {
        zorich_eval(p, {0.0, 0.0, 701.0});
    } catch (const HeightOverflow& e) {
        CHECK(e.height_value == doctest::Approx(701.0));
    }
    CHECK_THROWS_AS(zorich_eval(p, {std::nan(""), 0.0, 0.0}), DomainError);
}

TEST_CASE("orbit stop conditions") {
    const MapParams p = sphere_params();
    const OrbitTrace done = zorich_iterate(p, {4.0, 0.0, 0.0}, 3, 1e10);
    CHECK(done.stop == OrbitTrace::Stop::Completed);
    CHECK(done.points.size() == 4);
    CHECK(done.steps() == 3);

    const OrbitTrace esc = zorich_iterate(p, {0.0, 0.0, 3.0}, 50, 1e6);
    CHECK(esc.stop == OrbitTrace::Stop::Escaped);
    CHECK(norm(esc.points.back()) > 1e6);

    const OrbitTrace ovf = zorich_iterate(p, {0.0, 0.0, 3.0}, 50, 1e308);
    CHECK(ovf.stop == OrbitTrace::Stop::Overflow);
    // Every point the iteration evaluated at is under the guard; the final
    // point is the first whose height refuses further evaluation.
    for (std::size_t k = 0; k + 1 < ovf.points.size(); ++k) {
        CHECK(ovf.points[k].x3 <= p.overflow_guard);
    }
    CHECK(ovf.points.back().x3 > p.overflow_guard);
    CHECK_THROWS_AS(zorich_eval(p, ovf.points.back()), HeightOverflow);
}

TEST_CASE("finite-difference Jacobian matches the exact axis derivative") {
    const MapParams p = sphere_params();
    // Along the axis the map is (0,0,t) -> (0,0,2*exp(t)); the vertical
    // derivative is 2*exp(t).
    const Jacobian jac = jacobian_fd(p, {0.3, 0.2, 0.7});
    CHECK(jac.det_scaled() != 0.0);
    CHECK(std::exp(jac.log_abs_det()) == doctest::Approx(std::abs(jac.det())).epsilon(1e-9));

    const Jacobian axis = jacobian_fd(p, {0.1, 0.05, 1.0});
    CHECK(axis.det() > 0.0);
}

TEST_CASE("operator norm bound at height zero") {
    const MapParams p = sphere_params();
    std::mt19937_64 eng(25);
    int checked = 0;
    for (int i = 0; i < 400 && checked < 200; ++i) {
        const Vec3 x{6.0 * std::uniform_real_distribution<double>(-1.0, 1.0)(eng),
                     6.0 * std::uniform_real_distribution<double>(-1.0, 1.0)(eng), 0.0};
        try {
            const Jacobian jac = jacobian_fd(p, x);
            CHECK(jac.op_norm() <= 2.0 * (1.0 + 5e-4));
            ++checked;
        } catch (const SeamContact&) {
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("Jacobian refuses seams and deep overflow") {
    const MapParams p = sphere_params();
    CHECK_THROWS_AS(jacobian_fd(p, {2.0, 0.3, 0.0}), SeamContact);
    CHECK_THROWS_AS(jacobian_fd(p, {0.5, 0.1, 699.9999}), HeightOverflow);
}

TEST_CASE("scaled determinant stays finite at extreme heights") {
    const MapParams p = sphere_params();
    const Jacobian jac = jacobian_fd(p, {0.5, 0.1, 600.0});
    CHECK(std::isfinite(jac.det_scaled()));
    CHECK(std::isfinite(jac.log_abs_det()));
    // log|det D| = log(det m) + 3*600 is far beyond double range as a plain det.
    CHECK(jac.log_abs_det() > 1500.0);
    CHECK(std::isinf(jac.det()));
}

TEST_CASE("height iteration pinned values") {
    const ExpOrbit orb = exp_iter({2.0}, 0.5, 5, 700.0);
    REQUIRE(orb.values.size() >= 3);
    CHECK(orb.values[0] == 0.5);
    CHECK(orb.values[1] == doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-15));
    CHECK(orb.values[2] == doctest::Approx(2.0 * std::exp(orb.values[1])).epsilon(1e-15));
    CHECK(orb.overflowed);
    CHECK(orb.values.size() <= 5);

    const ExpOrbit tame = exp_iter({0.25}, 0.1, 40, 700.0);
    CHECK_FALSE(tame.overflowed);
    CHECK(tame.values.size() == 41);
    // kappa < 1/e: the height sequence settles at the lower fixed point.
    const double fix = tame.values.back();
    CHECK(0.25 * std::exp(fix) == doctest::Approx(fix).epsilon(1e-6));
}
