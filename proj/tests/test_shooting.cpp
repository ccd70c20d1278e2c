#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lanemden/diagnostics.hpp"
#include "lanemden/radial.hpp"

using namespace lanemden;

TEST_CASE("shooting tolerance contract") {
    CHECK_THROWS_AS(solve_shooting(ExponentPair(2, 2), 1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_shooting(ExponentPair(2, 2), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("shooting and newton agree at (3,3) on n = 2048") {
    const auto sh = solve_shooting(ExponentPair(3, 3), 1.0, 1e-9, 2048);
    REQUIRE(sh.converged);
    CHECK(sh.residual_norm <= 1e-9);
    const auto sn = solve_newton(ExponentPair(3, 3), RadialGrid(1.0, 2048));
    REQUIRE(sn.converged);
    CHECK(std::abs(sh.u.max() - sn.u.max()) / sh.u.max() <= 1e-6);
    CHECK(std::abs(sh.v.max() - sn.v.max()) / sh.v.max() <= 1e-6);
}

TEST_CASE("center Taylor profile is recovered") {
    // u(r) = M - N^p r^2 / 4 + O(r^4) near the center.
    const auto sh = solve_shooting(ExponentPair(2, 2), 1.0, 1e-9, 2048);
    REQUIRE(sh.converged);
    const double M = sh.u.max(), N = sh.v.max();
    const double r = sh.u.grid().node(2);  // ~1e-3
    const double est = (M - sh.u[2]) / (r * r);
    const double expected = stable_pow(N, 2.0).value / 4.0;
    CHECK(std::abs(est - expected) / expected <= 0.01);
}

TEST_CASE("sampled shooting solution satisfies the Pohozaev identity") {
    const auto sh = solve_shooting(ExponentPair(1, 2), 1.0, 1e-9, 2048);
    REQUIRE(sh.converged);
    CHECK(pohozaev_residual(sh) <= 1e-4);
    CHECK(sh.u[sh.u.grid().n()] == 0.0);
    CHECK(sh.v[sh.v.grid().n()] == 0.0);
}

TEST_CASE("shooting handles a large second exponent via its ladder") {
    const auto sh = solve_shooting(ExponentPair(1, 64), 1.0, 1e-8, 1024);
    REQUIRE(sh.converged);
    CHECK(sh.u.max() == Catch::Approx(1.122396).epsilon(1e-4));
}
