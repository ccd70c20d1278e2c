#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lanemden/radial.hpp"

using namespace lanemden;

TEST_CASE("radial residual on manufactured fields") {
    RadialGrid g(1.0, 64);

    SECTION("the zero pair annihilates both sides") {
        Field<RadialGrid> u(g), v(g);
        auto res = radial_residual(u, v, ExponentPair(2, 3));
        for (std::size_t i = 0; i < res.first.size(); ++i) {
            CHECK(res.first[i] == 0.0);
            CHECK(res.second[i] == 0.0);
        }
    }

    SECTION("stencil is exact on quadratics") {
        // u = 1 - r^2 has -Δu = 4 = v^p with v = 4, p = 1.
        Field<RadialGrid> u(g), v(g);
        for (int i = 0; i <= g.n(); ++i) {
            const double r = g.node(i);
            u[i] = 1.0 - r * r;
            v[i] = 4.0;
        }
        v[g.n()] = 0.0;  // boundary contract
        auto res = radial_residual(u, v, ExponentPair(1, 2));
        for (int i = 0; i < g.n(); ++i) CHECK(std::abs(res.first[i]) <= 1e-8);
    }

    SECTION("contract violations") {
        Field<RadialGrid> u(g), v(g);
        Field<RadialGrid> w(RadialGrid(1.0, 32));
        CHECK_THROWS_AS(radial_residual(u, w, ExponentPair(2, 2)), std::invalid_argument);
        u[g.n()] = 0.5;
        CHECK_THROWS_AS(radial_residual(u, v, ExponentPair(2, 2)), std::invalid_argument);
        u[g.n()] = 0.0;
        u[3] = -1e-5;
        CHECK_THROWS_AS(radial_residual(u, v, ExponentPair(2, 2)), std::domain_error);
    }
}

TEST_CASE("config validation") {
    RadialSolveConfig cfg;
    cfg.tol = 1e-3;
    CHECK_THROWS_AS(solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 32), cfg),
                    std::invalid_argument);
    cfg.tol = 1e-10;
    cfg.max_iter = 0;
    CHECK_THROWS_AS(solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 32), cfg),
                    std::invalid_argument);
}

TEST_CASE("newton matches the shooting oracle at (2,2)") {
    RadialGrid g(1.0, 512);
    const auto sn = solve_newton(ExponentPair(2, 2), g);
    REQUIRE(sn.converged);
    CHECK(sn.residual_norm <= 1e-10);

    const auto sh = solve_shooting(ExponentPair(2, 2), 1.0, 1e-9, 512);
    REQUIRE(sh.converged);
    // O(h^2) discretization gap at n = 512; the acceptance suite pins 1e-6 at n = 2048.
    CHECK(std::abs(sn.u.max() - sh.u.max()) / sh.u.max() <= 5e-6);
    CHECK(std::abs(sn.v.max() - sh.v.max()) / sh.v.max() <= 5e-6);

    // frozen oracle value for regression
    CHECK(sh.u.max() == Catch::Approx(8.5341148).epsilon(2e-6));
}

TEST_CASE("comparison bound at (1,4) on the unit disk") {
    const auto s = solve_newton(ExponentPair(1, 4), RadialGrid(1.0, 512));
    REQUIRE(s.converged);
    const double M = s.u.max(), N = s.v.max();
    CHECK(M / N <= 1.0);                       // M/N^p with p = 1, diam^2/4 = 1
    CHECK(N / std::pow(M, 4.0) <= 1.0);
}

TEST_CASE("solutions are radially nonincreasing") {
    for (auto e : {ExponentPair(2, 2), ExponentPair(1, 32)}) {
        const auto s = solve_newton(e, RadialGrid(1.0, 512));
        REQUIRE(s.converged);
        const double tol_u = 1e-8 * s.u.max(), tol_v = 1e-8 * s.v.max();
        for (int i = 0; i < 512; ++i) {
            CHECK(s.u[i + 1] <= s.u[i] + tol_u);
            CHECK(s.v[i + 1] <= s.v[i] + tol_v);
        }
    }
}

TEST_CASE("grid convergence of the maximum has order ~2") {
    const double m256 = solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 256)).u.max();
    const double m512 = solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 512)).u.max();
    const double m1024 = solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 1024)).u.max();
    const double order = std::log2(std::abs(m256 - m512) / std::abs(m512 - m1024));
    CHECK(order >= 1.9);
}

TEST_CASE("warm-started continuation reaches q = 1024 at p = 1") {
    RadialGrid g(1.0, 1024);
    auto anchor = solve_newton(ExponentPair(1, 512), g);
    if (!anchor.converged) {
        // walk up from a mild exponent if the cold start ever degrades
        anchor = solve_newton(ExponentPair(1, 8), g);
        RadialSolveConfig cfg;
        cfg.warm_start = anchor;
        anchor = solve_newton_continued(ExponentPair(1, 512), g, cfg);
    }
    REQUIRE(anchor.converged);

    RadialSolveConfig cfg;
    cfg.warm_start = anchor;
    const auto s = solve_newton_continued(ExponentPair(1, 1024), g, cfg);
    REQUIRE(s.converged);
    CHECK(s.u.max() > 0.9);
    CHECK(s.u.max() < 1.1);
}

TEST_CASE("non-convergence keeps the best iterate") {
    RadialSolveConfig cfg;
    cfg.max_iter = 1;
    const auto s = solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 128), cfg);
    CHECK(!s.converged);
    CHECK(s.status == SolveStatus::NonConvergence);
    CHECK(s.u.max() > 0.0);  // eigenfunction-scaled iterate survives
}
