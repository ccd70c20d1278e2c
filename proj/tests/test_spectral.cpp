#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lanemden/bessel.hpp"
#include "lanemden/laplacian.hpp"
#include "lanemden/spectral.hpp"

using namespace lanemden;

TEST_CASE("Bessel J0 zero oracle") {
    // Series sanity at a few tabulated points.
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j0(2.0) == Catch::Approx(0.22389077914123567).epsilon(1e-12));

    const double j0 = first_bessel_j0_zero();
    CHECK(std::abs(j0 - 2.404825557695773) <= 1e-10);
    CHECK(std::abs(bessel_j0(j0)) <= 1e-12);
}

TEST_CASE("unit square eigenvalue is 2 pi^2") {
    PlanarGrid g(DomainSpec::rectangle(1.0, 1.0), 127, 127);
    const auto ep = first_dirichlet_eigenpair(g);
    REQUIRE(ep.converged);
    CHECK(std::abs(ep.lambda - 2.0 * pi * pi) <= 1e-6);

    SECTION("phi positive with unit L1 mass") {
        double l1 = 0.0, mn = 1e300;
        for (int j = 1; j <= g.ny(); ++j)
            for (int i = 1; i <= g.nx(); ++i) {
                mn = std::min(mn, ep.phi[g.index(i, j)]);
                l1 += g.weight(i, j) * std::abs(ep.phi[g.index(i, j)]);
            }
        CHECK(mn > 0.0);
        CHECK(std::abs(l1 - 1.0) <= 1e-10);
    }
}

TEST_CASE("unit disk eigenvalue against the Bessel oracle") {
    RadialGrid g(1.0, 1024);
    const auto ep = first_dirichlet_eigenpair(g);
    REQUIRE(ep.converged);
    const double j0 = first_bessel_j0_zero();
    CHECK(std::abs(ep.lambda - j0 * j0) <= 1e-4);
    CHECK(std::abs(ep.lambda - j0 * j0) / (j0 * j0) <= 1e-7);  // extrapolation is far better

    SECTION("Rayleigh quotient reproduces the grid eigenvalue") {
        const auto lap = neg_laplacian(ep.phi);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            num += g.weight(i) * ep.phi[i] * lap[i];
            den += g.weight(i) * ep.phi[i] * ep.phi[i];
        }
        CHECK(std::abs(num / den - ep.lambda_grid) <= 1e-10 * ep.lambda_grid);
    }

    SECTION("phi positive with unit L1 mass") {
        double l1 = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            CHECK(ep.phi[i] > 0.0);
            l1 += g.weight(i) * ep.phi[i];
        }
        CHECK(std::abs(l1 - 1.0) <= 1e-10);
    }
}

TEST_CASE("eigenvalue scales as the inverse square of dilation") {
    const auto unit = first_dirichlet_eigenpair(RadialGrid(1.0, 1024));
    const auto doubled = first_dirichlet_eigenpair(RadialGrid(2.0, 1024));
    CHECK(std::abs(doubled.lambda - unit.lambda / 4.0) <= 1e-8 * (unit.lambda / 4.0));

    const auto sq = first_dirichlet_eigenpair(PlanarGrid(DomainSpec::rectangle(1, 1), 63, 63));
    const auto sq3 = first_dirichlet_eigenpair(PlanarGrid(DomainSpec::rectangle(3, 3), 63, 63));
    CHECK(std::abs(sq3.lambda - sq.lambda / 9.0) <= 1e-8 * (sq.lambda / 9.0));
}
