#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lanemden/diagnostics.hpp"
#include "lanemden/radial.hpp"
#include "lanemden/spectral.hpp"

using namespace lanemden;

namespace {

// u = 1 - r^2, v = 4 solves -Δu = v exactly (p = 1); the q-side is not a
// solution and is only used where a test says so.
SolutionPair<RadialGrid> manufactured_pair(int n) {
    RadialGrid g(1.0, n);
    SolutionPair<RadialGrid> s{ExponentPair(1, 2), Field<RadialGrid>(g), Field<RadialGrid>(g)};
    for (int i = 0; i <= n; ++i) {
        const double r = g.node(i);
        s.u[i] = 1.0 - r * r;
        s.v[i] = 4.0;
    }
    s.u[n] = 0.0;
    s.v[n] = 0.0;
    s.converged = true;
    s.status = SolveStatus::Converged;
    return s;
}

}  // namespace

TEST_CASE("flux identity is exact on the manufactured quadratic") {
    const auto s = manufactured_pair(512);
    const auto fl = flux_identity(s);
    // the slot pairing u's flux with ∫v^p is exact here, up to roundoff in
    // the one-sided trace (a ~4h cancellation)
    CHECK(fl[1] <= 1e-11);
}

TEST_CASE("Green center identity on the manufactured quadratic") {
    // ∫ log(1/r) 4 r dr = 1 = u(0)
    const auto c = green_center_check(manufactured_pair(1024));
    CHECK(c[0] <= 1e-5);

    SECTION("log-kernel quadrature converges with order >= 1.5") {
        const double a = green_center_check(manufactured_pair(512))[0];
        const double b = green_center_check(manufactured_pair(1024))[0];
        CHECK(a / b >= std::pow(2.0, 1.5));
    }
}

TEST_CASE("identity battery on a solved pair (2,3)") {
    RadialGrid g(1.0, 1024);
    const auto s = solve_newton(ExponentPair(2, 3), g);
    REQUIRE(s.converged);
    const auto ep = first_dirichlet_eigenpair(g);

    const auto eid = energy_identity(s);
    CHECK(eid[0] <= 1e-4);
    CHECK(eid[1] <= 1e-4);

    CHECK(pohozaev_residual(s) <= 1e-3);

    const auto fl = flux_identity(s);
    CHECK(fl[0] <= 1e-3);
    CHECK(fl[1] <= 1e-3);

    const auto em = eigen_moments(s, ep);
    CHECK(em.residual_rel[0] <= 1e-3);
    CHECK(em.residual_rel[1] <= 1e-3);
    CHECK(em.jensen_gaps[0] >= -jensen_tolerance);
    CHECK(em.jensen_gaps[1] >= -jensen_tolerance);
    CHECK(em.uphi_l1 <= em.uphi_bound);
    CHECK(em.vphi_l1 <= em.uphi_bound);

    const auto gc = green_center_check(s);
    CHECK(gc[0] <= 1e-3);
    CHECK(gc[1] <= 1e-3);

    SECTION("every residual decreases under refinement with order >= 1.5") {
        RadialGrid g2(1.0, 2048);
        const auto s2 = solve_newton(ExponentPair(2, 3), g2);
        REQUIRE(s2.converged);
        const auto ep2 = first_dirichlet_eigenpair(g2);
        const auto r1 = compute_report(s, ep);
        const auto r2 = compute_report(s2, ep2);
        const double pairs[][2] = {
            {r1.energy_identity_rel[0], r2.energy_identity_rel[0]},
            {r1.energy_identity_rel[1], r2.energy_identity_rel[1]},
            {r1.flux_residual_rel[0], r2.flux_residual_rel[0]},
            {r1.flux_residual_rel[1], r2.flux_residual_rel[1]},
            {r1.pohozaev_residual_rel, r2.pohozaev_residual_rel},
            {r1.eigen_moment_rel[0], r2.eigen_moment_rel[0]},
            {r1.eigen_moment_rel[1], r2.eigen_moment_rel[1]},
            {r1.green_center_rel_u, r2.green_center_rel_u},
            {r1.green_center_rel_v, r2.green_center_rel_v},
        };
        for (const auto& pr : pairs) CHECK(pr[0] / pr[1] >= std::pow(2.0, 1.5));
    }

    SECTION("grid mismatch is rejected") {
        const auto ep_small = first_dirichlet_eigenpair(RadialGrid(1.0, 512));
        CHECK_THROWS_AS(eigen_moments(s, ep_small), std::invalid_argument);
    }
}

TEST_CASE("the diagonal report is symmetric in u and v") {
    RadialGrid g(1.0, 512);
    const auto s = solve_newton(ExponentPair(3, 3), g);
    REQUIRE(s.converged);
    const auto ep = first_dirichlet_eigenpair(g);
    const auto r = compute_report(s, ep);
    CHECK(std::abs(r.M - r.N) <= 1e-10 * r.M);
    CHECK(std::abs(r.energy_identity_rel[0] - r.energy_identity_rel[1]) <= 1e-10);
    CHECK(std::abs(r.flux_residual_rel[0] - r.flux_residual_rel[1]) <= 1e-10);
    CHECK(r.x_u[0] == 0.0);  // radial maximizer at the center
    CHECK(r.x_v[0] == 0.0);
}

TEST_CASE("comparison bounds and their scaling") {
    const auto s = solve_newton(ExponentPair(1, 64), RadialGrid(1.0, 1024));
    REQUIRE(s.converged);
    const auto m = comparison_bounds(s);
    CHECK(m[0] >= -comparison_tolerance);
    CHECK(m[1] >= -comparison_tolerance);
    CHECK(m[1] >= 0.9);  // N/M^q is tiny at large q, so the margin nearly fills c0 = 1

    // c0 = diam^2/4 = 4 on the radius-2 disk
    const auto s2 = solve_newton(ExponentPair(2, 2), RadialGrid(2.0, 512));
    REQUIRE(s2.converged);
    const auto m2 = comparison_bounds(s2);
    CHECK(m2[0] >= -comparison_tolerance);
    CHECK(m2[0] <= 4.0);
    CHECK(m2[1] <= 4.0);
}

TEST_CASE("Harnack decay profile") {
    const auto s = solve_newton(ExponentPair(2, 2), RadialGrid(1.0, 1024));
    REQUIRE(s.converged);
    const auto hp = harnack_decay(s);
    CHECK(std::abs(hp.limit_u - 0.25) <= 0.0025);
    CHECK(std::abs(hp.limit_v - 0.25) <= 0.0025);

    SECTION("profile stays bounded across the p = 1 family") {
        RadialGrid g(1.0, 512);
        std::optional<SolutionPair<RadialGrid>> anchor;
        for (double q : {2.0, 8.0, 32.0, 128.0}) {
            RadialSolveConfig cfg;
            cfg.warm_start = anchor;
            const auto sq = anchor ? solve_newton_continued(ExponentPair(1, q), g, cfg)
                                   : solve_newton(ExponentPair(1, q), g, cfg);
            REQUIRE(sq.converged);
            const auto prof = harnack_decay(sq);
            double mx = 0.0;
            for (const auto& pr : prof.ratio_u) mx = std::max(mx, pr[1]);
            CHECK(mx <= 0.3);
            anchor = sq;
        }
    }
}

TEST_CASE("pointwise floor around the maximum") {
    double ratios[3];
    int idx = 0;
    for (double q : {2.0, 4.0, 16.0}) {
        const auto s = solve_newton(ExponentPair(q, q), RadialGrid(1.0, 1024));
        REQUIRE(s.converged);
        const auto pf = pointwise_floor(s);
        CHECK(!pf.clipped);
        CHECK(pf.ratio > 0.5);
        ratios[idx++] = pf.ratio;
    }
    // stability of the measured constant across the family
    const double mx = std::max({ratios[0], ratios[1], ratios[2]});
    const double mn = std::min({ratios[0], ratios[1], ratios[2]});
    CHECK(mx / mn <= 2.0);

    SECTION("degenerate radius clips and flags") {
        RadialGrid g(1.0, 64);
        SolutionPair<RadialGrid> fake{ExponentPair(1.5, 1.5), Field<RadialGrid>(g),
                                      Field<RadialGrid>(g)};
        for (int i = 0; i <= g.n(); ++i) {
            const double r = g.node(i);
            fake.u[i] = 1.0 - r * r;
            fake.v[i] = 1.0 - r * r;
        }
        // R1 = sqrt(1/1.5) ~ 0.82 >= R/2
        CHECK(pointwise_floor(fake).clipped);
    }
}

TEST_CASE("mass concentration with its complement bound") {
    const auto s = solve_newton(ExponentPair(1, 64), RadialGrid(1.0, 512));
    REQUIRE(s.converged);
    const double total = integrate_pow(s.u, 64.0);
    const auto mc = mass_concentration(s, total);
    CHECK(mc.pass);
    CHECK(mc.value >= 0.5 * total);

    // complement never holds more than e^{-L} |Ω|
    const double L = std::max(1.0, std::log(2.0 * pi / total));
    double complement = 0.0;
    const auto& g = s.u.grid();
    for (int i = 0; i <= g.n(); ++i)
        if (s.u[i] < mc.level) complement += g.weight(i) * stable_pow(s.u[i], 64.0).value;
    CHECK(complement <= std::exp(-L) * pi + 1e-12);

    CHECK_THROWS_AS(mass_concentration(s, -1.0), std::invalid_argument);
}

TEST_CASE("Brezis-Merle bound and its monotonicity in delta") {
    const auto s = solve_newton(ExponentPair(1, 8), RadialGrid(1.0, 512));
    REQUIRE(s.converged);

    const auto bm = brezis_merle_check(s, 2.0 * pi);
    CHECK(bm.bound == Catch::Approx(8.0 * pi).epsilon(1e-12));  // (4 pi^2 / 2 pi) * diam^2
    CHECK(bm.pass);

    // the integrand's exponent shrinks as delta grows, so the value decreases
    const double v1 = brezis_merle_check(s, 0.5 * pi).value;
    const double v2 = brezis_merle_check(s, 2.0 * pi).value;
    const double v3 = brezis_merle_check(s, 3.5 * pi).value;
    CHECK(v1 > v2);
    CHECK(v2 > v3);

    CHECK_THROWS_AS(brezis_merle_check(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(brezis_merle_check(s, 4.0 * pi), std::invalid_argument);
}

TEST_CASE("asymptotic inequalities at p = 1") {
    RadialGrid g(1.0, 512);
    const auto ep = first_dirichlet_eigenpair(g);
    const auto s = solve_newton(ExponentPair(1, 64), g);
    REQUIRE(s.converged);
    const auto af = asymptotic_inequalities(s, ep);
    CHECK(af.lower_bound);
    CHECK(af.mq1 >= af.lambda_sq);
    CHECK(af.upper_envelope);
}

TEST_CASE("trend fits") {
    CHECK_THROWS_AS(asymptotic_trends({{8, 1.1, 2.0}, {16, 1.05, 2.2}, {32, 1.02, 2.4}}),
                    std::invalid_argument);

    // synthetic family with M^q = q^2 and N = q^{3/4}:
    // log(M^q) = 2 log q, log(M^q/N^2) = 0.5 log q
    std::vector<TrendPoint> pts;
    for (double q : {16.0, 32.0, 64.0, 128.0, 256.0})
        pts.push_back({q, std::exp(2.0 * std::log(q) / q), std::pow(q, 0.75)});
    const auto tf = asymptotic_trends(pts);
    CHECK(tf.mq.slope == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(tf.mq_over_n2.slope == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(tf.mq.correlation == Catch::Approx(1.0).epsilon(1e-9));

    const auto lf = linear_fit({0, 1, 2, 3}, {1, 4, 7, 10});
    CHECK(lf.slope == Catch::Approx(3.0));
    CHECK(lf.intercept == Catch::Approx(1.0));
    CHECK(lf.correlation == Catch::Approx(1.0));
}
