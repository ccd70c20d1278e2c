#pragma once

// Identity and inequality battery for a computed solution pair. Everything
// the analysis guarantees is checked here:
//
//   energy identity      ∫ v^{p+1} = ∫ ∇u·∇v = ∫ u^{q+1}
//   Pohozaev             (2/(p+1))∫v^{p+1} + (2/(q+1))∫u^{q+1} = ∮ (x·ν) u_ν v_ν
//   flux identity        ∮ (-v_ν) = ∫ u^q   and   ∮ (-u_ν) = ∫ v^p
//   eigen moments        λ ∫ uφ = ∫ v^p φ,  λ ∫ vφ = ∫ u^q φ, Jensen gaps >= 0
//   comparison bounds    M/N^p <= diam^2/4  and  N/M^q <= diam^2/4
//   Harnack decay        (M - u(r)) / (N^p r^2) bounded, -> 1/4 at the center
//   pointwise floor      u^q >= e^{-1/3} M^q on a ball of radius ~ R1/sqrt(q)
//   Green at the center  u(0) = ∫ log(R/r) v^p(r) r dr on the disk
//   mass concentration   ∫_{u >= 1 - L/q} u^q >= c/2 with L = max(1, log(2|Ω|/c))
//   Brezis-Merle         ∫ exp((4π-δ) v / ||u^q||_1) <= (4π^2/δ) diam^2
//   asymptotic flags     M^{q-1} >= λ^2;  M <= 1 + 4 log q / q for large q
//
// Exact identities are reported as relative residuals (quadrature-limited);
// exact inequalities as margins with pass flags at the stated tolerances.
// Constants the analysis leaves abstract are measured, never asserted.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lanemden/core.hpp"
#include "lanemden/planar.hpp"

namespace lanemden {

inline constexpr double jensen_tolerance = 1e-10;
inline constexpr double comparison_tolerance = 1e-8;

// ---------------------------------------------------------------------------
// Gradients and energy

/// ∫ ∇u·∇v by centered differences at the nodes (one-sided second-order at
/// the boundary) and the grid's quadrature.
inline double dirichlet_energy(const Field<RadialGrid>& u, const Field<RadialGrid>& v) {
    const auto& g = u.grid();
    const int n = g.n();
    const double h = g.h();
    auto d = [&](const Field<RadialGrid>& f, int i) {
        if (i == 0) return 0.0;  // radial symmetry
        if (i == n) return (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h);
        return (f[i + 1] - f[i - 1]) / (2.0 * h);
    };
    return integrate(g, [&](int i) { return d(u, i) * d(v, i); });
}

inline double dirichlet_energy(const Field<PlanarGrid>& u, const Field<PlanarGrid>& v) {
    const auto& g = u.grid();
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), hy = g.hy();
    auto dx = [&](const Field<PlanarGrid>& f, int i, int j) {
        if (i == 0) return (-3.0 * f[g.index(0, j)] + 4.0 * f[g.index(1, j)] - f[g.index(2, j)]) /
                           (2.0 * hx);
        if (i == nx + 1)
            return (3.0 * f[g.index(nx + 1, j)] - 4.0 * f[g.index(nx, j)] + f[g.index(nx - 1, j)]) /
                   (2.0 * hx);
        return (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) / (2.0 * hx);
    };
    auto dy = [&](const Field<PlanarGrid>& f, int i, int j) {
        if (j == 0) return (-3.0 * f[g.index(i, 0)] + 4.0 * f[g.index(i, 1)] - f[g.index(i, 2)]) /
                           (2.0 * hy);
        if (j == ny + 1)
            return (3.0 * f[g.index(i, ny + 1)] - 4.0 * f[g.index(i, ny)] + f[g.index(i, ny - 1)]) /
                   (2.0 * hy);
        return (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) / (2.0 * hy);
    };
    return integrate(g, [&](int i, int j) {
        return dx(u, i, j) * dx(v, i, j) + dy(u, i, j) * dy(v, i, j);
    });
}

// ---------------------------------------------------------------------------
// Identities

/// (|E - ∫v^{p+1}|, |E - ∫u^{q+1}|) / E with E = ∫∇u·∇v.
template <class Grid>
std::array<double, 2> energy_identity(const SolutionPair<Grid>& s) {
    const double E = dirichlet_energy(s.u, s.v);
    const double ivp1 = integrate_pow(s.v, s.exponents.p() + 1.0);
    const double iuq1 = integrate_pow(s.u, s.exponents.q() + 1.0);
    return {std::abs(E - ivp1) / std::abs(E), std::abs(E - iuq1) / std::abs(E)};
}

/// Relative defect of the Pohozaev identity; the boundary side comes from the
/// one-sided traces, with x·ν analytic (R on the circle, a/2 or b/2 per side
/// of the rectangle).
template <class Grid>
double pohozaev_residual(const SolutionPair<Grid>& s) {
    const double p = s.exponents.p(), q = s.exponents.q();
    const double lhs = 2.0 / (p + 1.0) * integrate_pow(s.v, p + 1.0) +
                       2.0 / (q + 1.0) * integrate_pow(s.u, q + 1.0);
    const auto samples = boundary_samples(s.u.grid());
    const auto un = normal_derivative(s.u);
    const auto vn = normal_derivative(s.v);
    double rhs = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k)
        rhs += samples[k].x_dot_nu * un[k] * vn[k] * samples[k].ds;
    return std::abs(lhs - rhs) / std::abs(lhs);
}

/// (|∮(-v_ν) - ∫u^q|, |∮(-u_ν) - ∫v^p|), each relative to its volume integral.
template <class Grid>
std::array<double, 2> flux_identity(const SolutionPair<Grid>& s) {
    const auto samples = boundary_samples(s.u.grid());
    const auto un = normal_derivative(s.u);
    const auto vn = normal_derivative(s.v);
    double flux_u = 0.0, flux_v = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        flux_u += -un[k] * samples[k].ds;
        flux_v += -vn[k] * samples[k].ds;
    }
    const double iuq = integrate_pow(s.u, s.exponents.q());
    const double ivp = integrate_pow(s.v, s.exponents.p());
    return {std::abs(flux_v - iuq) / iuq, std::abs(flux_u - ivp) / ivp};
}

struct EigenMoments {
    std::array<double, 2> residual_rel;  // λ∫uφ vs ∫v^pφ, λ∫vφ vs ∫u^qφ
    std::array<double, 2> jensen_gaps;   // ∫v^pφ - (∫vφ)^p, ∫u^qφ - (∫uφ)^q
    double uphi_l1, vphi_l1;
    double uphi_bound;  // max(1, λ^{2/κ̄}), κ̄ = κ/(κ+1)
    bool jensen_pass;
};

/// Residuals of both eigenfunction-moment identities, plus the Jensen gaps
/// (nonnegative because φ has unit L1 mass) and the closed-form bound on
/// ||uφ||_1 they imply.
template <class Grid>
EigenMoments eigen_moments(const SolutionPair<Grid>& s, const Eigenpair<Grid>& ep) {
    if (!(s.u.grid() == ep.phi.grid()))
        throw std::invalid_argument("eigen_moments: solution and eigenpair grids differ");
    const double p = s.exponents.p(), q = s.exponents.q();
    const double lambda = ep.lambda;

    auto weighted = [&](const Field<Grid>& f, double expo) {
        if constexpr (std::is_same_v<Grid, RadialGrid>) {
            return integrate(f.grid(), [&](int i) {
                return detail::pow_clamped(f[i], expo).value * ep.phi[i];
            });
        } else {
            const auto& g = f.grid();
            return integrate(g, [&](int i, int j) {
                const auto c = g.index(i, j);
                return detail::pow_clamped(f[c], expo).value * ep.phi[c];
            });
        }
    };

    EigenMoments out{};
    const double uphi = weighted(s.u, 1.0), vphi = weighted(s.v, 1.0);
    const double vpphi = weighted(s.v, p), uqphi = weighted(s.u, q);
    out.residual_rel = {std::abs(lambda * uphi - vpphi) / std::abs(lambda * uphi),
                        std::abs(lambda * vphi - uqphi) / std::abs(lambda * vphi)};
    out.jensen_gaps = {vpphi - std::pow(vphi, p), uqphi - std::pow(uphi, q)};
    out.uphi_l1 = uphi;
    out.vphi_l1 = vphi;
    const double kbar = s.exponents.kappa() / (s.exponents.kappa() + 1.0);
    out.uphi_bound = std::max(1.0, std::pow(lambda, 2.0 / kbar));
    out.jensen_pass =
        out.jensen_gaps[0] >= -jensen_tolerance && out.jensen_gaps[1] >= -jensen_tolerance;
    return out;
}

/// Margins of the comparison bounds: (diam^2/4 - M/N^p, diam^2/4 - N/M^q).
/// Both are nonnegative for true solutions.
template <class Grid>
std::array<double, 2> comparison_bounds(const SolutionPair<Grid>& s) {
    const double c0 = s.u.grid().domain().diameter() * s.u.grid().domain().diameter() / 4.0;
    const double M = s.u.max(), N = s.v.max();
    return {c0 - M / stable_pow(N, s.exponents.p()).value,
            c0 - N / stable_pow(M, s.exponents.q()).value};
}

// ---------------------------------------------------------------------------
// Radial-only profiles

struct HarnackProfile {
    std::vector<std::array<double, 2>> ratio_u;  // (r, (M - u)/(N^p r^2))
    std::vector<std::array<double, 2>> ratio_v;  // (r, (N - v)/(M^q r^2))
    double limit_u;  // r -> 0 estimate; 1/4 for the exact Taylor profile
    double limit_v;
};

/// Decay profile behind the inhomogeneous Harnack bound M - u <= C0 N^p r^2,
/// and its r -> 0 limit from a quadratic fit on the first 8 interior nodes.
inline HarnackProfile harnack_decay(const SolutionPair<RadialGrid>& s) {
    const auto& g = s.u.grid();
    const double M = s.u.max(), N = s.v.max();
    const double Np = stable_pow(N, s.exponents.p()).value;
    const double Mq = stable_pow(M, s.exponents.q()).value;
    HarnackProfile out{};
    out.ratio_u.reserve(g.n());
    for (int i = 1; i <= g.n(); ++i) {
        const double r = g.node(i);
        out.ratio_u.push_back({r, (M - s.u[i]) / (Np * r * r)});
        out.ratio_v.push_back({r, (N - s.v[i]) / (Mq * r * r)});
    }
    auto fit = [&](const Field<RadialGrid>& f, double fmax) {
        double num = 0.0, den = 0.0;
        for (int i = 1; i <= 8; ++i) {
            const double r2 = g.node(i) * g.node(i);
            num += (fmax - f[i]) * r2;
            den += r2 * r2;
        }
        return num / den;
    };
    out.limit_u = fit(s.u, M) / Np;
    out.limit_v = fit(s.v, N) / Mq;
    return out;
}

struct PointwiseFloor {
    double radius;      // largest ρ with u^q >= e^{-1/3} M^q on B_ρ
    double r1;          // (M / (q N^p))^{1/2}
    double ratio;       // radius / r1
    bool clipped;       // r1 was at least half the distance to the boundary
};

/// Largest ball around the maximum on which u^q keeps at least e^{-1/3} of
/// its peak, against the reference radius R1 = sqrt(M/(q N^p)).
inline PointwiseFloor pointwise_floor(const SolutionPair<RadialGrid>& s) {
    const auto& g = s.u.grid();
    const double M = s.u.max(), N = s.v.max();
    const double q = s.exponents.q();
    const double threshold = M * std::exp(-1.0 / (3.0 * q));
    PointwiseFloor out{};
    out.r1 = std::sqrt(M / (q * stable_pow(N, s.exponents.p()).value));
    out.clipped = out.r1 >= 0.5 * g.radius();
    int i = 0;
    while (i + 1 <= g.n() && s.u[i + 1] >= threshold) ++i;
    out.radius = g.node(i);
    out.ratio = out.radius / out.r1;
    return out;
}

/// Green's representation at the disk center, where the kernel is exactly
/// (1/2π) log(R/|y|): compares u(0) with ∫ log(R/r) v^p r dr and v(0) with
/// the mirror integral. The first cell is integrated analytically with the
/// source frozen at the center, which keeps the log singularity from
/// degrading the order.
inline std::array<double, 2> green_center_check(const SolutionPair<RadialGrid>& s) {
    const auto& g = s.u.grid();
    const double R = g.radius(), h = g.h();
    auto check = [&](const Field<RadialGrid>& src, double expo, double target) {
        double acc = detail::pow_clamped(src[0], expo).value *
                     (0.5 * h * h * std::log(R / h) + 0.25 * h * h);
        for (int i = 1; i < g.n(); ++i) {
            auto val = [&](int k) {
                return std::log(R / g.node(k)) * detail::pow_clamped(src[k], expo).value *
                       g.node(k);
            };
            const double a = val(i);
            const double b = (i + 1 == g.n()) ? 0.0 : val(i + 1);
            acc += 0.5 * h * (a + b);
        }
        return std::abs(target - acc) / std::abs(target);
    };
    return {check(s.v, s.exponents.p(), s.u[0]), check(s.u, s.exponents.q(), s.v[0])};
}

// ---------------------------------------------------------------------------
// Concentration and exponential integrability

struct MassConcentration {
    double value;       // ∫_{u >= 1 - L/q} u^q
    double level;       // 1 - L/q
    double area;        // measure of the superlevel set
    double floor;       // the supplied c
    bool pass;          // value >= floor / 2
};

/// Superlevel mass ∫_{u >= 1 - L/q} u^q with L = max(1, log(2|Ω|/c_floor)).
/// The complement contributes at most e^{-L}|Ω| <= c_floor/2 pointwise, so
/// value >= c_floor/2 whenever ∫u^q >= c_floor.
template <class Grid>
MassConcentration mass_concentration(const SolutionPair<Grid>& s, double c_floor) {
    if (!(c_floor > 0.0)) throw std::invalid_argument("mass_concentration: c_floor must be > 0");
    const double q = s.exponents.q();
    const double area = s.u.grid().domain().area();
    const double L = std::max(1.0, std::log(2.0 * area / c_floor));
    const double level = 1.0 - L / q;
    MassConcentration out{0.0, level, 0.0, c_floor, false};
    auto add = [&](double value, double weight) {
        if (value >= level) {
            out.value += weight * detail::pow_clamped(value, q).value;
            out.area += weight;
        }
    };
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        const auto& g = s.u.grid();
        for (int i = 0; i <= g.n(); ++i) add(s.u[i], g.weight(i));
    } else {
        const auto& g = s.u.grid();
        for (int j = 0; j <= g.ny() + 1; ++j)
            for (int i = 0; i <= g.nx() + 1; ++i) add(s.u[g.index(i, j)], g.weight(i, j));
    }
    out.pass = out.value >= 0.5 * c_floor;
    return out;
}

struct BrezisMerle {
    double value;  // ∫ exp((4π - δ) v / ||u^q||_1)
    double bound;  // (4π^2/δ) diam^2
    bool pass;
};

/// Exponential integrability of v = (-Δ)^{-1} u^q against the Brezis-Merle
/// bound at margin δ in (0, 4π).
template <class Grid>
BrezisMerle brezis_merle_check(const SolutionPair<Grid>& s, double delta) {
    if (!(delta > 0.0) || !(delta < 4.0 * pi))
        throw std::invalid_argument("brezis_merle_check: delta must lie in (0, 4*pi)");
    const double l1 = integrate_pow(s.u, s.exponents.q());
    const double c = (4.0 * pi - delta) / l1;
    double value;
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        value = integrate(s.u.grid(), [&](int i) { return std::exp(c * s.v[i]); });
    } else {
        const auto& g = s.u.grid();
        value = integrate(g, [&](int i, int j) { return std::exp(c * s.v[g.index(i, j)]); });
    }
    const double diam = s.u.grid().domain().diameter();
    BrezisMerle out{value, 4.0 * pi * pi / delta * diam * diam, false};
    out.pass = out.value <= out.bound;
    return out;
}

struct AsymptoticFlags {
    bool lower_bound;     // M^{q-1} >= λ^2
    double mq1;           // M^{q-1}
    double lambda_sq;
    bool upper_envelope;  // M <= 1 + 4 log q / q
    double upper_value;
};

/// The two per-solution inequalities of the p = 1 asymptotics; the upper
/// envelope is meaningful for large q only.
template <class Grid>
AsymptoticFlags asymptotic_inequalities(const SolutionPair<Grid>& s, const Eigenpair<Grid>& ep) {
    const double M = s.u.max(), q = s.exponents.q();
    AsymptoticFlags out{};
    out.mq1 = stable_pow(M, q - 1.0).value;
    out.lambda_sq = ep.lambda * ep.lambda;
    out.lower_bound = out.mq1 >= out.lambda_sq;
    out.upper_value = 1.0 + 4.0 * std::log(q) / q;
    out.upper_envelope = M <= out.upper_value;
    return out;
}

// ---------------------------------------------------------------------------
// Trend fits across a sweep

struct LineFit {
    double slope, intercept, correlation;
};

inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: need matching n >= 2");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f{};
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.correlation = sxy / std::sqrt(sxx * syy);
    return f;
}

struct TrendPoint {
    double q, M, N;
};

struct TrendFit {
    LineFit mq;          // log(M^q) = q log M against log q
    LineFit mq_over_n2;  // log(M^q / N^2) against log q
};

/// Regressions behind the growth claims M^q <= C q^2 and M^q/N^2 >= c q^{1/2}.
inline TrendFit asymptotic_trends(const std::vector<TrendPoint>& pts) {
    if (pts.size() < 4)
        throw std::invalid_argument("asymptotic_trends: need at least 4 sweep points");
    std::vector<double> lq, y1, y2;
    for (const auto& p : pts) {
        lq.push_back(std::log(p.q));
        y1.push_back(p.q * std::log(p.M));
        y2.push_back(p.q * std::log(p.M) - 2.0 * std::log(p.N));
    }
    return {linear_fit(lq, y1), linear_fit(lq, y2)};
}

// ---------------------------------------------------------------------------
// Full report

struct DiagnosticsReport {
    double p = 0.0, q = 0.0;
    double M = 0.0, N = 0.0;
    std::array<double, 2> x_u{}, x_v{};
    double L1_u = 0.0, L1_v = 0.0, L1_uq = 0.0, L1_vp = 0.0, L1_uq1 = 0.0;
    double energy = 0.0;
    double pohozaev_residual_rel = 0.0;
    std::array<double, 2> energy_identity_rel{};
    std::array<double, 2> flux_residual_rel{};
    std::array<double, 2> eigen_moment_rel{};
    std::array<double, 2> jensen_gaps{};
    double uphi_l1 = 0.0, vphi_l1 = 0.0, uphi_bound = 0.0;
    bool jensen_pass = false;
    std::array<double, 2> comparison_margins{};
    bool comparison_pass = false;
    std::vector<std::array<double, 2>> harnack_ratio_profile;
    double harnack_limit_u = 0.0, harnack_limit_v = 0.0;
    double mass_concentration_value = 0.0, mass_level = 0.0, mass_area = 0.0, mass_floor = 0.0;
    bool mass_pass = false;
    double brezis_merle_value = 0.0, brezis_merle_bound = 0.0;
    bool brezis_merle_pass = false;
    bool lower_bound_check = false;
    double mq1 = 0.0, lambda_sq = 0.0;
    bool upper_envelope = false;
    double pointwise_floor_radius = 0.0, pointwise_floor_r1 = 0.0, pointwise_floor_ratio = 0.0;
    bool pointwise_floor_clipped = false;
    double green_center_rel_u = std::numeric_limits<double>::quiet_NaN();
    double green_center_rel_v = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::array<double, 2> maximizer(const Field<RadialGrid>& f) {
    // By radial monotonicity the maximum sits at the center; ties break
    // toward the smallest radius.
    return {f.grid().node(static_cast<int>(f.argmax())), 0.0};
}
inline std::array<double, 2> maximizer(const Field<PlanarGrid>& f) {
    const auto& g = f.grid();
    const std::size_t k = f.argmax();
    const int i = static_cast<int>(k % (g.nx() + 2));
    const int j = static_cast<int>(k / (g.nx() + 2));
    return {g.x(i), g.y(j)};
}

}  // namespace detail

/// Runs the whole battery on a converged solution. The mass-concentration
/// floor is self-consistent: c_floor is the measured ∫u^q of the same run.
template <class Grid>
DiagnosticsReport compute_report(const SolutionPair<Grid>& s, const Eigenpair<Grid>& ep,
                                 double bm_delta = 2.0 * pi) {
    DiagnosticsReport r;
    r.p = s.exponents.p();
    r.q = s.exponents.q();
    r.M = s.u.max();
    r.N = s.v.max();
    r.x_u = detail::maximizer(s.u);
    r.x_v = detail::maximizer(s.v);
    r.L1_u = integrate(s.u);
    r.L1_v = integrate(s.v);
    r.L1_uq = integrate_pow(s.u, s.exponents.q());
    r.L1_vp = integrate_pow(s.v, s.exponents.p());
    r.L1_uq1 = integrate_pow(s.u, s.exponents.q() + 1.0);
    r.energy = dirichlet_energy(s.u, s.v);
    r.energy_identity_rel = energy_identity(s);
    r.pohozaev_residual_rel = pohozaev_residual(s);
    r.flux_residual_rel = flux_identity(s);

    const auto em = eigen_moments(s, ep);
    r.eigen_moment_rel = em.residual_rel;
    r.jensen_gaps = em.jensen_gaps;
    r.uphi_l1 = em.uphi_l1;
    r.vphi_l1 = em.vphi_l1;
    r.uphi_bound = em.uphi_bound;
    r.jensen_pass = em.jensen_pass;

    r.comparison_margins = comparison_bounds(s);
    r.comparison_pass = r.comparison_margins[0] >= -comparison_tolerance &&
                        r.comparison_margins[1] >= -comparison_tolerance;

    const auto mc = mass_concentration(s, r.L1_uq);
    r.mass_concentration_value = mc.value;
    r.mass_level = mc.level;
    r.mass_area = mc.area;
    r.mass_floor = mc.floor;
    r.mass_pass = mc.pass;

    const auto bm = brezis_merle_check(s, bm_delta);
    r.brezis_merle_value = bm.value;
    r.brezis_merle_bound = bm.bound;
    r.brezis_merle_pass = bm.pass;

    const auto af = asymptotic_inequalities(s, ep);
    r.lower_bound_check = af.lower_bound;
    r.mq1 = af.mq1;
    r.lambda_sq = af.lambda_sq;
    r.upper_envelope = af.upper_envelope;

    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        const auto hp = harnack_decay(s);
        r.harnack_ratio_profile = hp.ratio_u;
        r.harnack_limit_u = hp.limit_u;
        r.harnack_limit_v = hp.limit_v;
        const auto pf = pointwise_floor(s);
        r.pointwise_floor_radius = pf.radius;
        r.pointwise_floor_r1 = pf.r1;
        r.pointwise_floor_ratio = pf.ratio;
        r.pointwise_floor_clipped = pf.clipped;
        const auto gc = green_center_check(s);
        r.green_center_rel_u = gc[0];
        r.green_center_rel_v = gc[1];
    }
    return r;
}

}  // namespace lanemden
