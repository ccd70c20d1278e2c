#pragma once

// Radially symmetric solver on the disk of radius R. Two independent routes
// to the same solution:
//
//  * solve_newton: damped Newton on the second-order finite-difference
//    discretization, unknowns (u_i, v_i) interleaved so the analytic
//    Jacobian is a banded block-tridiagonal matrix (direct sparse solve);
//  * solve_shooting: adaptive Dormand-Prince integration of the radial IVP
//    from r = 1e-6 R with the Taylor start u ≈ M - N^p r^2/4, and a 2D
//    Newton root-find on the boundary miss (u(R), v(R)).
//
// Cross-agreement of the two in (M, N) is the oracle the artifact leans on.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lanemden/bessel.hpp"
#include "lanemden/core.hpp"
#include "lanemden/laplacian.hpp"
#include "lanemden/newton.hpp"
#include "lanemden/spectral.hpp"

namespace lanemden {

struct RadialSolveConfig {
    double tol = 1e-10;  // relative residual target
    int max_iter = 200;
    /// Warm start; when absent the solve initializes from the scaled first
    /// eigenfunction (see init_amplitudes below).
    std::optional<SolutionPair<RadialGrid>> warm_start;

    void validate() const {
        if (!(tol > 0.0) || tol > 1e-4)
            throw std::invalid_argument("RadialSolveConfig: tol must lie in (0, 1e-4]");
        if (max_iter < 1) throw std::invalid_argument("RadialSolveConfig: max_iter >= 1");
    }
};

// ---------------------------------------------------------------------------
// Residual

/// Finite-difference residual of both equations: res_u = -Δ_h u - v^p and
/// res_v = -Δ_h v - u^q at every interior node (boundary entries zero).
/// Rejects mismatched grids, nonzero boundary data, and negative values.
inline std::pair<Field<RadialGrid>, Field<RadialGrid>> radial_residual(
    const Field<RadialGrid>& u, const Field<RadialGrid>& v, const ExponentPair& e) {
    if (!(u.grid() == v.grid()))
        throw std::invalid_argument("radial_residual: u and v must share a grid");
    const int n = u.grid().n();
    if (u[n] != 0.0 || v[n] != 0.0)
        throw std::invalid_argument("radial_residual: boundary values must be zero");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < 0.0 || v[i] < 0.0)
            throw std::domain_error("radial_residual: negative field value");

    auto lap_u = neg_laplacian(u);
    auto lap_v = neg_laplacian(v);
    std::pair<Field<RadialGrid>, Field<RadialGrid>> res{Field<RadialGrid>(u.grid()),
                                                        Field<RadialGrid>(u.grid())};
    for (int i = 0; i < n; ++i) {
        res.first[i] = lap_u[i] - stable_pow(v[i], e.p()).value;
        res.second[i] = lap_v[i] - stable_pow(u[i], e.q()).value;
    }
    return res;
}

namespace detail {

// Amplitudes that balance the two equations in order of magnitude when the
// fields are multiples of the max-normalized eigenfunction: with u = α φ̂,
// v = β φ̂ and -Δφ = λφ, matching λα = β^p and λβ = α^q at the maximum gives
// α = λ^{(p+1)/(pq-1)}, β = λ^{(q+1)/(pq-1)} -- the exponents of
// Prop-2.1-type estimates.
inline std::pair<double, double> init_amplitudes(const ExponentPair& e, double lambda) {
    const double alpha = std::pow(lambda, (e.p() + 1.0) / e.kappa());
    const double beta = std::pow(lambda, (e.q() + 1.0) / e.kappa());
    return {alpha, beta};
}

// Interleaved unknowns: z[2i] = u_i, z[2i+1] = v_i, i = 0..n-1.
inline void radial_system_residual(const RadialGrid& g, const ExponentPair& e,
                                   const Eigen::VectorXd& z, Eigen::VectorXd& F) {
    const int n = g.n();
    const double h = g.h();
    const double ih2 = 1.0 / (h * h);
    auto u = [&](int i) { return i == n ? 0.0 : z[2 * i]; };
    auto v = [&](int i) { return i == n ? 0.0 : z[2 * i + 1]; };

    F[0] = 4.0 * ih2 * (u(0) - u(1)) - pow_clamped(v(0), e.p()).value;
    F[1] = 4.0 * ih2 * (v(0) - v(1)) - pow_clamped(u(0), e.q()).value;
    for (int i = 1; i < n; ++i) {
        const double r = g.node(i);
        const double cr = 1.0 / (2.0 * r * h);
        F[2 * i] = 2.0 * ih2 * u(i) - (ih2 - cr) * u(i - 1) - (ih2 + cr) * u(i + 1) -
                   pow_clamped(v(i), e.p()).value;
        F[2 * i + 1] = 2.0 * ih2 * v(i) - (ih2 - cr) * v(i - 1) - (ih2 + cr) * v(i + 1) -
                       pow_clamped(u(i), e.q()).value;
    }
}

inline void radial_system_jacobian(const RadialGrid& g, const ExponentPair& e,
                                   const Eigen::VectorXd& z, Eigen::SparseMatrix<double>& J) {
    const int n = g.n();
    Triplets tris;
    tris.reserve(8 * static_cast<std::size_t>(n));
    radial_neg_laplacian_triplets(g, tris, /*offset=*/0, /*stride=*/2);
    radial_neg_laplacian_triplets(g, tris, /*offset=*/1, /*stride=*/2);
    for (int i = 0; i < n; ++i) {
        tris.emplace_back(2 * i, 2 * i + 1, -pow_clamped(z[2 * i + 1], e.p()).derivative);
        tris.emplace_back(2 * i + 1, 2 * i, -pow_clamped(z[2 * i], e.q()).derivative);
    }
    J.setFromTriplets(tris.begin(), tris.end());
}

// Residual scale max(N^p, M^q), floored by the roundoff level of the stencil
// evaluation: the Laplacian rows cancel terms of size ~ max_field / h^2, so
// requiring tol * scale below ~ 8 eps max_field / h^2 is not satisfiable.
inline double radial_residual_scale(const ExponentPair& e, const Eigen::VectorXd& z, double h,
                                    double tol) {
    double umax = 0.0, vmax = 0.0;
    for (Eigen::Index k = 0; k + 1 < z.size(); k += 2) {
        umax = std::max(umax, z[k]);
        vmax = std::max(vmax, z[k + 1]);
    }
    const double s =
        std::max(pow_clamped(vmax, e.p()).value, pow_clamped(umax, e.q()).value);
    const double round_floor =
        8.0 * std::numeric_limits<double>::epsilon() * (umax + vmax) / (h * h);
    return std::max({s, round_floor / tol, 1e-300});
}

// Linear interpolation of a warm start onto a (possibly different) grid.
inline double sample_linear(const Field<RadialGrid>& f, double r) {
    const auto& g = f.grid();
    if (r >= g.radius()) return 0.0;
    const double t = r / g.h();
    const int i = std::min(static_cast<int>(t), g.n() - 1);
    const double w = t - i;
    return (1.0 - w) * f[i] + w * f[i + 1];
}

}  // namespace detail

/// Damped-Newton solve of the discrete system. Non-convergence and loss of
/// positivity are reported through the returned status with the best iterate
/// kept, never thrown.
inline SolutionPair<RadialGrid> solve_newton(const ExponentPair& e, const RadialGrid& grid,
                                             const RadialSolveConfig& cfg = {}) {
    cfg.validate();
    const int n = grid.n();
    Eigen::VectorXd z(2 * n);

    if (cfg.warm_start) {
        const auto& w = *cfg.warm_start;
        if (w.u.grid() == grid) {
            for (int i = 0; i < n; ++i) {
                z[2 * i] = w.u[i];
                z[2 * i + 1] = w.v[i];
            }
        } else {
            for (int i = 0; i < n; ++i) {
                z[2 * i] = detail::sample_linear(w.u, grid.node(i));
                z[2 * i + 1] = detail::sample_linear(w.v, grid.node(i));
            }
        }
    } else {
        const auto ep = first_dirichlet_eigenpair(grid);
        const auto [alpha, beta] = detail::init_amplitudes(e, ep.lambda_grid);
        const double phimax = ep.phi.max();
        for (int i = 0; i < n; ++i) {
            const double s = ep.phi[i] / phimax;
            z[2 * i] = alpha * s;
            z[2 * i + 1] = beta * s;
        }
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    auto rep = detail::damped_newton(
        z, [&](const Eigen::VectorXd& y, Eigen::VectorXd& F) {
            detail::radial_system_residual(grid, e, y, F);
        },
        [&](const Eigen::VectorXd& y, Eigen::SparseMatrix<double>& J) {
            J.resize(2 * n, 2 * n);
            detail::radial_system_jacobian(grid, e, y, J);
        },
        [&](const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs,
            Eigen::VectorXd& d) {
            if (!analyzed) {
                lu.analyzePattern(J);
                analyzed = true;
            }
            lu.factorize(J);
            if (lu.info() != Eigen::Success) return false;
            d = lu.solve(rhs);
            return lu.info() == Eigen::Success;
        },
        [&](const Eigen::VectorXd& y) {
            return detail::radial_residual_scale(e, y, grid.h(), cfg.tol);
        },
        cfg.tol, cfg.max_iter);

    SolutionPair<RadialGrid> out{e, Field<RadialGrid>(grid), Field<RadialGrid>(grid)};
    double zmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        out.u[i] = z[2 * i];
        out.v[i] = z[2 * i + 1];
        zmin = std::min({zmin, z[2 * i], z[2 * i + 1]});
    }
    out.residual_norm = rep.residual_rel;
    out.newton_iterations = rep.iterations;
    const bool positive = zmin > 0.0;
    if (rep.converged && positive) {
        out.converged = true;
        out.status = SolveStatus::Converged;
    } else if (rep.converged || rep.line_search_failed) {
        out.status = (zmin < 0.0) ? SolveStatus::PositivityLoss : SolveStatus::NonConvergence;
        out.converged = false;
    } else {
        out.status = SolveStatus::NonConvergence;
    }
    return out;
}

namespace detail {

// Continuation predictor: rescales a converged neighbor onto the target
// exponents. Amplitudes follow the eigenvalue-balance ratios; the profiles
// are sharpened by the power map (f/F)^theta with theta chosen so the center
// equations -Δu(0) = N^p, -Δv(0) = M^q stay balanced after the move. This is
// what carries continuation through the stiff large-exponent regime, where a
// plain copy of the neighbor sits outside Newton's basin.
inline SolutionPair<RadialGrid> predictor_transform(const SolutionPair<RadialGrid>& anchor,
                                                    const ExponentPair& target, double lambda) {
    const ExponentPair& eo = anchor.exponents;
    const double Mo = anchor.u.max(), No = anchor.v.max();
    auto amp = [&](const ExponentPair& e) { return init_amplitudes(e, lambda); };
    const auto [ao, bo] = amp(eo);
    const auto [an, bn] = amp(target);
    const double Mp = Mo * an / ao;
    const double Np = No * bn / bo;

    auto clampt = [](double t) { return std::clamp(t, 0.125, 8.0); };
    const double theta_u = clampt(Mo / Mp * stable_pow(Np, target.p()).value /
                                  stable_pow(No, eo.p()).value);
    const double theta_v = clampt(No / Np * stable_pow(Mp, target.q()).value /
                                  stable_pow(Mo, eo.q()).value);

    SolutionPair<RadialGrid> init = anchor;
    init.exponents = target;
    const int n = anchor.u.grid().n();
    for (int i = 0; i <= n; ++i) {
        init.u[i] = Mp * std::pow(std::max(anchor.u[i], 0.0) / Mo, theta_u);
        init.v[i] = Np * std::pow(std::max(anchor.v[i], 0.0) / No, theta_v);
    }
    return init;
}

}  // namespace detail

/// solve_newton with warm-start continuation: walks from the warm start's
/// exponents to `e` along the geometric path in (p, q), stepping 2^{1/4} in
/// the dominant exponent, halving the step on failure, giving up below
/// 2^{1/64}. Each step tries the plain warm start first and the rescaling
/// predictor second; if the ladder aborts, one direct predictor jump to the
/// target is attempted before reporting failure. Without a warm start this
/// is a plain cold solve.
inline SolutionPair<RadialGrid> solve_newton_continued(const ExponentPair& e,
                                                       const RadialGrid& grid,
                                                       const RadialSolveConfig& cfg = {}) {
    if (!cfg.warm_start) return solve_newton(e, grid, cfg);

    SolutionPair<RadialGrid> current = *cfg.warm_start;
    const double p0 = current.exponents.p(), q0 = current.exponents.q();
    const double span =
        std::max(std::abs(std::log2(e.q() / q0)), std::abs(std::log2(e.p() / p0)));

    double lambda = 0.0;
    auto solve_step = [&](const ExponentPair& et) {
        RadialSolveConfig c = cfg;
        c.warm_start = current;
        auto s = solve_newton(et, grid, c);
        if (s.converged) return s;
        if (lambda == 0.0) lambda = first_dirichlet_eigenpair(grid).lambda_grid;
        c.warm_start = detail::predictor_transform(current, et, lambda);
        return solve_newton(et, grid, c);
    };

    if (span == 0.0) return solve_step(e);

    double t = 0.0;
    double dt = std::min(1.0, 0.25 / span);
    const double dt_min = (1.0 / 64.0) / span;
    const double dt_default = dt;
    while (t < 1.0) {
        const double tn = std::min(1.0, t + dt);
        const ExponentPair et(p0 * std::pow(e.p() / p0, tn), q0 * std::pow(e.q() / q0, tn));
        auto s = solve_step(et);
        if (s.converged) {
            current = std::move(s);
            t = tn;
            dt = std::min(dt * 2.0, dt_default);
        } else {
            dt *= 0.5;
            if (dt < dt_min) {
                // Report the failure at the target itself (plain warm start; no
                // predictor, so a distant jump cannot land on a foreign branch).
                RadialSolveConfig c = cfg;
                c.warm_start = current;
                return solve_newton(e, grid, c);
            }
        }
    }
    return current;
}

// ---------------------------------------------------------------------------
// Shooting oracle

namespace detail {

struct ShootState {
    double u, du, v, dv;
};

inline ShootState shoot_rhs(double r, const ShootState& s, const ExponentPair& e) {
    return {s.du, -pow_clamped(s.v, e.p()).value - s.du / r, s.dv,
            -pow_clamped(s.u, e.q()).value - s.dv / r};
}

inline ShootState axpy(const ShootState& a, double c, const ShootState& b) {
    return {a.u + c * b.u, a.du + c * b.du, a.v + c * b.v, a.dv + c * b.dv};
}

struct ShootOutcome {
    double uR = 0.0, vR = 0.0;
    bool ok = false;
};

// Dormand-Prince 5(4) with PI-free elementary step control. `on_step` sees
// every accepted step (r0, s0, r1, s1) and may sample into a grid.
template <class OnStep>
ShootOutcome integrate_dopri(const ExponentPair& e, double r0, double R, ShootState s,
                             double rtol, double scale, OnStep&& on_step) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                            e7 = -1.0 / 40;

    const double atol = rtol * scale;
    const double blow = 1e8 * std::max(scale, 1.0);
    double r = r0;
    double h = (R - r0) / 64.0;
    ShootOutcome out;
    for (int step = 0; step < 2000000; ++step) {
        if (std::abs(s.u) > blow || std::abs(s.v) > blow || !std::isfinite(s.u) ||
            !std::isfinite(s.v))
            return out;
        if (r >= R) break;
        h = std::min(h, R - r);
        if (h < 1e-14 * R) return out;

        const ShootState k1 = shoot_rhs(r, s, e);
        const ShootState y2 = axpy(s, h * a21, k1);
        const ShootState k2 = shoot_rhs(r + h / 5.0, y2, e);
        ShootState y3 = axpy(axpy(s, h * a31, k1), h * a32, k2);
        const ShootState k3 = shoot_rhs(r + 3.0 * h / 10.0, y3, e);
        ShootState y4 = axpy(axpy(axpy(s, h * a41, k1), h * a42, k2), h * a43, k3);
        const ShootState k4 = shoot_rhs(r + 4.0 * h / 5.0, y4, e);
        ShootState y5 =
            axpy(axpy(axpy(axpy(s, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
        const ShootState k5 = shoot_rhs(r + 8.0 * h / 9.0, y5, e);
        ShootState y6 = axpy(
            axpy(axpy(axpy(axpy(s, h * a61, k1), h * a62, k2), h * a63, k3), h * a64, k4),
            h * a65, k5);
        const ShootState k6 = shoot_rhs(r + h, y6, e);
        ShootState snew =
            axpy(axpy(axpy(axpy(axpy(s, h * b1, k1), h * b3, k3), h * b4, k4), h * b5, k5),
                 h * b6, k6);
        const ShootState k7 = shoot_rhs(r + h, snew, e);

        const double errs[4] = {
            h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u),
            h * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du + e6 * k6.du + e7 * k7.du),
            h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v),
            h * (e1 * k1.dv + e3 * k3.dv + e4 * k4.dv + e5 * k5.dv + e6 * k6.dv + e7 * k7.dv)};
        const double vals[4] = {s.u, s.du, s.v, s.dv};
        double err = 0.0;
        for (int c = 0; c < 4; ++c)
            err = std::max(err, std::abs(errs[c]) / (atol + rtol * std::abs(vals[c])));

        if (err <= 1.0 || h <= 1e-13 * R) {
            on_step(r, s, r + h, snew, k1, k7);
            r += h;
            s = snew;
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
    }
    out.uR = s.u;
    out.vR = s.v;
    out.ok = true;
    return out;
}

inline ShootOutcome shoot_once(const ExponentPair& e, double R, double M, double N, double rtol,
                               Field<RadialGrid>* sample_u, Field<RadialGrid>* sample_v) {
    const double r0 = 1e-6 * R;
    const double Np = stable_pow(N, e.p()).value;
    const double Mq = stable_pow(M, e.q()).value;
    ShootState s{M - Np * r0 * r0 / 4.0, -Np * r0 / 2.0, N - Mq * r0 * r0 / 4.0, -Mq * r0 / 2.0};

    const RadialGrid* g = sample_u ? &sample_u->grid() : nullptr;
    int next_node = 0;
    if (g) {
        // Nodes inside the Taylor zone come straight from the expansion.
        while (next_node <= g->n() && g->node(next_node) <= r0) {
            const double rr = g->node(next_node);
            (*sample_u)[next_node] = M - Np * rr * rr / 4.0;
            (*sample_v)[next_node] = N - Mq * rr * rr / 4.0;
            ++next_node;
        }
    }

    auto on_step = [&](double ra, const ShootState& sa, double rb, const ShootState& sb,
                       const ShootState& ka, const ShootState& kb) {
        if (!g) return;
        while (next_node <= g->n() && g->node(next_node) <= rb) {
            const double rr = g->node(next_node);
            if (rr > ra) {
                const double w = rb - ra;
                const double th = (rr - ra) / w;
                const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
                const double h10 = th * (1.0 - th) * (1.0 - th);
                const double h01 = th * th * (3.0 - 2.0 * th);
                const double h11 = th * th * (th - 1.0);
                (*sample_u)[next_node] =
                    h00 * sa.u + h10 * w * ka.u + h01 * sb.u + h11 * w * kb.u;
                (*sample_v)[next_node] =
                    h00 * sa.v + h10 * w * ka.v + h01 * sb.v + h11 * w * kb.v;
            }
            ++next_node;
        }
    };
    auto res = integrate_dopri(e, r0, R, s, rtol, std::max(M, N), on_step);
    if (g && res.ok) {
        (*sample_u)[g->n()] = 0.0;
        (*sample_v)[g->n()] = 0.0;
    }
    return res;
}

struct ShootRoot {
    double M = 0.0, N = 0.0;
    double miss = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
};

// 2D Newton with finite-difference Jacobian on the shooting map
// (M, N) -> (u(R), v(R)), damped by plain backtracking on the miss norm.
inline ShootRoot shoot_root(const ExponentPair& e, double R, double M0, double N0, double tol,
                            double rtol) {
    ShootRoot rt;
    rt.M = M0;
    rt.N = N0;
    auto G = shoot_once(e, R, rt.M, rt.N, rtol, nullptr, nullptr);
    if (!G.ok) {
        rt.diverged = true;
        return rt;
    }
    double miss = std::max(std::abs(G.uR), std::abs(G.vR));
    for (int it = 0; it < 80; ++it) {
        rt.iterations = it;
        rt.miss = miss / std::max(rt.M, rt.N);
        if (rt.miss <= tol) {
            rt.converged = true;
            return rt;
        }
        const double dM = 1e-7 * rt.M, dN = 1e-7 * rt.N;
        const auto GM = shoot_once(e, R, rt.M + dM, rt.N, rtol, nullptr, nullptr);
        const auto GN = shoot_once(e, R, rt.M, rt.N + dN, rtol, nullptr, nullptr);
        if (!GM.ok || !GN.ok) {
            rt.diverged = true;
            return rt;
        }
        const double j11 = (GM.uR - G.uR) / dM, j12 = (GN.uR - G.uR) / dN;
        const double j21 = (GM.vR - G.vR) / dM, j22 = (GN.vR - G.vR) / dN;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) return rt;
        const double stepM = -(j22 * G.uR - j12 * G.vR) / det;
        const double stepN = -(-j21 * G.uR + j11 * G.vR) / det;

        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double Mt = rt.M + alpha * stepM, Nt = rt.N + alpha * stepN;
            if (Mt > 0.0 && Nt > 0.0) {
                const auto Gt = shoot_once(e, R, Mt, Nt, rtol, nullptr, nullptr);
                if (Gt.ok) {
                    const double mt = std::max(std::abs(Gt.uR), std::abs(Gt.vR));
                    if (mt < miss) {
                        rt.M = Mt;
                        rt.N = Nt;
                        G = Gt;
                        miss = mt;
                        accepted = true;
                        break;
                    }
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) return rt;
    }
    return rt;
}

}  // namespace detail

/// Shooting-method solve, the independent oracle for solve_newton. Finds
/// (M, N) = (u(0), v(0)) such that the IVP hits u(R) = v(R) = 0 within
/// tol * max(M, N), then samples the trajectory onto a RadialGrid with
/// `sample_n` intervals. A ladder of intermediate q's is climbed when the
/// cold start fails. `tol` must lie in (0, 1e-6].
inline SolutionPair<RadialGrid> solve_shooting(const ExponentPair& e, double R, double tol,
                                               int sample_n = 2048) {
    if (!(tol > 0.0) || tol > 1e-6)
        throw std::invalid_argument("solve_shooting: tol must lie in (0, 1e-6]");
    const double rtol = tol / 10.0;
    const double lambda = disk_eigenvalue_reference(R);

    auto guess = detail::init_amplitudes(e, lambda);
    auto root = detail::shoot_root(e, R, guess.first, guess.second, tol, rtol);

    if (!root.converged && e.q() > 4.0) {
        // Ladder: start from q = 4, where the eigenfunction guess is reliable,
        // and walk q geometrically toward the target (p along the same path),
        // reusing each converged (M, N) as the next guess.
        const double q_start = 4.0;
        double M = 0.0, N = 0.0;
        bool have = false;
        double qq = q_start;
        while (true) {
            const double t = std::clamp(std::log(qq / q_start) / std::log(e.q() / q_start), 0.0, 1.0);
            ExponentPair el(std::pow(e.p(), t), qq);
            if (!have) {
                auto g0 = detail::init_amplitudes(el, lambda);
                M = g0.first;
                N = g0.second;
            }
            auto r2 = detail::shoot_root(el, R, M, N, tol, rtol);
            if (!r2.converged) {
                root = r2;
                break;
            }
            M = r2.M;
            N = r2.N;
            have = true;
            if (qq >= e.q()) {
                root = r2;
                break;
            }
            qq = std::min(e.q(), qq * std::sqrt(2.0));
        }
    }

    RadialGrid grid(R, sample_n);
    SolutionPair<RadialGrid> out{e, Field<RadialGrid>(grid), Field<RadialGrid>(grid)};
    out.newton_iterations = root.iterations;
    out.residual_norm = root.miss;
    if (!root.converged) {
        out.status = root.diverged ? SolveStatus::ShootingDivergence : SolveStatus::NonConvergence;
        return out;
    }
    detail::shoot_once(e, R, root.M, root.N, rtol, &out.u, &out.v);
    out.converged = true;
    out.status = SolveStatus::Converged;
    return out;
}

}  // namespace lanemden
