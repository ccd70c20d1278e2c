#pragma once

// Five-point finite-difference Newton solver on origin-centered rectangles,
// plus the one-sided boundary traces (normal derivatives) every boundary
// integral below is built from. Rectangles keep the Pohozaev and flux checks
// honest off the disk; corners are handled by sampling traces at boundary
// nodes away from corners, whose products vanish there anyway.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lanemden/core.hpp"
#include "lanemden/laplacian.hpp"
#include "lanemden/newton.hpp"

namespace lanemden {

struct PlanarSolveConfig {
    double tol = 1e-10;
    int max_iter = 200;
    enum class Linear { SparseLU, BiCgStab } linear = Linear::SparseLU;
    std::optional<SolutionPair<PlanarGrid>> warm_start;

    void validate() const {
        if (!(tol > 0.0) || tol > 1e-4)
            throw std::invalid_argument("PlanarSolveConfig: tol must lie in (0, 1e-4]");
        if (max_iter < 1) throw std::invalid_argument("PlanarSolveConfig: max_iter >= 1");
    }
};

namespace detail {

inline void planar_system_residual(const PlanarGrid& g, const ExponentPair& e,
                                   const Eigen::VectorXd& z, Eigen::VectorXd& F) {
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    auto u = [&](int i, int j) {
        return g.is_boundary(i, j) ? 0.0 : z[2 * g.interior_index(i, j)];
    };
    auto v = [&](int i, int j) {
        return g.is_boundary(i, j) ? 0.0 : z[2 * g.interior_index(i, j) + 1];
    };
    for (int j = 1; j <= g.ny(); ++j) {
        for (int i = 1; i <= g.nx(); ++i) {
            const int k = g.interior_index(i, j);
            const double lap_u = (2.0 * ax + 2.0 * ay) * u(i, j) -
                                 ax * (u(i - 1, j) + u(i + 1, j)) -
                                 ay * (u(i, j - 1) + u(i, j + 1));
            const double lap_v = (2.0 * ax + 2.0 * ay) * v(i, j) -
                                 ax * (v(i - 1, j) + v(i + 1, j)) -
                                 ay * (v(i, j - 1) + v(i, j + 1));
            F[2 * k] = lap_u - pow_clamped(v(i, j), e.p()).value;
            F[2 * k + 1] = lap_v - pow_clamped(u(i, j), e.q()).value;
        }
    }
}

inline void planar_system_jacobian(const PlanarGrid& g, const ExponentPair& e,
                                   const Eigen::VectorXd& z, Eigen::SparseMatrix<double>& J) {
    Triplets tris;
    tris.reserve(12 * static_cast<std::size_t>(g.interior_count()));
    planar_neg_laplacian_triplets(g, tris, /*offset=*/0, /*stride=*/2);
    planar_neg_laplacian_triplets(g, tris, /*offset=*/1, /*stride=*/2);
    for (int k = 0; k < g.interior_count(); ++k) {
        tris.emplace_back(2 * k, 2 * k + 1, -pow_clamped(z[2 * k + 1], e.p()).derivative);
        tris.emplace_back(2 * k + 1, 2 * k, -pow_clamped(z[2 * k], e.q()).derivative);
    }
    J.setFromTriplets(tris.begin(), tris.end());
}

// Same scale as the radial solver, floored by the stencil's roundoff level.
inline double planar_residual_scale(const ExponentPair& e, const Eigen::VectorXd& z,
                                    const PlanarGrid& g, double tol) {
    double umax = 0.0, vmax = 0.0;
    for (Eigen::Index k = 0; k + 1 < z.size(); k += 2) {
        umax = std::max(umax, z[k]);
        vmax = std::max(vmax, z[k + 1]);
    }
    const double stencil = 2.0 / (g.hx() * g.hx()) + 2.0 / (g.hy() * g.hy());
    const double round_floor =
        4.0 * std::numeric_limits<double>::epsilon() * (umax + vmax) * stencil;
    return std::max({std::max(pow_clamped(vmax, e.p()).value, pow_clamped(umax, e.q()).value),
                     round_floor / tol, 1e-300});
}

}  // namespace detail

/// Newton solve on the rectangle, initialized from the scaled product-sine
/// eigenfunction (its eigenvalue pi^2 (1/a^2 + 1/b^2) is analytic, so no
/// discrete eigensolve is needed here).
inline SolutionPair<PlanarGrid> solve_planar(const ExponentPair& e, const PlanarGrid& grid,
                                             const PlanarSolveConfig& cfg = {}) {
    cfg.validate();
    const int m = grid.interior_count();
    Eigen::VectorXd z(2 * m);

    if (cfg.warm_start && cfg.warm_start->u.grid() == grid) {
        const auto& w = *cfg.warm_start;
        for (int j = 1; j <= grid.ny(); ++j)
            for (int i = 1; i <= grid.nx(); ++i) {
                const int k = grid.interior_index(i, j);
                z[2 * k] = w.u[grid.index(i, j)];
                z[2 * k + 1] = w.v[grid.index(i, j)];
            }
    } else {
        const double a = grid.domain().side_a(), b = grid.domain().side_b();
        const double lambda = pi * pi * (1.0 / (a * a) + 1.0 / (b * b));
        const double alpha = std::pow(lambda, (e.p() + 1.0) / e.kappa());
        const double beta = std::pow(lambda, (e.q() + 1.0) / e.kappa());
        for (int j = 1; j <= grid.ny(); ++j)
            for (int i = 1; i <= grid.nx(); ++i) {
                const int k = grid.interior_index(i, j);
                const double s = std::sin(pi * (grid.x(i) + 0.5 * a) / a) *
                                 std::sin(pi * (grid.y(j) + 0.5 * b) / b);
                z[2 * k] = alpha * s;
                z[2 * k + 1] = beta * s;
            }
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    auto linear = [&](const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs,
                      Eigen::VectorXd& d) {
        if (cfg.linear == PlanarSolveConfig::Linear::SparseLU) {
            if (!analyzed) {
                lu.analyzePattern(J);
                analyzed = true;
            }
            lu.factorize(J);
            if (lu.info() != Eigen::Success) return false;
            d = lu.solve(rhs);
            return lu.info() == Eigen::Success;
        }
        // Diagonal-preconditioned Krylov route; the coupled Jacobian is
        // nonsymmetric, so BiCGSTAB stands in for plain CG.
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> krylov;
        krylov.setTolerance(1e-12);
        krylov.setMaxIterations(20000);
        krylov.compute(J);
        d = krylov.solve(rhs);
        return krylov.info() == Eigen::Success;
    };

    auto rep = detail::damped_newton(
        z,
        [&](const Eigen::VectorXd& y, Eigen::VectorXd& F) {
            detail::planar_system_residual(grid, e, y, F);
        },
        [&](const Eigen::VectorXd& y, Eigen::SparseMatrix<double>& J) {
            J.resize(2 * m, 2 * m);
            detail::planar_system_jacobian(grid, e, y, J);
        },
        linear,
        [&](const Eigen::VectorXd& y) {
            return detail::planar_residual_scale(e, y, grid, cfg.tol);
        },
        cfg.tol, cfg.max_iter);

    SolutionPair<PlanarGrid> out{e, Field<PlanarGrid>(grid), Field<PlanarGrid>(grid)};
    double zmin = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= grid.ny(); ++j)
        for (int i = 1; i <= grid.nx(); ++i) {
            const int k = grid.interior_index(i, j);
            out.u[grid.index(i, j)] = z[2 * k];
            out.v[grid.index(i, j)] = z[2 * k + 1];
            zmin = std::min({zmin, z[2 * k], z[2 * k + 1]});
        }
    out.residual_norm = rep.residual_rel;
    out.newton_iterations = rep.iterations;
    if (rep.converged && zmin > 0.0) {
        out.converged = true;
        out.status = SolveStatus::Converged;
    } else {
        out.status = (zmin < 0.0 && (rep.line_search_failed || rep.converged))
                         ? SolveStatus::PositivityLoss
                         : SolveStatus::NonConvergence;
    }
    return out;
}

/// Warm-start continuation in (p, q) for the planar solver; same stepping
/// policy as the radial version.
inline SolutionPair<PlanarGrid> solve_planar_continued(const ExponentPair& e,
                                                       const PlanarGrid& grid,
                                                       const PlanarSolveConfig& cfg = {}) {
    if (!cfg.warm_start) return solve_planar(e, grid, cfg);
    SolutionPair<PlanarGrid> current = *cfg.warm_start;
    const double p0 = current.exponents.p(), q0 = current.exponents.q();
    const double span =
        std::max(std::abs(std::log2(e.q() / q0)), std::abs(std::log2(e.p() / p0)));
    if (span == 0.0) {
        PlanarSolveConfig c = cfg;
        c.warm_start = current;
        return solve_planar(e, grid, c);
    }
    double t = 0.0;
    double dt = std::min(1.0, 0.25 / span);
    const double dt_min = (1.0 / 64.0) / span;
    const double dt_default = dt;
    while (t < 1.0) {
        const double tn = std::min(1.0, t + dt);
        const ExponentPair et(p0 * std::pow(e.p() / p0, tn), q0 * std::pow(e.q() / q0, tn));
        PlanarSolveConfig c = cfg;
        c.warm_start = current;
        auto s = solve_planar(et, grid, c);
        if (s.converged) {
            current = std::move(s);
            t = tn;
            dt = std::min(dt * 2.0, dt_default);
        } else {
            dt *= 0.5;
            if (dt < dt_min) return s;
        }
    }
    return current;
}

// ---------------------------------------------------------------------------
// Boundary traces

/// One sample of the boundary with its position, x·ν, and arc weight ds.
struct BoundarySample {
    double x, y;
    double x_dot_nu;
    double ds;
};

/// The disk boundary seen radially: one sample stands for the whole circle.
inline std::vector<BoundarySample> boundary_samples(const RadialGrid& g) {
    return {{g.radius(), 0.0, g.radius(), 2.0 * pi * g.radius()}};
}

/// Rectangle boundary nodes away from corners, ordered +x side, -x side,
/// +y side, -y side. Corner contributions to boundary integrals vanish for
/// traces of Dirichlet fields, so trapezoid weights along each side reduce
/// to ds = h at every listed node.
inline std::vector<BoundarySample> boundary_samples(const PlanarGrid& g) {
    std::vector<BoundarySample> out;
    out.reserve(2 * (g.nx() + g.ny()));
    const double a = g.domain().side_a(), b = g.domain().side_b();
    for (int j = 1; j <= g.ny(); ++j) out.push_back({0.5 * a, g.y(j), 0.5 * a, g.hy()});
    for (int j = 1; j <= g.ny(); ++j) out.push_back({-0.5 * a, g.y(j), 0.5 * a, g.hy()});
    for (int i = 1; i <= g.nx(); ++i) out.push_back({g.x(i), 0.5 * b, 0.5 * b, g.hx()});
    for (int i = 1; i <= g.nx(); ++i) out.push_back({g.x(i), -0.5 * b, 0.5 * b, g.hx()});
    return out;
}

/// Outward normal derivative of a boundary-zero field, second-order one-sided:
/// f_nu = (3 f_b - 4 f_{-1} + f_{-2}) / (2h) with f_b = 0, so f_nu <= 0 for
/// positive superharmonic f. Order matches boundary_samples(grid).
inline std::vector<double> normal_derivative(const Field<RadialGrid>& f) {
    const auto& g = f.grid();
    const int n = g.n();
    if (f[n] != 0.0) throw std::invalid_argument("normal_derivative: field must vanish on the boundary");
    const double h = g.h();
    return {(3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h)};
}

inline std::vector<double> normal_derivative(const Field<PlanarGrid>& f) {
    const auto& g = f.grid();
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), hy = g.hy();
    std::vector<double> out;
    out.reserve(2 * (nx + ny));
    for (int j = 1; j <= ny; ++j)
        out.push_back((-4.0 * f[g.index(nx, j)] + f[g.index(nx - 1, j)]) / (2.0 * hx));
    for (int j = 1; j <= ny; ++j)
        out.push_back((-4.0 * f[g.index(1, j)] + f[g.index(2, j)]) / (2.0 * hx));
    for (int i = 1; i <= nx; ++i)
        out.push_back((-4.0 * f[g.index(i, ny)] + f[g.index(i, ny - 1)]) / (2.0 * hy));
    for (int i = 1; i <= nx; ++i)
        out.push_back((-4.0 * f[g.index(i, 1)] + f[g.index(i, 2)]) / (2.0 * hy));
    return out;
}

}  // namespace lanemden
