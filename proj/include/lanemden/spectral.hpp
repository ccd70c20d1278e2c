#pragma once

// First Dirichlet eigenpair of -Δ by inverse power iteration on the discrete
// Laplacian (one LU factorization, repeated solves), with the eigenvalue
// Richardson-extrapolated over the given grid and a once-coarsened one.
// The eigenfunction is normalized to discrete L1 norm 1, matching the
// normalization every eigenfunction identity below uses.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <optional>

#include "lanemden/core.hpp"
#include "lanemden/laplacian.hpp"

namespace lanemden {

namespace detail {

struct RawEig {
    double lambda = 0.0;
    Eigen::VectorXd phi;
    bool converged = false;
};

template <class Grid>
void assemble_neg_laplacian(const Grid& g, Eigen::SparseMatrix<double>& A) {
    Triplets tris;
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        A.resize(g.n(), g.n());
        radial_neg_laplacian_triplets(g, tris);
    } else {
        A.resize(g.interior_count(), g.interior_count());
        planar_neg_laplacian_triplets(g, tris);
    }
    A.setFromTriplets(tris.begin(), tris.end());
}

// Quadrature weight attached to unknown k of the eigenproblem.
inline double unknown_weight(const RadialGrid& g, int k) { return g.weight(k); }
inline double unknown_weight(const PlanarGrid& g, int k) {
    const int i = k % g.nx() + 1;
    const int j = k / g.nx() + 1;
    return g.weight(i, j);
}

template <class Grid>
RawEig inverse_power_iteration(const Grid& g) {
    Eigen::SparseMatrix<double> A;
    assemble_neg_laplacian(g, A);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);

    RawEig out;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(A.rows());
    x.normalize();
    double lam_prev = 0.0;
    for (int it = 0; it < 500; ++it) {
        Eigen::VectorXd y = lu.solve(x);
        const double ynorm = y.norm();
        const double lam = 1.0 / ynorm;
        x = y / ynorm;
        if (it > 0 && std::abs(lam - lam_prev) <= 1e-12 * lam) {
            out.converged = true;
            lam_prev = lam;
            break;
        }
        lam_prev = lam;
    }
    if (x.sum() < 0.0) x = -x;

    // Weighted Rayleigh quotient of the converged vector; this is the value
    // the eigenfunction reproduces exactly.
    const Eigen::VectorXd Ax = A * x;
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double w = unknown_weight(g, static_cast<int>(k));
        num += w * x[k] * Ax[k];
        den += w * x[k] * x[k];
    }
    out.lambda = num / den;
    out.phi = std::move(x);
    return out;
}

inline std::optional<RadialGrid> coarsen(const RadialGrid& g) {
    if (g.n() % 2 != 0 || g.n() / 2 < 16) return std::nullopt;
    return RadialGrid(g.radius(), g.n() / 2);
}
inline std::optional<PlanarGrid> coarsen(const PlanarGrid& g) {
    if ((g.nx() + 1) % 2 != 0 || (g.ny() + 1) % 2 != 0) return std::nullopt;
    const int cx = (g.nx() + 1) / 2 - 1, cy = (g.ny() + 1) / 2 - 1;
    if (cx < 16 || cy < 16) return std::nullopt;
    return PlanarGrid(g.domain(), cx, cy);
}

inline double mesh_h(const RadialGrid& g) { return g.h(); }
inline double mesh_h(const PlanarGrid& g) { return std::max(g.hx(), g.hy()); }

template <class Grid>
Field<Grid> embed_eigenvector(const Grid& g, const Eigen::VectorXd& x) {
    Field<Grid> phi(g);
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        for (int i = 0; i < g.n(); ++i) phi[i] = x[i];
    } else {
        for (int j = 1; j <= g.ny(); ++j)
            for (int i = 1; i <= g.nx(); ++i) phi[g.index(i, j)] = x[g.interior_index(i, j)];
    }
    return phi;
}

}  // namespace detail

/// First Dirichlet eigenpair of -Δ on the grid. Iterates until the
/// eigenvalue drift per step falls under 1e-12 (a stagnating iteration
/// returns its best estimate with converged = false). `lambda` carries the
/// two-grid extrapolation; when the grid cannot be halved cleanly it falls
/// back to the single-grid value.
template <class Grid>
Eigenpair<Grid> first_dirichlet_eigenpair(const Grid& grid) {
    const auto fine = detail::inverse_power_iteration(grid);

    Eigenpair<Grid> out{/*lambda=*/fine.lambda, /*lambda_grid=*/fine.lambda,
                        detail::embed_eigenvector(grid, fine.phi), fine.converged};

    if (const auto coarse_grid = detail::coarsen(grid)) {
        const auto coarse = detail::inverse_power_iteration(*coarse_grid);
        const double hf = detail::mesh_h(grid), hc = detail::mesh_h(*coarse_grid);
        // General two-grid h^2 extrapolation (exact 2:1 ratio not required).
        out.lambda = (hc * hc * fine.lambda - hf * hf * coarse.lambda) / (hc * hc - hf * hf);
        out.converged = fine.converged && coarse.converged;
    }

    double norm = 0.0;
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        norm = integrate(grid, [&](int i) { return std::abs(out.phi[i]); });
    } else {
        norm = integrate(grid, [&](int i, int j) { return std::abs(out.phi[grid.index(i, j)]); });
    }
    for (auto& v : out.phi.values()) v /= norm;
    return out;
}

}  // namespace lanemden
