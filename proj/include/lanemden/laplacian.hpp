#pragma once

// Discrete Dirichlet Laplacians. The radial stencil is the standard
// second-order one for Δw = w'' + w'/r, with the L'Hopital value
// Δw(0) = 2 w''(0) at the center, which the one-sided flux form turns into
// -4(w_1 - w_0)/h^2 without ghost nodes. The planar stencil is the five-point
// Laplacian. Assembly is exposed as triplets with a row/column stride so the
// coupled Newton systems can interleave (u, v) unknowns.

#include <Eigen/Sparse>
#include <vector>

#include "lanemden/core.hpp"

namespace lanemden {

/// (-Δ_h f) at every node; boundary entries are set to 0. Assumes f carries
/// zero boundary values (Dirichlet).
inline Field<RadialGrid> neg_laplacian(const Field<RadialGrid>& f) {
    const auto& g = f.grid();
    const int n = g.n();
    const double h = g.h();
    Field<RadialGrid> out(g);
    out[0] = -4.0 * (f[1] - f[0]) / (h * h);
    for (int i = 1; i < n; ++i) {
        const double r = g.node(i);
        out[i] = -((f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h) +
                   (f[i + 1] - f[i - 1]) / (2.0 * r * h));
    }
    out[n] = 0.0;
    return out;
}

inline Field<PlanarGrid> neg_laplacian(const Field<PlanarGrid>& f) {
    const auto& g = f.grid();
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    Field<PlanarGrid> out(g);
    for (int j = 1; j <= g.ny(); ++j) {
        for (int i = 1; i <= g.nx(); ++i) {
            const std::size_t c = g.index(i, j);
            out[c] = (2.0 * ax + 2.0 * ay) * f[c] -
                     ax * (f[g.index(i - 1, j)] + f[g.index(i + 1, j)]) -
                     ay * (f[g.index(i, j - 1)] + f[g.index(i, j + 1)]);
        }
    }
    return out;
}

namespace detail {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Rows/columns of (-Δ_h) over the radial unknowns i = 0..n-1 (node n is the
// Dirichlet boundary). Entry (i, j) lands at (offset + stride*i, offset + stride*j).
inline void radial_neg_laplacian_triplets(const RadialGrid& g, Triplets& out, int offset = 0,
                                          int stride = 1) {
    const int n = g.n();
    const double h = g.h();
    const double ih2 = 1.0 / (h * h);
    out.emplace_back(offset, offset, 4.0 * ih2);
    out.emplace_back(offset, offset + stride, -4.0 * ih2);
    for (int i = 1; i < n; ++i) {
        const double r = g.node(i);
        const double cm = ih2 - 1.0 / (2.0 * r * h);
        const double cp = ih2 + 1.0 / (2.0 * r * h);
        out.emplace_back(offset + stride * i, offset + stride * (i - 1), -cm);
        out.emplace_back(offset + stride * i, offset + stride * i, 2.0 * ih2);
        if (i + 1 < n) out.emplace_back(offset + stride * i, offset + stride * (i + 1), -cp);
    }
}

// Five-point (-Δ_h) over the lexicographic interior unknowns.
inline void planar_neg_laplacian_triplets(const PlanarGrid& g, Triplets& out, int offset = 0,
                                          int stride = 1) {
    const double ax = 1.0 / (g.hx() * g.hx());
    const double ay = 1.0 / (g.hy() * g.hy());
    for (int j = 1; j <= g.ny(); ++j) {
        for (int i = 1; i <= g.nx(); ++i) {
            const int k = g.interior_index(i, j);
            const int row = offset + stride * k;
            out.emplace_back(row, row, 2.0 * ax + 2.0 * ay);
            if (i > 1) out.emplace_back(row, offset + stride * g.interior_index(i - 1, j), -ax);
            if (i < g.nx()) out.emplace_back(row, offset + stride * g.interior_index(i + 1, j), -ax);
            if (j > 1) out.emplace_back(row, offset + stride * g.interior_index(i, j - 1), -ay);
            if (j < g.ny()) out.emplace_back(row, offset + stride * g.interior_index(i, j + 1), -ay);
        }
    }
}

}  // namespace detail
}  // namespace lanemden
