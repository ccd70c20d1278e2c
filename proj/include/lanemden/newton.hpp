#pragma once

// Damped Newton engine shared by the radial and planar solvers. The step is
// globalized by Armijo backtracking on the residual 2-norm (factor 0.5 down
// to 2^-20, slope 1e-4), which also keeps iterates from overshooting into
// heavily negative territory where u^q has no meaning.

#include <Eigen/Sparse>
#include <cmath>
#include <limits>

namespace lanemden::detail {

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    double residual_rel = std::numeric_limits<double>::infinity();
    bool line_search_failed = false;
    bool linear_failure = false;
};

inline constexpr double newton_armijo = 1e-4;
inline constexpr double newton_backtrack = 0.5;
inline constexpr double newton_min_step = 9.5367431640625e-7;  // 2^-20

/// Solves F(z) = 0. `residual(z, F)` fills F; `jacobian(z, J)` assembles the
/// sparse Jacobian (fixed sparsity pattern across calls); `linear(J, rhs, d)`
/// solves J d = rhs and returns false on breakdown; `scale(z)` is what
/// max|F| is measured against. Convergence: max|F| <= tol * scale(z).
template <class Residual, class Jacobian, class Linear, class Scale>
NewtonReport damped_newton(Eigen::VectorXd& z, Residual&& residual, Jacobian&& jacobian,
                           Linear&& linear, Scale&& scale, double tol, int max_iter) {
    const Eigen::Index m = z.size();
    Eigen::VectorXd F(m), Ft(m), zt(m), d(m);
    Eigen::SparseMatrix<double> J(m, m);

    residual(z, F);
    double phi = F.norm();

    NewtonReport rep;
    for (int it = 0; it <= max_iter; ++it) {
        rep.iterations = it;
        rep.residual_rel = F.lpNorm<Eigen::Infinity>() / scale(z);
        if (rep.residual_rel <= tol) {
            rep.converged = true;
            return rep;
        }
        if (it == max_iter) return rep;

        jacobian(z, J);
        if (!linear(J, Eigen::VectorXd(-F), d)) {
            rep.linear_failure = true;
            return rep;
        }

        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= newton_min_step) {
            zt = z + alpha * d;
            residual(zt, Ft);
            const double phit = Ft.norm();
            if (std::isfinite(phit) && phit <= (1.0 - newton_armijo * alpha) * phi) {
                accepted = true;
                phi = phit;
                break;
            }
            alpha *= newton_backtrack;
        }
        if (!accepted) {
            rep.line_search_failed = true;
            return rep;
        }
        z.swap(zt);
        F.swap(Ft);
    }
    return rep;
}

}  // namespace lanemden::detail
