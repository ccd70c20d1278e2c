#pragma once

// Core types for the planar Lane-Emden system
//
//     -Δu = v^p,  -Δv = u^q,  u, v > 0 in Ω,  u = v = 0 on ∂Ω
//
// on a disk or an origin-centered rectangle: exponent pairs, domains,
// grids with their quadrature weights, node fields, and the guarded power
// evaluation shared by every solver and diagnostic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanemden {

inline constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Guarded power evaluation

struct PowResult {
    double value;
    double derivative;
};

/// b^e together with d/db b^e, for b >= 0 and e >= 1.
///
/// Bases at or below 1e-300 map to exactly (0, 0): u^q is allowed to
/// underflow to a clean zero instead of subnormal noise, which matters when
/// q runs into the thousands. Negative bases are a contract violation.
inline PowResult stable_pow(double base, double exponent) {
    if (!(base >= 0.0))
        throw std::domain_error("stable_pow: base must be >= 0, got " + std::to_string(base));
    if (!(exponent >= 1.0))
        throw std::domain_error("stable_pow: exponent must be >= 1, got " + std::to_string(exponent));
    constexpr double underflow_floor = 1e-300;
    if (base <= underflow_floor) return {0.0, 0.0};
    return {std::pow(base, exponent), exponent * std::pow(base, exponent - 1.0)};
}

namespace detail {
// Solver-internal variant: clamps slightly negative trial iterates to zero so
// damped Newton can evaluate residuals while the line search restores positivity.
inline PowResult pow_clamped(double base, double exponent) {
    return stable_pow(base < 0.0 ? 0.0 : base, exponent);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Exponents

/// The exponent pair (p, q) of the system, restricted to the superlinear
/// regime p >= 1, q >= 1, pq > 1 (pq = 1 is the eigenvalue problem, whose
/// solutions are not isolated).
class ExponentPair {
public:
    ExponentPair(double p, double q) : p_(p), q_(q) {
        if (!(p >= 1.0) || !(q >= 1.0) || !(p * q > 1.0))
            throw std::invalid_argument(
                "ExponentPair: superlinearity requires p >= 1, q >= 1 and p*q > 1 (got p=" +
                std::to_string(p) + ", q=" + std::to_string(q) + ")");
        rho_ = std::max(p / q, q / p);
    }

    double p() const { return p_; }
    double q() const { return q_; }

    /// Superlinearity margin pq - 1 (strictly positive by construction).
    double kappa() const { return p_ * q_ - 1.0; }

    /// Comparability ratio max(p/q, q/p).
    double comparability() const { return rho_; }

    bool operator==(const ExponentPair&) const = default;

private:
    double p_, q_, rho_;
};

enum class Criticality { Subcritical, Critical, Supercritical };

/// Position of (p, q) relative to the hyperbola
/// 1/(p+1) + 1/(q+1) = (n-2)/n in dimension n. Equality is detected within
/// 1e-12. In n = 2 the right side vanishes and every valid pair is
/// subcritical.
inline Criticality classify(const ExponentPair& e, int dimension) {
    if (dimension < 2) throw std::invalid_argument("classify: dimension must be >= 2");
    const double lhs = 1.0 / (e.p() + 1.0) + 1.0 / (e.q() + 1.0);
    const double rhs = static_cast<double>(dimension - 2) / dimension;
    if (std::abs(lhs - rhs) <= 1e-12) return Criticality::Critical;
    return lhs > rhs ? Criticality::Subcritical : Criticality::Supercritical;
}

// ---------------------------------------------------------------------------
// Domains

enum class Shape { Disk, Rectangle };

/// Disk of radius R or rectangle (-a/2, a/2) x (-b/2, b/2), both centered at
/// the origin and hence star-shaped about it.
class DomainSpec {
public:
    static DomainSpec disk(double radius) {
        if (!(radius > 0.0)) throw std::invalid_argument("DomainSpec: disk radius must be > 0");
        return DomainSpec(Shape::Disk, radius, 0.0);
    }
    static DomainSpec rectangle(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("DomainSpec: rectangle sides must be > 0");
        return DomainSpec(Shape::Rectangle, a, b);
    }

    Shape shape() const { return shape_; }

    double radius() const {
        require(Shape::Disk);
        return d1_;
    }
    double side_a() const {
        require(Shape::Rectangle);
        return d1_;
    }
    double side_b() const {
        require(Shape::Rectangle);
        return d2_;
    }

    double diameter() const {
        return shape_ == Shape::Disk ? 2.0 * d1_ : std::hypot(d1_, d2_);
    }
    double area() const { return shape_ == Shape::Disk ? pi * d1_ * d1_ : d1_ * d2_; }
    bool star_shaped() const { return true; }

    bool operator==(const DomainSpec&) const = default;

private:
    DomainSpec(Shape s, double d1, double d2) : shape_(s), d1_(d1), d2_(d2) {}
    void require(Shape s) const {
        if (shape_ != s) throw std::logic_error("DomainSpec: wrong shape accessor");
    }

    Shape shape_;
    double d1_, d2_;
};

// ---------------------------------------------------------------------------
// Grids

/// Uniform radial grid r_i = i h, i = 0..n, h = R/n, for the disk problem.
/// Node weights implement the trapezoid rule for integrals over the disk,
/// i.e. 2π ∫ f(r) r dr.
class RadialGrid {
public:
    RadialGrid(double radius, int n) : R_(radius), n_(n) {
        if (!(radius > 0.0)) throw std::invalid_argument("RadialGrid: radius must be > 0");
        if (n < 16) throw std::invalid_argument("RadialGrid: need n >= 16");
    }

    double radius() const { return R_; }
    int n() const { return n_; }
    double h() const { return R_ / n_; }
    double node(int i) const { return i == n_ ? R_ : i * h(); }
    std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }

    /// Quadrature weight of node i: ∫_disk f dx ≈ Σ_i weight(i) f_i.
    double weight(int i) const {
        const double end = (i == 0 || i == n_) ? 0.5 : 1.0;
        return 2.0 * pi * node(i) * h() * end;
    }

    DomainSpec domain() const { return DomainSpec::disk(R_); }

    bool operator==(const RadialGrid&) const = default;

private:
    double R_;
    int n_;
};

/// Tensor grid on an origin-centered rectangle with nx * ny interior nodes;
/// boundary nodes are stored and carry the value 0. Full-grid indices run
/// i = 0..nx+1, j = 0..ny+1, row-major.
class PlanarGrid {
public:
    PlanarGrid(const DomainSpec& rect, int nx, int ny)
        : domain_(rect), nx_(nx), ny_(ny) {
        if (rect.shape() != Shape::Rectangle)
            throw std::invalid_argument("PlanarGrid: domain must be a rectangle");
        if (nx < 16 || ny < 16) throw std::invalid_argument("PlanarGrid: need nx, ny >= 16");
    }

    const DomainSpec& domain() const { return domain_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return domain_.side_a() / (nx_ + 1); }
    double hy() const { return domain_.side_b() / (ny_ + 1); }

    double x(int i) const {
        if (i == 0) return -0.5 * domain_.side_a();
        if (i == nx_ + 1) return 0.5 * domain_.side_a();
        return -0.5 * domain_.side_a() + i * hx();
    }
    double y(int j) const {
        if (j == 0) return -0.5 * domain_.side_b();
        if (j == ny_ + 1) return 0.5 * domain_.side_b();
        return -0.5 * domain_.side_b() + j * hy();
    }

    std::size_t size() const {
        return static_cast<std::size_t>(nx_ + 2) * static_cast<std::size_t>(ny_ + 2);
    }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * (nx_ + 2) + i;
    }
    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx_ + 1 || j == ny_ + 1;
    }

    int interior_count() const { return nx_ * ny_; }
    /// Lexicographic index of interior node (i, j), i = 1..nx, j = 1..ny.
    int interior_index(int i, int j) const { return (j - 1) * nx_ + (i - 1); }

    /// Trapezoid weight of node (i, j): ∫ f dx ≈ Σ weight(i,j) f_ij.
    double weight(int i, int j) const {
        const double wx = (i == 0 || i == nx_ + 1) ? 0.5 : 1.0;
        const double wy = (j == 0 || j == ny_ + 1) ? 0.5 : 1.0;
        return hx() * hy() * wx * wy;
    }

    bool operator==(const PlanarGrid&) const = default;

private:
    DomainSpec domain_;
    int nx_, ny_;
};

// ---------------------------------------------------------------------------
// Fields

/// Node values on a grid. Boundary nodes of accepted solutions are zero and
/// interior nodes strictly positive; the container itself is permissive so
/// solver iterates and residuals can live in it too.
template <class Grid>
class Field {
public:
    explicit Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}
    Field(Grid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    const double& operator[](std::size_t i) const { return values_[i]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max() const { return *std::max_element(values_.begin(), values_.end()); }
    std::size_t argmax() const {
        return static_cast<std::size_t>(
            std::max_element(values_.begin(), values_.end()) - values_.begin());
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Quadrature helpers

/// Σ_i weight(i) f(i) over radial nodes.
template <class F>
double integrate(const RadialGrid& g, F&& node_value) {
    double s = 0.0;
    for (int i = 0; i <= g.n(); ++i) s += g.weight(i) * node_value(i);
    return s;
}

/// Σ_ij weight(i,j) f(i,j) over all planar nodes (boundary included).
template <class F>
double integrate(const PlanarGrid& g, F&& node_value) {
    double s = 0.0;
    for (int j = 0; j <= g.ny() + 1; ++j)
        for (int i = 0; i <= g.nx() + 1; ++i) s += g.weight(i, j) * node_value(i, j);
    return s;
}

inline double integrate(const Field<RadialGrid>& f) {
    return integrate(f.grid(), [&](int i) { return f[i]; });
}
inline double integrate(const Field<PlanarGrid>& f) {
    const auto& g = f.grid();
    return integrate(g, [&](int i, int j) { return f[g.index(i, j)]; });
}

/// ∫ f^e dx with the grid's quadrature; tiny negative roundoff is clamped.
template <class Grid>
double integrate_pow(const Field<Grid>& f, double exponent) {
    if constexpr (std::is_same_v<Grid, RadialGrid>) {
        return integrate(f.grid(),
                         [&](int i) { return detail::pow_clamped(f[i], exponent).value; });
    } else {
        const auto& g = f.grid();
        return integrate(g, [&](int i, int j) {
            return detail::pow_clamped(f[g.index(i, j)], exponent).value;
        });
    }
}

// ---------------------------------------------------------------------------
// Solver outcomes

enum class SolveStatus { Converged, NonConvergence, PositivityLoss, ShootingDivergence };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::NonConvergence: return "non-convergence";
        case SolveStatus::PositivityLoss: return "positivity-loss";
        case SolveStatus::ShootingDivergence: return "shooting-divergence";
    }
    return "unknown";
}

/// A discrete solution (u, v) with its solve metadata. residual_norm is the
/// relative residual max|F| / max(N^p, M^q) at the final iterate, so
/// converged implies residual_norm <= the tolerance in effect.
template <class Grid>
struct SolutionPair {
    ExponentPair exponents;
    Field<Grid> u;
    Field<Grid> v;
    double residual_norm = std::numeric_limits<double>::infinity();
    int newton_iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::NonConvergence;
};

/// First Dirichlet eigenpair of -Δ. `lambda` is the two-grid Richardson
/// extrapolation (the reported eigenvalue); `lambda_grid` is the raw
/// fine-grid value, which matches the Rayleigh quotient of phi exactly.
/// phi is positive in the interior with discrete L1 norm 1.
template <class Grid>
struct Eigenpair {
    double lambda = 0.0;
    double lambda_grid = 0.0;
    Field<Grid> phi;
    bool converged = false;
};

}  // namespace lanemden
