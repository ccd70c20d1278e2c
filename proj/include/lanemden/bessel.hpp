#pragma once

// Bessel J0 via its power series, and its first zero by bisection. This is
// deliberately independent of the finite-difference spectral path: j0^2 / R^2
// is the exact first Dirichlet eigenvalue of the disk of radius R, so the
// pair (series, bisection) serves as the reference the discrete eigensolver
// is checked against.

#include <cmath>
#include <stdexcept>

namespace lanemden {

/// J0(x) = Σ_k (-1)^k (x^2/4)^k / (k!)^2. Accurate to roundoff for the
/// moderate arguments used here (|x| <= ~10).
inline double bessel_j0(double x) {
    const double z = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= -z / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return sum;
}

/// First positive zero of J0 (root in (2, 3)), bisected to `tol`.
inline double first_bessel_j0_zero(double tol = 1e-13) {
    if (!(tol > 0.0)) throw std::invalid_argument("first_bessel_j0_zero: tol must be > 0");
    double lo = 2.0, hi = 3.0;
    double flo = bessel_j0(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = bessel_j0(mid);
        if ((flo > 0.0) == (fmid > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// First Dirichlet eigenvalue of the disk of radius R, from the Bessel zero.
inline double disk_eigenvalue_reference(double radius) {
    const double j0 = first_bessel_j0_zero();
    return j0 * j0 / (radius * radius);
}

}  // namespace lanemden
