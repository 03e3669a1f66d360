#pragma once

// High-precision quadrature for the analytic constants. Backed by the
// adaptive Gauss-Kronrod rule from Boost.Math.

#include <functional>

namespace nlw {

/// Integral of f(r) r^{D-1} over (0, inf). The half-line is compactified by
/// r = a t / (1 - t); `scale` is a. Throws DivergenceError if the adaptive
/// refinement does not reach `rel_tol`.
double improper_quadrature(const std::function<double(double)>& f, int dim, double rel_tol = 1e-10,
                           double scale = 1.0);

/// Integral of f over [a, b] (no radial weight). Throws DivergenceError on
/// non-convergence.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

}  // namespace nlw
