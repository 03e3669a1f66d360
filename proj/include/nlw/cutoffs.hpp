#pragma once

// Fixed smooth profiles: the cutoff chi (1 on [0,1], 0 beyond 2) and the
// standard mollifier bump.

namespace nlw {

/// C-infinity step, 0 for t <= 0 and 1 for t >= 1.
double smooth_step(double t);
double smooth_step_prime(double t);

/// chi(x) = smooth_step(2 - x).
double chi(double x);
double chi_prime(double x);

/// exp(-1/(1 - x^2)) on |x| < 1, zero outside.
double bump(double x);
double bump_prime(double x);

}  // namespace nlw
