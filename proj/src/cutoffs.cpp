#include "nlw/cutoffs.hpp"

#include <cmath>

namespace nlw {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double psi_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = psi(t), b = psi(1.0 - t);
  return a / (a + b);
}

double smooth_step_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = psi(t), b = psi(1.0 - t);
  const double s = a + b;
  return (psi_prime(t) * b + a * psi_prime(1.0 - t)) / (s * s);
}

double chi(double x) { return smooth_step(2.0 - x); }
double chi_prime(double x) { return -smooth_step_prime(2.0 - x); }

double bump(double x) {
  const double y = 1.0 - x * x;
  return y > 0.0 ? std::exp(-1.0 / y) : 0.0;
}

double bump_prime(double x) {
  const double y = 1.0 - x * x;
  if (y <= 0.0) return 0.0;
  return std::exp(-1.0 / y) * (-2.0 * x) / (y * y);
}

}  // namespace nlw
