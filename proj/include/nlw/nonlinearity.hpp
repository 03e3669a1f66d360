#pragma once

#include <cmath>

namespace nlw {

enum class NonlinearityOrder { F, FPrime };

/// Exponent 4/(D-2) of the focusing nonlinearity f(u) = |u|^{4/(D-2)} u.
constexpr double critical_power(int dim) { return 4.0 / (dim - 2); }

/// f(u) = |u|^{4/(D-2)} u.
inline double nonlinearity_f(double u, int dim) {
  switch (dim) {
    case 4: return u * u * u;
    case 6: return std::abs(u) * u;
    default: return std::pow(std::abs(u), critical_power(dim)) * u;
  }
}

/// f'(u) = (D+2)/(D-2) |u|^{4/(D-2)}.
inline double nonlinearity_df(double u, int dim) {
  switch (dim) {
    case 4: return 3.0 * u * u;
    case 6: return 2.0 * std::abs(u);
    default: return (dim + 2.0) / (dim - 2.0) * std::pow(std::abs(u), critical_power(dim));
  }
}

inline double nonlinearity(double u, int dim, NonlinearityOrder order) {
  return order == NonlinearityOrder::F ? nonlinearity_f(u, dim) : nonlinearity_df(u, dim);
}

/// |u|^{2D/(D-2)}.
inline double critical_power_abs(double u, int dim) {
  switch (dim) {
    case 4: { const double u2 = u * u; return u2 * u2; }
    case 6: return std::abs(u) * u * u;
    default: return std::pow(std::abs(u), 2.0 * dim / (dim - 2.0));
  }
}

/// Potential density F(u) = (D-2)/(2D) |u|^{2D/(D-2)}, with F' = f.
inline double potential_density(double u, int dim) {
  return (dim - 2.0) / (2.0 * dim) * critical_power_abs(u, dim);
}

}  // namespace nlw
