#include "nlw/ground_state.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlw/error.hpp"
#include "nlw/quadrature.hpp"

namespace nlw {

namespace {

double c_of(int dim) { return dim * (dim - 2.0); }

void check_dim(int dim) {
  require(dim >= 4 && dim <= 8, "unsupported dimension " + std::to_string(dim) + " (need 4..8)");
}

double base_value(ProfileKind kind, double r, int dim) {
  switch (kind) {
    case ProfileKind::W: return W(r, dim);
    case ProfileKind::LambdaW: return LambdaW(r, dim);
    case ProfileKind::UnderLambdaLambdaW: return UnderLambdaLambdaW(r, dim);
  }
  return 0.0;
}

}  // namespace

double W(double r, int dim) { return std::pow(1.0 + r * r / c_of(dim), -0.5 * (dim - 2)); }

double W_prime(double r, int dim) { return -(r / dim) * std::pow(1.0 + r * r / c_of(dim), -0.5 * dim); }

double W_second(double r, int dim) {
  const double s = r * r / c_of(dim);
  return std::pow(1.0 + s, -0.5 * dim - 1.0) * (s - (1.0 + s) / dim);
}

double LambdaW(double r, int dim) {
  const double s = r * r / c_of(dim);
  return 0.5 * (dim - 2) * (1.0 - s) * std::pow(1.0 + s, -0.5 * dim);
}

double LambdaW_prime(double r, int dim) {
  const double c = c_of(dim);
  const double s = r * r / c;
  const double ds = 2.0 * r / c;
  const double p = 0.5 * (dim - 2);
  return p * ds * std::pow(1.0 + s, -0.5 * dim - 1.0) * (-(1.0 + s) - 0.5 * dim * (1.0 - s));
}

double UnderLambdaLambdaW(double r, int dim) {
  const double s = r * r / c_of(dim);
  const double p = 0.5 * (dim - 2);
  const double bracket = 0.5 * dim * (1.0 - s) * (1.0 + s) - dim * s * (1.0 - s) - 2.0 * s * (1.0 + s);
  return p * std::pow(1.0 + s, -0.5 * dim - 1.0) * bracket;
}

double eval_profile(const BubbleProfile& p, double r) {
  check_dim(p.dim);
  if (!(r >= 0.0)) throw ContractViolation("eval_profile: r must be non-negative");
  if (!(p.lambda > 0.0)) throw ContractViolation("eval_profile: lambda must be positive");
  const double expo = p.normalization == Normalization::H ? 0.5 * (p.dim - 2) : 0.5 * p.dim;
  return std::pow(p.lambda, -expo) * base_value(p.kind, r / p.lambda, p.dim);
}

std::vector<double> sample_profile(const BubbleProfile& p, const RadialGrid& grid) {
  require(p.dim == grid.dim(), "sample_profile: dimension mismatch");
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_profile(p, grid.node(i));
  return out;
}

double analytic_static_defect(double r, int dim) {
  require(r > 0.0, "analytic_static_defect: r must be positive");
  const double w = W(r, dim);
  return W_second(r, dim) + (dim - 1.0) / r * W_prime(r, dim) + nonlinearity_f(w, dim);
}

ConstantsTable closed_form_constants(int dim) {
  check_dim(dim);
  ConstantsTable t;
  t.dim = dim;
  const double D = dim;
  const double cD2 = std::pow(c_of(dim), 0.5 * D);
  t.interaction_constant = (D - 2.0) / (2.0 * D) * cD2;
  const double g1 = std::tgamma(1.0 + 0.5 * D);
  if (dim >= 5) {
    const double published = 2.0 * (D * D - 4.0) * cD2 / (D * D * (D - 4.0)) * g1 / std::tgamma(D);
    t.lamW_L2_sq_published = published;
    t.lamW_L2_sq = published * g1;
    t.omega_sq = t.interaction_constant / *t.lamW_L2_sq;
  }
  t.pairing_UL = dim == 4 ? 32.0 : 0.0;
  const double gh = std::tgamma(0.5 * D);
  t.grad_W_sq = cD2 * gh * gh / (2.0 * std::tgamma(D));
  t.E_W = t.grad_W_sq / D;
  return t;
}

QuadratureConstants quadrature_constants(int dim, double rel_tol) {
  check_dim(dim);
  QuadratureConstants q;
  q.dim = dim;
  const double scale = std::sqrt(c_of(dim));
  const double p = critical_power(dim);
  q.interaction = (dim + 2.0) / (dim - 2.0) *
                  improper_quadrature([&](double r) { return LambdaW(r, dim) * std::pow(W(r, dim), p); }, dim,
                                      rel_tol, scale);
  const double ul_sq = improper_quadrature(
      [&](double r) { const double v = UnderLambdaLambdaW(r, dim); return v * v; }, dim, rel_tol, scale);
  if (dim >= 5) {
    q.lamW_L2_sq = improper_quadrature([&](double r) { const double v = LambdaW(r, dim); return v * v; }, dim,
                                       rel_tol, scale);
    q.pairing_scale = std::sqrt(ul_sq * *q.lamW_L2_sq);
  } else {
    q.pairing_scale = std::numeric_limits<double>::infinity();
  }
  q.pairing_UL = improper_quadrature([&](double r) { return UnderLambdaLambdaW(r, dim) * LambdaW(r, dim); }, dim,
                                     rel_tol, scale);
  q.grad_W_sq = improper_quadrature([&](double r) { const double v = W_prime(r, dim); return v * v; }, dim,
                                    rel_tol, scale);
  q.potential_W = improper_quadrature([&](double r) { return critical_power_abs(W(r, dim), dim); }, dim,
                                      rel_tol, scale);
  return q;
}

double static_residual(const RadialGrid& grid) {
  const int dim = grid.dim();
  const auto w = sample_profile({dim, ProfileKind::W, 1.0, Normalization::H}, grid);
  const double ghost = W(grid.r_max() + 0.5 * grid.h(), dim);
  auto res = laplacian(w, grid, ghost);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] += nonlinearity_f(w[i], dim);
  return std::sqrt(inner_product(res, res, grid));
}

double d4_lamW_partial_integral(double R) {
  require(R > 0.0, "d4_lamW_partial_integral: R must be positive");
  auto integrand = [](double r) {
    const double v = LambdaW(r, 4);
    return v * v * r * r * r;
  };
  const double split = std::min(R, 1.0);
  double total = integrate(integrand, 0.0, split);
  if (R > 1.0) {
    // Logarithmic variable for the 64/r tail.
    total += integrate([&](double x) { const double r = std::exp(x); return integrand(r) * r; }, 0.0, std::log(R));
  }
  return total;
}

double d4_lamW_partial_integral_exact(double R) {
  const double v = 1.0 + R * R / 8.0;
  return 32.0 * (std::log(v) + 5.0 / v - 4.0 / (v * v) + 4.0 / (3.0 * v * v * v) - 7.0 / 3.0);
}

double d4_log_coefficient(double R) {
  return (d4_lamW_partial_integral(2.0 * R) - d4_lamW_partial_integral(R)) / std::numbers::ln2;
}

}  // namespace nlw
