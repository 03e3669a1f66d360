#include "nlw/modulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nlw/cutoffs.hpp"
#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"

namespace nlw {

namespace {

FieldPair windowed(const FieldPair& u, double nu) {
  FieldPair out(u.grid);
  const RadialGrid& grid = *u.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = chi(grid.node(i) / nu);
    out.u[i] = c * u.u[i];
    out.udot[i] = c * u.udot[i];
  }
  return out;
}

std::vector<double> profile(int dim, ProfileKind kind, double lambda, Normalization norm, const RadialGrid& grid) {
  return sample_profile(BubbleProfile{dim, kind, lambda, norm}, grid);
}

std::vector<double> sample_under_lambda_Z(const ZProfile& z, const RadialGrid& grid, double lambda) {
  const double pref = std::pow(lambda, -0.5 * z.dim);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pref * z.under_lambda(grid.node(i) / lambda);
  return out;
}

struct NewtonResult {
  bool converged = false;
  bool collided = false;
  int iterations = 0;
  std::vector<double> lambdas;
};

NewtonResult newton(const FieldPair& chi_u, const std::vector<int>& signs, std::vector<double> lambdas,
                    const EigenPair& eig, const FitOptions& opt, double f_scale) {
  const RadialGrid& grid = *chi_u.grid;
  const int dim = grid.dim();
  const std::size_t K = lambdas.size();
  NewtonResult res;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    res.iterations = it;
    std::vector<double> g = chi_u.u;
    const auto w = bubble_sum(BubbleConfig{signs, lambdas}, grid);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= w[i];

    Eigen::VectorXd F(K);
    Eigen::MatrixXd J(K, K);
    for (std::size_t j = 0; j < K; ++j) {
      const ZProfile zp = make_Z_profile(eig, grid, lambdas[j]);
      const auto z = sample_Z(zp, grid, lambdas[j]);
      F(j) = inner_product(z, g, grid);
      for (std::size_t k = 0; k < K; ++k) {
        // d/dlog(lambda_k) of -iota_k W_{lambda_k} is iota_k Lambda W_{lambda_k}.
        const auto lw = profile(dim, ProfileKind::LambdaW, lambdas[k], Normalization::H, grid);
        J(j, k) = signs[k] * inner_product(z, lw, grid);
      }
      // lambda d/dlambda Z_{ul lambda} = -(UnderLambda Z)_{ul lambda}.
      J(j, j) -= inner_product(sample_under_lambda_Z(zp, grid, lambdas[j]), g, grid);
    }
    const Eigen::VectorXd step = J.partialPivLu().solve(-F);
    if (!step.allFinite()) return res;
    double max_step = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double s = std::clamp(step(k), -0.5, 0.5);
      lambdas[k] *= std::exp(s);
      max_step = std::max(max_step, std::abs(s));
    }
    for (std::size_t k = 0; k + 1 < K; ++k) {
      if (lambdas[k] >= lambdas[k + 1]) {
        res.collided = true;
        res.lambdas = lambdas;
        return res;
      }
    }
    const bool small_f = F.norm() <= opt.f_tol * f_scale;
    if (small_f && max_step <= opt.step_tol) {
      res.converged = true;
      break;
    }
    // Round-off floor: F is already tiny and the update stalls just above step_tol.
    if (small_f && F.norm() <= 1e-3 * opt.f_tol * f_scale && max_step <= 1e3 * opt.step_tol) {
      res.converged = true;
      break;
    }
  }
  res.lambdas = lambdas;
  return res;
}

double lamW_norm_sq(int dim) {
  const auto c = closed_form_constants(dim);
  require(c.lamW_L2_sq.has_value(), "Lambda W is not in L^2 in this dimension");
  return *c.lamW_L2_sq;
}

std::vector<double> lower_bubbles(const ModulationState& s, std::size_t j) {
  // g + sum_{i<j} iota_i W_{lambda_i}, 1-based j.
  std::vector<double> v = s.g.u;
  if (j > 1) {
    BubbleConfig lower{std::vector<int>(s.signs.begin(), s.signs.begin() + (j - 1)),
                       std::vector<double>(s.lambdas.begin(), s.lambdas.begin() + (j - 1))};
    const auto w = bubble_sum(lower, *s.g.grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
  }
  return v;
}

std::vector<double> windowed_lamW_l2(int dim, double lambda, double window, const RadialGrid& grid) {
  auto v = profile(dim, ProfileKind::LambdaW, lambda, Normalization::L2, grid);
  if (std::isfinite(window))
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= chi(grid.node(i) / window);
  return v;
}

void check_index(std::size_t j, const ModulationState& s, const char* who) {
  if (j < 1 || j > s.size()) throw ContractViolation(std::string(who) + ": index out of range");
}

double d4_window(std::size_t j, const ModulationState& s, double L, double lower) {
  if (j >= s.size()) throw ContractViolation("D = 4 refined parameters need lambda_{j+1}");
  const double ratio = s.lambdas[j] / lower;
  if (!(ratio > std::exp(1.0)))
    throw OutOfRegime("D = 4 log window degenerate: lambda_{j+1}/lambda_j <= e");
  return L * std::sqrt(lower * s.lambdas[j]);
}

}  // namespace

ModulationState fit(const FieldPair& u, const BubbleConfig& seed, double nu, const EigenPair& eig,
                    const FitOptions& options) {
  u.validate();
  seed.validate();
  const RadialGrid& grid = *u.grid;
  require(grid.dim() == eig.dim, "fit: eigenpair dimension does not match grid");
  require(seed.size() >= 1, "fit: need at least one bubble");
  require(seed.scales.back() < nu, "fit: need lambda_K < nu");
  const FieldPair chi_u = windowed(u, nu);
  const double f_scale = std::max(energy_norm(u), 1.0);

  std::vector<int> signs = seed.signs;
  NewtonResult res = newton(chi_u, signs, seed.scales, eig, options, f_scale);
  if (res.collided) {
    std::vector<std::size_t> order(signs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return res.lambdas[a] < res.lambdas[b]; });
    std::vector<int> s2;
    std::vector<double> l2;
    for (auto k : order) {
      s2.push_back(signs[k]);
      l2.push_back(res.lambdas[k]);
    }
    for (std::size_t k = 0; k + 1 < l2.size(); ++k)
      if (!(l2[k] < l2[k + 1])) throw FitFailure("fit: coincident scales");
    signs = s2;
    res = newton(chi_u, signs, l2, eig, options, f_scale);
    if (res.collided) throw FitFailure("fit: scales collided after reordering");
  }
  if (!res.converged)
    throw FitFailure("fit: Newton did not converge in " + std::to_string(options.max_iterations) + " iterations");
  if (res.lambdas.back() >= nu) throw FitFailure("fit: outermost scale left the window");

  ModulationState s(u.grid);
  s.dim = grid.dim();
  s.signs = signs;
  s.lambdas = res.lambdas;
  s.nu = nu;
  s.iterations = res.iterations;
  s.g = chi_u;
  const auto w = bubble_sum(s.config(), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) s.g.u[i] -= w[i];

  const std::size_t K = s.size();
  for (std::size_t j = 0; j < K; ++j) {
    const double lam = s.lambdas[j];
    // The amplitude of bubble j dominates near r = lambda_j / 2.
    const std::size_t idx = std::min(grid.size() - 1, static_cast<std::size_t>(0.5 * lam / grid.h()));
    double own = chi_u.u[idx];
    for (std::size_t k = 0; k < K; ++k)
      if (k != j) own -= s.signs[k] * eval_profile(BubbleProfile{s.dim, ProfileKind::W, s.lambdas[k]}, grid.node(idx));
    if (own * s.signs[j] <= 0.0) throw FitFailure("fit: amplitude sign contradicts iota_" + std::to_string(j + 1));

    s.ortho_residual.push_back(inner_product(make_Z(eig, grid, lam), s.g.u, grid));
    const auto am = make_alpha(eig, Sign::Minus, u.grid, lam);
    const auto ap = make_alpha(eig, Sign::Plus, u.grid, lam);
    s.a_minus.push_back(alpha_pairing(am, s.g));
    s.a_plus.push_back(alpha_pairing(ap, s.g));
    if (s.dim <= 5) {
      FieldPair gt(u.grid, lower_bubbles(s, j + 1), s.g.udot);
      s.a_tilde_minus.push_back(alpha_pairing(am, gt));
      s.a_tilde_plus.push_back(alpha_pairing(ap, gt));
    }
  }
  return s;
}

double xi(std::size_t j, const ModulationState& s, double L) {
  check_index(j, s, "xi");
  const double lam = s.lambdas[j - 1];
  const int iota = s.signs[j - 1];
  const RadialGrid& grid = *s.g.grid;
  switch (s.dim) {
    case 4: {
      const double window = d4_window(j, s, L, lam);
      const auto lw = windowed_lamW_l2(4, lam, window, grid);
      return lam - iota / (8.0 * std::log(s.lambdas[j] / lam)) * inner_product(lw, lower_bubbles(s, j), grid);
    }
    case 5:
    case 6: {
      const auto lw = windowed_lamW_l2(s.dim, lam, L * lam, grid);
      const auto target = s.dim == 5 ? lower_bubbles(s, j) : s.g.u;
      return lam - iota / lamW_norm_sq(s.dim) * inner_product(lw, target, grid);
    }
    default:
      return lam;
  }
}

double beta(std::size_t j, const ModulationState& s, const CutoffQ& q, double L) {
  check_index(j, s, "beta");
  const double lam = s.lambdas[j - 1];
  const int iota = s.signs[j - 1];
  const RadialGrid& grid = *s.g.grid;
  const auto ag = virial_apply(VirialKind::A_underline, lam, s.g.u, grid, q);
  const double virial = inner_product(ag, s.g.udot, grid);
  if (s.dim == 4) {
    const double x = xi(j, s, L);
    const double window = d4_window(j, s, L, x);
    const auto lw = windowed_lamW_l2(4, lam, window, grid);
    return -iota * inner_product(lw, s.g.udot, grid) - virial;
  }
  const double n2 = lamW_norm_sq(s.dim);
  const auto lw = windowed_lamW_l2(s.dim, lam, std::numeric_limits<double>::infinity(), grid);
  return -iota / n2 * inner_product(lw, s.g.udot, grid) - virial / n2;
}

}  // namespace nlw
