#include "nlw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlw/cutoffs.hpp"
#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/nonlinearity.hpp"

namespace nlw {

std::size_t SymTridiag::count_below(double sigma) const {
  const std::size_t n = diag.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - sigma - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + std::abs(sigma) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> SymTridiag::solve_shifted(double sigma, std::span<const double> b) const {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0), x(b.begin(), b.end());
  double piv = diag[0] - sigma;
  if (piv == 0.0) piv = std::numeric_limits<double>::min();
  x[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    c[i - 1] = off[i - 1] / piv;
    piv = diag[i] - sigma - off[i - 1] * c[i - 1];
    if (piv == 0.0) piv = std::numeric_limits<double>::min();
    x[i] = (x[i] - off[i - 1] * x[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

std::vector<double> SymTridiag::apply(std::span<const double> x) const {
  const std::size_t n = diag.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> LinearizedOperator::apply(std::span<const double> u, double outer_ghost) const {
  auto out = laplacian(u, *grid, outer_ghost);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i] - potential[i] * u[i];
  return out;
}

double LinearizedOperator::quadratic_form(std::span<const double> u) const {
  const auto lu = apply(u, 0.0);
  return inner_product(lu, u, *grid);
}

SymTridiag LinearizedOperator::symmetrized() const {
  const RadialGrid& g = *grid;
  const std::size_t n = g.size();
  const auto m = g.face_weights();
  const auto w = g.weights();
  const double h = g.h();
  SymTridiag t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? 0.0 : m[i - 1];
    t.diag[i] = (m[i] + left) / (h * w[i]) - potential[i];
    if (i + 1 < n) t.off[i] = -m[i] / (h * std::sqrt(w[i] * w[i + 1]));
  }
  return t;
}

LinearizedOperator assemble_linearized(GridPtr grid, double lambda) {
  require(grid != nullptr, "assemble_linearized: null grid");
  if (!(lambda >= 10.0 * grid->h() && lambda <= grid->r_max() / 10.0))
    throw ResolutionError("assemble_linearized: lambda = " + std::to_string(lambda) +
                          " outside the resolved range [10h, r_max/10]");
  LinearizedOperator op;
  op.grid = grid;
  op.lambda = lambda;
  const int dim = grid->dim();
  const auto w = sample_profile({dim, ProfileKind::W, lambda, Normalization::H}, *grid);
  op.potential.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) op.potential[i] = nonlinearity_df(w[i], dim);
  return op;
}

EigenPair negative_eigenpair(GridPtr grid, double lambda) {
  const auto op = assemble_linearized(grid, lambda);
  const SymTridiag t = op.symmetrized();
  const std::size_t n = t.diag.size();

  const std::size_t neg = t.count_below(0.0);
  if (neg == 0) throw ResolutionError("negative_eigenpair: no negative eigenvalue found");
  if (neg > 1)
    throw DiscretizationAnomaly("negative_eigenpair: " + std::to_string(neg) + " negative eigenvalues found");

  // Gershgorin lower bound, then Sturm bisection down to a tight bracket.
  double lo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
  }
  double hi = 0.0;
  for (int k = 0; k < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (t.count_below(mid) >= 1) hi = mid; else lo = mid;
  }

  // Inverse iteration shifted just below the eigenvalue, where T - sigma is
  // positive definite and the Thomas factorization is stable.
  const double sigma = lo - 1e-9 * std::max(1.0, std::abs(lo));
  const auto w = grid->weights();
  const auto r = grid->nodes();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = r[i] / lambda - 1.0;
    v[i] = std::sqrt(w[i]) * std::exp(-x * x);
  }
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double a : x) s += a * a;
    s = std::sqrt(s);
    for (double& a : x) a /= s;
  };
  normalize(v);
  double mu = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 100; ++it) {
    v = t.solve_shifted(sigma, v);
    normalize(v);
    const auto tv = t.apply(v);
    double rq = 0.0;
    for (std::size_t i = 0; i < n; ++i) rq += tv[i] * v[i];
    const bool done = std::abs(rq - mu) < 1e-12 * std::max(1.0, std::abs(rq));
    mu = rq;
    if (done) break;
  }
  if (it == 100) throw FitFailure("negative_eigenpair: inverse iteration did not converge");
  if (!(mu < 0.0)) throw ResolutionError("negative_eigenpair: Rayleigh quotient is not negative");

  EigenPair e;
  e.dim = grid->dim();
  e.lambda = lambda;
  e.kappa = std::sqrt(-mu) * lambda;
  e.grid = grid;
  e.iterations = it + 1;
  e.Y.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.Y[i] = v[i] / std::sqrt(w[i]);
  if (e.Y[0] < 0.0)
    for (double& y : e.Y) y = -y;
  return e;
}

double EigenPair::value(double r) const {
  // Y stored at scale lambda: Y_ul(s) = lambda^{-D/2} Y(s / lambda).
  const RadialGrid& g = *grid;
  const double s = std::abs(r) * lambda;
  const double h = g.h();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.size());
  const double x = s / h - 0.5;  // fractional index
  if (x > static_cast<double>(n - 1)) return 0.0;
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
  i0 = std::min(i0, n - 4);
  auto at = [&](std::ptrdiff_t k) {
    if (k < 0) k = -k - 1;  // even reflection across r = 0
    return Y[static_cast<std::size_t>(k)];
  };
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double basis = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      basis *= (x - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    }
    acc += basis * at(i0 + a);
  }
  return acc * std::pow(lambda, 0.5 * dim);
}

std::vector<double> EigenPair::sample(const RadialGrid& g, double mu, bool l2_normalized) const {
  require(g.dim() == dim, "EigenPair::sample: dimension mismatch");
  require(mu > 0.0, "EigenPair::sample: scale must be positive");
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(g.node(i) / mu);
  // Unit discrete L2 norm of the L2-normalized samples on g, so that the
  // alpha forms stay biorthogonal to round-off on any grid.
  const double norm = std::sqrt(inner_product(out, out, g));
  require(norm > 0.0, "EigenPair::sample: Y vanishes on this grid");
  const double pref = (l2_normalized ? 1.0 : mu) / norm;
  for (double& x : out) x *= pref;
  return out;
}

AlphaForm make_alpha(const EigenPair& eig, Sign sign, GridPtr grid, double lambda) {
  require(grid != nullptr && grid->dim() == eig.dim, "make_alpha: grid dimension mismatch");
  require(lambda > 0.0, "make_alpha: lambda must be positive");
  AlphaForm f;
  f.sign = sign;
  f.lambda = lambda;
  f.kappa = eig.kappa;
  f.Y_l2 = eig.sample(*grid, lambda, true);
  f.grid = std::move(grid);
  return f;
}

double alpha_pairing(const AlphaForm& form, const FieldPair& g) {
  require(form.grid->same_as(*g.grid), "alpha_pairing: grid mismatch");
  const double a = inner_product(form.Y_l2, g.u, *g.grid);
  const double b = inner_product(form.Y_l2, g.udot, *g.grid);
  return 0.5 * (form.kappa / form.lambda) * a + 0.5 * sign_value(form.sign) * b;
}

FieldPair make_Y_pair(const EigenPair& eig, Sign sign, GridPtr grid, double lambda) {
  auto u = eig.sample(*grid, lambda, false);
  for (double& x : u) x /= eig.kappa;
  auto ud = eig.sample(*grid, lambda, true);
  for (double& x : ud) x *= sign_value(sign);
  return FieldPair(std::move(grid), std::move(u), std::move(ud));
}

double pairing_identity_residual(const EigenPair& eig, Sign sign, double lambda, const FieldPair& h) {
  const auto form = make_alpha(eig, sign, h.grid, lambda);
  const auto op = assemble_linearized(h.grid, lambda);
  auto lh = op.apply(h.u, 0.0);
  for (double& x : lh) x = -x;
  // J D^2E(W_lambda) h = (hdot, -L h).
  const FieldPair jh(h.grid, h.udot, std::move(lh));
  const double lhs = alpha_pairing(form, jh);
  const double rhs = sign_value(sign) * (eig.kappa / lambda) * alpha_pairing(form, h);
  return std::abs(lhs - rhs);
}

namespace {

constexpr double kBumpHalfWidth = 0.5;

double z_second_center(int dim) { return 1.5 * std::sqrt(dim * (dim - 2.0)); }

}  // namespace

double ZProfile::value(double r) const {
  if (is_lambda_w()) return LambdaW(r, dim);
  return bump((r - 1.0) / kBumpHalfWidth) - coef * bump((r - z_second_center(dim)) / kBumpHalfWidth);
}

double ZProfile::under_lambda(double r) const {
  if (is_lambda_w()) return r * LambdaW_prime(r, dim) + 0.5 * dim * LambdaW(r, dim);
  const double c2 = z_second_center(dim);
  const double dz = (bump_prime((r - 1.0) / kBumpHalfWidth) - coef * bump_prime((r - c2) / kBumpHalfWidth)) /
                    kBumpHalfWidth;
  return r * dz + 0.5 * dim * value(r);
}

double ZProfile::support_radius() const {
  if (is_lambda_w()) return std::numeric_limits<double>::infinity();
  return z_second_center(dim) + kBumpHalfWidth;
}

std::vector<double> sample_Z(const ZProfile& z, const RadialGrid& grid, double lambda) {
  require(grid.dim() == z.dim, "sample_Z: dimension mismatch");
  const double pref = std::pow(lambda, -0.5 * z.dim);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pref * z.value(grid.node(i) / lambda);
  return out;
}

ZProfile make_Z_profile(const EigenPair& eig, const RadialGrid& grid, double lambda) {
  require(grid.dim() == eig.dim, "make_Z: dimension mismatch");
  ZProfile z;
  z.dim = eig.dim;
  if (!z.is_lambda_w()) {
    const auto y = eig.sample(grid, lambda, true);
    ZProfile first{z.dim, 0.0};
    const auto b1 = sample_Z(first, grid, lambda);
    std::vector<double> b2(grid.size());
    const double pref = std::pow(lambda, -0.5 * z.dim);
    const double c2 = z_second_center(z.dim);
    for (std::size_t i = 0; i < b2.size(); ++i)
      b2[i] = pref * bump((grid.node(i) / lambda - c2) / kBumpHalfWidth);
    const double denom = inner_product(b2, y, grid);
    if (!(std::abs(denom) > 0.0))
      throw ConstructionError("make_Z: second bump does not see Y on this grid");
    z.coef = inner_product(b1, y, grid) / denom;
  }
  const auto zs = sample_Z(z, grid, lambda);
  const auto lw = sample_profile({z.dim, ProfileKind::LambdaW, lambda, Normalization::L2}, grid);
  if (!(inner_product(zs, lw, grid) > 0.0))
    throw ConstructionError("make_Z: <Z | Lambda W> is not positive");
  return z;
}

std::vector<double> make_Z(const EigenPair& eig, const RadialGrid& grid, double lambda) {
  return sample_Z(make_Z_profile(eig, grid, lambda), grid, lambda);
}

}  // namespace nlw
