#include "nlw/virial_cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlw/error.hpp"
#include "nlw/quadrature.hpp"

namespace nlw {

namespace {

// S(x) = x^5 (126 - 420 x + 540 x^2 - 315 x^3 + 70 x^4): 0 -> 1 on [0, 1]
// with four vanishing derivatives at both ends.
double step_poly(double x, int k) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return k == 0 ? 1.0 : 0.0;
  static const double a[10] = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
  double v = 0.0;
  for (int p = 9; p >= k; --p) {
    double coef = a[p];
    for (int j = 0; j < k; ++j) coef *= (p - j);
    v = v * x + coef;
  }
  return v;
}

double step_max_derivative(int k) {
  double m = 0.0;
  for (int i = 0; i <= 20000; ++i) m = std::max(m, std::abs(step_poly(i / 20000.0, k)));
  return m * 1.001;
}

}  // namespace

CutoffQ::CutoffQ(int dim, double c, double R) : dim_(dim), c_(c), R_(R) {
  require(dim >= 4 && dim <= 8, "CutoffQ: unsupported dimension");
  require(c > 0.0 && c <= 1.0, "build_cutoff: c must lie in (0, 1]");
  require(R > 2.0, "build_cutoff: R must exceed 2");
  const double s1 = step_max_derivative(1), s2 = step_max_derivative(2), s3 = step_max_derivative(3);
  const double D = dim;
  auto bound = [&](double ell) {
    // P4 and P6 need only s1 / ell <= c, which this already implies.
    return D * (D - 2.0) * s1 / ell + (2.0 * D - 2.0) * s2 / (ell * ell) + s3 / (ell * ell * ell);
  };
  double lo = 1.0, hi = 1.0;
  while (bound(hi) > c) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) > c) lo = mid; else hi = mid;
  }
  ell_ = hi;
}

double CutoffQ::M(double s, int derivative) const {
  const double a = std::log(R_);
  const double scale = std::pow(1.0 / ell_, derivative);
  if (s >= a) {
    // Decreasing transition on [a, a + ell]: M = 1 - S((s - a)/ell) = S((a + ell - s)/ell).
    const double v = step_poly((a + ell_ - s) / ell_, derivative) * scale;
    return derivative % 2 == 0 ? v : -v;
  }
  if (s <= -a) {
    // Increasing transition on [-a - ell, -a]: M = S((s + a + ell)/ell).
    return step_poly((s + a + ell_) / ell_, derivative) * scale;
  }
  return derivative == 0 ? 1.0 : 0.0;
}

double CutoffQ::q_prime(double r) const {
  require(r > 0.0, "CutoffQ: r must be positive");
  return r * M(std::log(r));
}

double CutoffQ::q_second(double r) const {
  const double s = std::log(r);
  return M(s) + M(s, 1);
}

double CutoffQ::lap_q(double r) const {
  const double s = std::log(r);
  return dim_ * M(s) + M(s, 1);
}

double CutoffQ::bilap_q(double r) const {
  const double s = std::log(r);
  const double D = dim_;
  return (D * M(s, 2) + M(s, 3) + (D - 2.0) * (D * M(s, 1) + M(s, 2))) / (r * r);
}

double CutoffQ::r_dlog_qprime(double r) const { return M(std::log(r), 1); }

double CutoffQ::q(double r) const {
  require(r > 0.0, "CutoffQ: r must be positive");
  const double a = std::log(R_);
  const double s = std::log(r);
  if (s >= -a && s <= a) return 0.5 * r * r;
  if (2.0 * std::min(s, a + ell_) > std::log(std::numeric_limits<double>::max()) - 2.0)
    return std::numeric_limits<double>::infinity();
  // q' = e^{s} M(s) and dr = e^{s} ds. Beyond a window of 40 in s the
  // weight e^{2s} is below round-off relative to the retained part.
  constexpr double window = 40.0;
  if (s > a) {
    const double S = std::min(s, a + ell_);
    auto scaled = [&](double sigma) { return std::exp(2.0 * sigma) * M(S + sigma); };
    const double lo = std::max(a - S, -window);
    return std::exp(2.0 * S) * (0.5 * std::exp(2.0 * (a - S)) + integrate(scaled, lo, 0.0, 1e-10));
  }
  auto dq = [&](double x) { return std::exp(2.0 * x) * M(x); };
  const double lo = std::max({s, -a - ell_, -a - window});
  return 0.5 / (R_ * R_) - integrate(dq, lo, -a, 1e-10);
}

CutoffTable CutoffQ::tabulate(std::size_t n) const {
  require(n >= 2, "CutoffQ::tabulate: need at least two points");
  const double smax = std::min(log_R_tilde(), 700.0);
  CutoffTable t;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = -smax + 2.0 * smax * static_cast<double>(i) / static_cast<double>(n - 1);
    const double r = std::exp(s);
    t.r.push_back(r);
    t.q.push_back(q(r));
    t.q_prime.push_back(q_prime(r));
    t.q_second.push_back(q_second(r));
    t.lap_q.push_back(lap_q(r));
    t.bilap_q.push_back(bilap_q(r));
  }
  return t;
}

void CutoffQ::verify(std::size_t mesh_points) const {
  const double a = std::log(R_);
  const double b = log_R_tilde();
  const double tol = 1e-12;
  // Points spread over the full log range including both transitions and a
  // margin beyond R~, evaluated in s so that huge radii never materialize.
  for (std::size_t i = 0; i < mesh_points; ++i) {
    const double s = -(b + 1.0) + 2.0 * (b + 1.0) * static_cast<double>(i) / static_cast<double>(mesh_points - 1);
    const double m0 = M(s), m1 = M(s, 1), m2 = M(s, 2), m3 = M(s, 3);
    const double D = dim_;
    if (s >= -a && s <= a && std::abs(m0 - 1.0) > tol) throw ConstructionError("q: P1 (q = r^2/2 on [1/R, R])", 1);
    if ((s > b || s < -b) && (m0 != 0.0 || m1 != 0.0)) throw ConstructionError("q: P2 (q constant beyond R~)", 2);
    // q'/r = M <= 1 and q'' = M + M'.
    if (m0 < -tol || m0 > 1.0 + tol || std::abs(m0 + m1) > 2.0) throw ConstructionError("q: P3 (|q'| <= r, |q''| <= 2)", 3);
    if (D * m0 + m1 < -c_ - tol) throw ConstructionError("q: P4 (Delta q >= -c)", 4);
    const double r2bilap = D * m2 + m3 + (D - 2.0) * (D * m1 + m2);
    if (std::abs(r2bilap) > c_ + tol) throw ConstructionError("q: P5 (|Delta^2 q| <= c / r^2)", 5);
    if (std::abs(m1) > c_ + tol) throw ConstructionError("q: P6 (|(q'/r)'| <= c / r)", 6);
  }
  if (std::abs(q(1.0) - 0.5) > tol) throw ConstructionError("q: P1 (q(1) = 1/2)", 1);
}

CutoffQ build_cutoff(int dim, double c, double R) {
  CutoffQ q(dim, c, R);
  q.verify();
  return q;
}

std::vector<double> virial_apply(VirialKind kind, double lambda, std::span<const double> g, const RadialGrid& grid,
                                 const CutoffQ& q) {
  require(g.size() == grid.size(), "virial_apply: vector length does not match grid");
  require(lambda > 0.0, "virial_apply: lambda must be positive");
  require(q.dim() == grid.dim(), "virial_apply: dimension mismatch");
  const std::size_t n = grid.size();
  const auto m = grid.face_weights();
  const auto w = grid.weights();
  const double h = grid.h();
  std::vector<double> out(n);
  // Skew part: (1/(2 w_i)) [c_{i+1/2} g_{i+1} - c_{i-1/2} g_{i-1}] with
  // c_{i+1/2} = q'(r_{i+1/2}/lambda) m_{i+1/2}; consistent with
  // q' g' + (1/2) lambda^{-1} Delta q g.
  double c_left = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rf = (static_cast<double>(i) + 1.0) * h;
    const double c_right = i + 1 < n ? q.q_prime(rf / lambda) * m[i] : 0.0;
    const double right = i + 1 < n ? g[i + 1] : 0.0;
    const double left = i > 0 ? g[i - 1] : 0.0;
    out[i] = (c_right * right - c_left * left) / (2.0 * w[i]);
    c_left = c_right;
  }
  if (kind == VirialKind::A) {
    const double D = grid.dim();
    for (std::size_t i = 0; i < n; ++i) out[i] -= q.lap_q(grid.node(i) / lambda) * g[i] / (D * lambda);
  }
  return out;
}

}  // namespace nlw
