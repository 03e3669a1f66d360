#include "nlw/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "nlw/error.hpp"

namespace nlw {

namespace {

constexpr unsigned kMaxDepth = 25;

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double gk(const std::function<double(double)>& g, double a, double b, double rel_tol, const char* who) {
  double err = 0.0, l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, kMaxDepth, rel_tol, &err, &l1);
  if (!std::isfinite(value) || !std::isfinite(err))
    throw DivergenceError(std::string(who) + ": non-finite integrand");
  // Cancelling integrands (exact zeros) are judged against the L1 norm at
  // round-off level.
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * l1;
  if (err > std::max(10.0 * rel_tol * std::abs(value), floor))
    throw DivergenceError(std::string(who) + ": refinement did not converge (error estimate " +
                          fmt_g(err) + ", value " + fmt_g(value) + ", L1 " + fmt_g(l1) + ")");
  return value;
}

}  // namespace

double improper_quadrature(const std::function<double(double)>& f, int dim, double rel_tol, double scale) {
  require(rel_tol > 0.0, "improper_quadrature: tolerance must be positive");
  require(scale > 0.0, "improper_quadrature: scale must be positive");
  auto g = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    const double r = scale * t / s;
    return f(r) * std::pow(r, dim - 1) * scale / (s * s);
  };
  // Splitting at t = 1/2 (r = scale) keeps the core and the tail in
  // separate panels.
  return gk(g, 0.0, 0.5, rel_tol, "improper_quadrature") + gk(g, 0.5, 1.0, rel_tol, "improper_quadrature");
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  require(a <= b, "integrate: need a <= b");
  if (a == b) return 0.0;
  return gk(f, a, b, rel_tol, "integrate");
}

}  // namespace nlw
