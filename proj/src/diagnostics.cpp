#include "nlw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "nlw/cutoffs.hpp"
#include "nlw/error.hpp"
#include "nlw/nonlinearity.hpp"

namespace nlw {

namespace {

void check_rho(const FieldPair& s, double rho) {
  require(rho > 0.0, "virial: rho must be positive");
  require(rho <= 0.5 * s.grid->r_max(), "virial: need rho <= r_max / 2");
}

double multiplier(const FieldPair& s, double rho, double c) {
  check_rho(s, rho);
  const RadialGrid& grid = *s.grid;
  const auto du = radial_derivative(s.u, grid);
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    acc += w[i] * s.udot[i] * chi(r / rho) * (r * du[i] + c * s.u[i]);
  }
  return acc;
}

}  // namespace

double virial_value(const FieldPair& s, double rho) { return multiplier(s, rho, 0.5 * (s.grid->dim() - 2)); }

double jia_kenig_multiplier(const FieldPair& s, double rho) { return multiplier(s, rho, 0.5 * s.grid->dim()); }

double jia_kenig_value(const FieldPair& s, double rho) {
  check_rho(s, rho);
  const RadialGrid& grid = *s.grid;
  const auto du = radial_derivative(s.u, grid);
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    acc += w[i] * (du[i] * du[i] - critical_power_abs(s.u[i], grid.dim())) * chi(grid.node(i) / rho);
  return acc;
}

std::pair<double, double> omega_errors(const FieldPair& s, double rho, double rho_dot) {
  check_rho(s, rho);
  const RadialGrid& grid = *s.grid;
  const int D = grid.dim();
  const auto du = radial_derivative(s.u, grid);
  const auto w = grid.weights();
  const double speed = rho_dot / rho;
  double o1 = 0.0, o2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    const double x = r / rho;
    const double rchi = x * chi_prime(x);  // (r d_r chi)(r / rho)
    if (rchi == 0.0) continue;
    const double ut = s.udot[i], ur = du[i], u = s.u[i];
    o1 += w[i] * rchi *
          (-speed * ut * r * ur - 0.5 * (ut * ut + ur * ur + (D - 2.0) / D * critical_power_abs(u, D)));
    o2 += w[i] * rchi * (-speed * ut * u - ur * u / r);
  }
  return {o1, o2};
}

VirialRecord virial_terms(const FieldPair& s, double t, double rho, double rho_dot) {
  VirialRecord rec;
  rec.t = t;
  rec.rho = rho;
  rec.rho_dot = rho_dot;
  rec.v = virial_value(s, rho);
  rec.v_jk = jia_kenig_multiplier(s, rho);
  std::tie(rec.omega1, rec.omega2) = omega_errors(s, rho, rho_dot);
  const RadialGrid& grid = *s.grid;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < grid.size(); ++i)
    rec.kinetic_inside += w[i] * s.udot[i] * s.udot[i] * chi(grid.node(i) / rho);
  rec.jk_density = jia_kenig_value(s, rho);
  return rec;
}

std::vector<std::pair<double, double>> virial_identity_residual(const Trajectory& traj,
                                                                const std::vector<double>& rho_series,
                                                                VirialIdentity identity) {
  const std::size_t n = traj.states.size();
  require(n == traj.times.size(), "virial_identity_residual: trajectory has no recorded states");
  require(rho_series.size() == n, "virial_identity_residual: one rho per record");
  require(n >= 3, "virial_identity_residual: need at least three records");
  const double dt = traj.times[1] - traj.times[0];
  std::vector<std::pair<double, double>> out;
  const double c = identity == VirialIdentity::Kinetic ? 0.5 * (traj.states[0].grid->dim() - 2)
                                                       : 0.5 * traj.states[0].grid->dim();
  auto functional = [&](std::size_t k) {
    return identity == VirialIdentity::Kinetic ? virial_value(traj.states[k], rho_series[k])
                                               : jia_kenig_multiplier(traj.states[k], rho_series[k]);
  };
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = traj.times[k] - traj.times[k - 1], h2 = traj.times[k + 1] - traj.times[k];
    // Records after a shortened final step are not uniform; stop there.
    if (std::abs(h1 - dt) > 1e-9 * dt || std::abs(h2 - dt) > 1e-9 * dt) break;
    const double rho_dot = (rho_series[k + 1] - rho_series[k - 1]) / (2.0 * dt);
    const auto rec = virial_terms(traj.states[k], traj.times[k], rho_series[k], rho_dot);
    const double lhs = (functional(k + 1) - functional(k - 1)) / (2.0 * dt);
    const double bulk = identity == VirialIdentity::Kinetic ? -rec.kinetic_inside : -rec.jk_density;
    out.emplace_back(traj.times[k], lhs - (bulk + rec.omega1 + c * rec.omega2));
  }
  return out;
}

double exterior_energy(const FieldPair& s, double r) {
  if (r >= s.grid->r_max()) return 0.0;
  const double e = energy_norm(s, std::max(r, 0.0), s.grid->r_max());
  return e * e;
}

double mu_scale(const FieldPair& s, double nu, double kappa1) {
  const RadialGrid& grid = *s.grid;
  require(nu > 0.0 && nu <= grid.r_max(), "mu_scale: need 0 < nu <= r_max");
  require(kappa1 > 0.0, "mu_scale: kappa1 must be positive");
  const auto du = radial_derivative(s.u, grid);
  const auto w = grid.weights();
  const double h = grid.h();
  // Energy density per cell; partial cells contribute proportionally.
  std::vector<double> cell(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i), hardy = s.u[i] / r;
    cell[i] = w[i] * (s.udot[i] * s.udot[i] + du[i] * du[i] + hardy * hardy);
  }
  auto norm_from = [&](double r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double a = i * h, b = (i + 1) * h;
      const double lo = std::max(a, r), hi = std::min(b, nu);
      if (hi > lo) acc += cell[i] * (hi - lo) / h;
    }
    return std::sqrt(acc);
  };
  if (norm_from(0.0) < 2.0 * kappa1) throw OutOfRegime("mu_scale: ||u||_E(0, nu) < 2 kappa1, scale undefined");
  double lo = 0.0, hi = nu;  // norm_from(lo) >= kappa1 > norm_from(hi) = 0
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (norm_from(mid) >= kappa1) lo = mid; else hi = mid;
  }
  return lo;
}

std::vector<double> mu_star(const std::vector<double>& times, const std::vector<double>& mu) {
  require(times.size() == mu.size(), "mu_star: series length mismatch");
  const std::size_t n = mu.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = 4.0 * mu[k];
  for (std::size_t k = 1; k < n; ++k) out[k] = std::min(out[k], out[k - 1] + (times[k] - times[k - 1]));
  for (std::size_t k = n; k-- > 1;) out[k - 1] = std::min(out[k - 1], out[k] + (times[k] - times[k - 1]));
  return out;
}

std::vector<CollisionInterval> detect_collision_intervals(const std::vector<double>& t, const std::vector<double>& d,
                                                          const std::vector<double>& dK, double eps, double eta) {
  require(t.size() == d.size() && d.size() == dK.size(), "detect_collision_intervals: series length mismatch");
  require(eps > 0.0 && eps < eta, "detect_collision_intervals: need 0 < eps < eta");
  std::vector<CollisionInterval> out;
  const std::size_t n = t.size();
  auto crossing = [&](std::size_t i, std::size_t j) {
    // d(i) <= eps < d(j) or the reverse; linear interpolation.
    if (d[j] == d[i]) return t[i];
    return t[i] + (eps - d[i]) / (d[j] - d[i]) * (t[j] - t[i]);
  };
  std::size_t k = 0;
  while (k < n) {
    if (d[k] > eps || k + 1 >= n || d[k + 1] <= eps) {
      ++k;
      continue;
    }
    const std::size_t start = k;  // d[start] <= eps < d[start + 1]
    std::size_t end = start + 1;
    while (end < n && d[end] > eps) ++end;
    if (end == n) break;
    double peak = 0.0, dk = 0.0;
    for (std::size_t i = start; i <= end; ++i) {
      peak = std::max(peak, d[i]);
      dk = std::max(dk, dK[i]);
    }
    if (peak >= eta && dk <= eps) out.push_back({crossing(start, start + 1), crossing(end - 1, end), peak, dk});
    k = end;
  }
  return out;
}

}  // namespace nlw
