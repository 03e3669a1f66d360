#include "nlw/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlw/error.hpp"
#include "nlw/nonlinearity.hpp"

namespace nlw {

void EvolutionSettings::validate(const RadialGrid& grid) const {
  require(cfl > 0.0 && cfl <= 1.0, "EvolutionSettings: cfl must lie in (0, 1]");
  require(t_end >= 0.0 && std::isfinite(t_end), "EvolutionSettings: t_end must be non-negative");
  require(record_stride >= 1, "EvolutionSettings: record_stride must be >= 1");
  require(data_support >= 0.0, "EvolutionSettings: data_support must be non-negative");
  // Gershgorin bound on the spectrum of -laplacian; the leapfrog scheme is
  // stable for dt^2 rho < 4.
  const auto m = grid.face_weights();
  const auto w = grid.weights();
  const double h = grid.h();
  double rho = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double left = i == 0 ? 0.0 : m[i - 1];
    double row = (m[i] + left) / (h * w[i]);
    if (i > 0) row += m[i - 1] / (h * std::sqrt(w[i] * w[i - 1]));
    if (i + 1 < grid.size()) row += m[i] / (h * std::sqrt(w[i] * w[i + 1]));
    rho = std::max(rho, row);
  }
  const double limit = 2.0 / (h * std::sqrt(rho));
  require(cfl < limit, "EvolutionSettings: cfl " + std::to_string(cfl) + " exceeds the stability limit " +
                           std::to_string(limit) + " of the radial stencil");
  if (data_support > 0.0)
    require(t_end + data_support <= grid.r_max(),
            "EvolutionSettings: causality guard violated (t_end + data support > r_max)");
}

double outer_ghost(const FieldPair& state, Boundary boundary) {
  if (boundary == Boundary::DirichletZero) return 0.0;
  const auto& u = state.u;
  const std::size_t n = u.size();
  return 3.0 * u[n - 1] - 3.0 * u[n - 2] + u[n - 3];
}

std::vector<double> acceleration(const FieldPair& state, double ghost, bool nonlinear) {
  auto a = laplacian(state.u, *state.grid, ghost);
  if (nonlinear) {
    const int dim = state.grid->dim();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += nonlinearity_f(state.u[i], dim);
  }
  return a;
}

namespace {

void kdk(FieldPair& s, std::vector<double>& a, double dt, double ghost, bool nonlinear) {
  const double half = 0.5 * dt;
  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    s.udot[i] += half * a[i];
    s.u[i] += dt * s.udot[i];
  }
  a = acceleration(s, ghost, nonlinear);
  for (std::size_t i = 0; i < n; ++i) s.udot[i] += half * a[i];
}

void check_finite(const FieldPair& s, double t) {
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    if (!std::isfinite(s.u[i]) || !std::isfinite(s.udot[i]))
      throw BlowUpError("non-finite field at r = " + std::to_string(s.grid->node(i)) + ", t = " + std::to_string(t),
                        t);
  }
}

}  // namespace

FieldPair step(const FieldPair& state, double dt, double ghost, bool nonlinear, double time) {
  require(dt > 0.0 && dt <= state.grid->h(), "step: dt must lie in (0, h]");
  FieldPair next = state;
  auto a = acceleration(next, ghost, nonlinear);
  kdk(next, a, dt, ghost, nonlinear);
  check_finite(next, time + dt);
  return next;
}

FieldPair step(const FieldPair& state, const EvolutionSettings& settings) {
  settings.validate(*state.grid);
  return step(state, settings.dt(*state.grid), outer_ghost(state, settings.boundary), settings.nonlinear);
}

Trajectory evolve(const FieldPair& u0, const EvolutionSettings& settings, const std::vector<Observer>& observers) {
  u0.validate();
  settings.validate(*u0.grid);
  Trajectory traj;
  traj.dt = settings.dt(*u0.grid);
  traj.ghost = outer_ghost(u0, settings.boundary);
  traj.nonlinear = settings.nonlinear;

  const long steps = static_cast<long>(std::llround(settings.t_end / traj.dt));
  FieldPair s = u0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.energy.push_back(discrete_hamiltonian(s, traj.ghost, settings.nonlinear));
    if (settings.keep_states) traj.states.push_back(s);
    for (const auto& obs : observers) obs(t, s);
  };
  record(0.0);
  auto a = acceleration(s, traj.ghost, settings.nonlinear);
  for (long k = 1; k <= steps; ++k) {
    kdk(s, a, traj.dt, traj.ghost, settings.nonlinear);
    const double t = static_cast<double>(k) * traj.dt;
    check_finite(s, t);
    if (k % settings.record_stride == 0 || k == steps) record(t);
  }
  return traj;
}

double energy_drift(const Trajectory& traj, double floor) {
  require(!traj.energy.empty(), "energy_drift: empty trajectory");
  const double e0 = traj.energy.front();
  const double denom = std::max(std::abs(e0), floor);
  double worst = 0.0;
  for (double e : traj.energy) worst = std::max(worst, std::abs(e - e0) / denom);
  return worst;
}

double observation_radius(const RadialGrid& grid, double t, double cfl) {
  // The three-point stencil moves information one cell per step, i.e. at
  // speed 1/cfl.
  return std::max(0.0, grid.r_max() - t / cfl - 4.0 * grid.h());
}

}  // namespace nlw
