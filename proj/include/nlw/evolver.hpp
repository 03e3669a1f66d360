#pragma once

// Kick-drift-kick time stepping of u_tt = Delta u + f(u) (or the free wave
// equation) on a radial grid.

#include <functional>
#include <vector>

#include "nlw/radial.hpp"

namespace nlw {

enum class Boundary {
  /// Ghost node held at zero.
  DirichletZero,
  /// Ghost node held at the value extrapolated from the initial data.
  DirichletHold,
};

struct EvolutionSettings {
  double cfl = 0.5;
  double t_end = 1.0;
  Boundary boundary = Boundary::DirichletHold;
  int record_stride = 1;
  bool nonlinear = true;
  /// Radius containing the initial data, if known (0 = not compactly
  /// supported). When set, t_end + data_support <= r_max is enforced.
  double data_support = 0.0;
  /// Keep the recorded states in the trajectory.
  bool keep_states = true;

  /// Throws ContractViolation on invalid values.
  void validate(const RadialGrid& grid) const;
  double dt(const RadialGrid& grid) const { return cfl * grid.h(); }
};

/// Ghost value used for `state` under `boundary`.
double outer_ghost(const FieldPair& state, Boundary boundary);

/// a = laplacian(u) + f(u) (f = 0 for the free equation).
std::vector<double> acceleration(const FieldPair& state, double ghost, bool nonlinear);

/// One kick-drift-kick step of size dt with the given ghost value. Throws
/// BlowUpError (carrying `time + dt`) if non-finite values appear.
FieldPair step(const FieldPair& state, double dt, double ghost, bool nonlinear, double time = 0.0);

/// One step with the settings' dt; the ghost is derived from `state`.
FieldPair step(const FieldPair& state, const EvolutionSettings& settings);

using Observer = std::function<void(double t, const FieldPair& state)>;

struct Trajectory {
  std::vector<double> times;
  /// Discrete Hamiltonian (the energy conserved by the semi-discrete flow).
  std::vector<double> energy;
  /// Recorded states (empty unless keep_states).
  std::vector<FieldPair> states;
  double dt = 0.0;
  double ghost = 0.0;
  bool nonlinear = true;
};

/// Steps until t_end, recording every record_stride steps (including t = 0
/// and the final time) and calling each observer on every record.
Trajectory evolve(const FieldPair& u0, const EvolutionSettings& settings, const std::vector<Observer>& observers = {});

/// max_k |E_k - E_0| / max(|E_0|, floor).
double energy_drift(const Trajectory& traj, double floor = 1e-12);

/// Radius up to which a run of duration t on this grid is unaffected by the
/// outer boundary to round-off: the discrete domain of dependence of the
/// stencil, r_max - t/cfl, minus a few cells.
double observation_radius(const RadialGrid& grid, double t, double cfl);

}  // namespace nlw
