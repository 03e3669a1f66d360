#pragma once

// Leading-order bubble dynamics:
//   lambda_j' = beta_j,
//   beta_j'   = iota_j iota_{j+1} omega^2 lambda_j^{-1} (lambda_j/lambda_{j+1})^{(D-2)/2}
//             - iota_j iota_{j-1} omega^2 lambda_j^{-1} (lambda_{j-1}/lambda_j)^{(D-2)/2},
//   (a_j^{+-})' = +-(kappa/lambda_j) a_j^{+-},
// with lambda_0 = 0 and lambda_{K+1} = infinity.

#include <string>
#include <vector>

namespace nlw {

struct ReducedState {
  int dim = 6;
  std::vector<int> signs;
  std::vector<double> lambda, beta, a_minus, a_plus;
  double omega_sq = 0.0;
  double kappa = 0.0;

  std::size_t size() const { return lambda.size(); }
  /// Throws ContractViolation on inconsistent lengths, D < 5, non-positive or
  /// non-increasing scales.
  void validate() const;
  /// Packs (lambda, beta, a_minus, a_plus) into one vector and back.
  std::vector<double> pack() const;
  void unpack(const std::vector<double>& x);
};

/// Time derivative (same layout as the state). Throws OutOfRegime if some
/// ratio lambda_j/lambda_{j+1} exceeds `max_ratio`.
ReducedState reduced_rhs(const ReducedState& s, double max_ratio = 0.2);

/// sum_{j in S} (lambda_j/lambda_{j+1})^{(D-2)/2} + sum_j (a_j^-)^2 + (a_j^+)^2, S = {j : iota_j = iota_{j+1}}.
double d_par_sq(const ReducedState& s);

/// sum_{j in S} 2^{-j} lambda_j beta_j - C1 sum lambda_j (a_j^-)^2 + C1 sum lambda_j (a_j^+)^2 (j 1-based).
double lyapunov_phi(const ReducedState& s, double C1);

/// Exact time derivative of lyapunov_phi along reduced_rhs.
double lyapunov_phi_dot(const ReducedState& s, double C1);

struct ReducedEvent {
  std::string kind;  // "regime_exit", "collapse" or "a_threshold"
  double t = 0.0;
  std::size_t index = 0;  // 1-based bubble (or pair) index
};

struct ReducedOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  /// Output spacing; records also land on event times.
  double dt_out = 1e-2;
  /// Ratio at which the model is left ("collision regime exit"); stops the run.
  double exit_ratio = 0.2;
  /// |a_j^{+-}| crossings reported (0 disables).
  double a_threshold = 0.0;
  /// A scale shrinking below this fraction of its initial value stops the
  /// run ("collapse"): the model is singular at lambda_j = 0.
  double collapse_fraction = 1e-3;
};

struct ReducedTrajectory {
  std::vector<double> t;
  std::vector<ReducedState> states;
  std::vector<ReducedEvent> events;
  bool exited = false;
  bool collapsed = false;
};

/// Adaptive Dormand-Prince 5(4) with dense output. Throws IntegrationFailure
/// (with the time reached) if the step size underflows.
ReducedTrajectory integrate_reduced(const ReducedState& s0, double t_end, const ReducedOptions& options = {});

struct CollisionReport {
  bool exited = false;
  double exit_time = 0.0;
  /// int d_par dt over the run.
  double d_integral = 0.0;
  /// d_par(0)^{4/(D-2)} lambda_K(0) + d_par(end)^{4/(D-2)} lambda_K(end).
  double ejection_scale = 0.0;
  /// d_integral / ejection_scale.
  double ejection_ratio = 0.0;
  double d_initial = 0.0;
  double d_final = 0.0;
  double d_max = 0.0;
  /// False if d_par, after exceeding eta0, later falls below d_par(0)/2.
  bool no_return = true;
  /// min over records of phi'/d_par^2.
  double phi_rate_min = 0.0;
  ReducedTrajectory trajectory;
};

/// Runs a K = 2 scenario to t_end (or regime exit) and measures it.
CollisionReport collision_report(const ReducedState& s0, double t_end, double C1 = 10.0, double eta0 = 0.2,
                                 const ReducedOptions& options = {});

}  // namespace nlw
