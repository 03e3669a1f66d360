#include "nlw/reduced_ode.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "nlw/error.hpp"

namespace nlw {

namespace odeint = boost::numeric::odeint;

void ReducedState::validate() const {
  const std::size_t K = lambda.size();
  require(dim >= 5 && dim <= 8, "ReducedState: the reduced model needs 5 <= D <= 8");
  require(K >= 1, "ReducedState: need at least one bubble");
  require(signs.size() == K && beta.size() == K && a_minus.size() == K && a_plus.size() == K,
          "ReducedState: component lengths differ");
  for (std::size_t j = 0; j < K; ++j) {
    require(signs[j] == 1 || signs[j] == -1, "ReducedState: signs must be +-1");
    require(lambda[j] > 0.0, "ReducedState: scales must be positive");
    if (j + 1 < K) require(lambda[j] < lambda[j + 1], "ReducedState: scales must increase");
  }
}

std::vector<double> ReducedState::pack() const {
  std::vector<double> x;
  x.reserve(4 * size());
  for (const auto* v : {&lambda, &beta, &a_minus, &a_plus}) x.insert(x.end(), v->begin(), v->end());
  return x;
}

void ReducedState::unpack(const std::vector<double>& x) {
  const std::size_t K = x.size() / 4;
  lambda.assign(x.begin(), x.begin() + K);
  beta.assign(x.begin() + K, x.begin() + 2 * K);
  a_minus.assign(x.begin() + 2 * K, x.begin() + 3 * K);
  a_plus.assign(x.begin() + 3 * K, x.end());
}

namespace {

void rhs_core(const ReducedState& s, ReducedState& ds) {
  const std::size_t K = s.size();
  const double p = 0.5 * (s.dim - 2);
  ds = s;
  for (std::size_t j = 0; j < K; ++j) {
    ds.lambda[j] = s.beta[j];
    double force = 0.0;
    if (j + 1 < K) force += s.signs[j] * s.signs[j + 1] * std::pow(s.lambda[j] / s.lambda[j + 1], p);
    if (j > 0) force -= s.signs[j] * s.signs[j - 1] * std::pow(s.lambda[j - 1] / s.lambda[j], p);
    ds.beta[j] = s.omega_sq * force / s.lambda[j];
    const double rate = s.kappa / s.lambda[j];
    ds.a_minus[j] = -rate * s.a_minus[j];
    ds.a_plus[j] = rate * s.a_plus[j];
  }
}

double max_ratio_of(const ReducedState& s, std::size_t* where = nullptr) {
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double r = s.lambda[j] / s.lambda[j + 1];
    if (r > m) {
      m = r;
      if (where) *where = j + 1;
    }
  }
  return m;
}

}  // namespace

ReducedState reduced_rhs(const ReducedState& s, double max_ratio) {
  s.validate();
  if (max_ratio_of(s) > max_ratio) throw OutOfRegime("reduced_rhs: scale ratio above the model's range");
  ReducedState ds;
  rhs_core(s, ds);
  return ds;
}

double d_par_sq(const ReducedState& s) {
  const double p = 0.5 * (s.dim - 2);
  double acc = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j + 1 < s.size() && s.signs[j] == s.signs[j + 1]) acc += std::pow(s.lambda[j] / s.lambda[j + 1], p);
    acc += s.a_minus[j] * s.a_minus[j] + s.a_plus[j] * s.a_plus[j];
  }
  return acc;
}

double lyapunov_phi(const ReducedState& s, double C1) {
  double phi = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j + 1 < s.size() && s.signs[j] == s.signs[j + 1]) phi += std::ldexp(s.lambda[j] * s.beta[j], -int(j + 1));
    phi += C1 * s.lambda[j] * (s.a_plus[j] * s.a_plus[j] - s.a_minus[j] * s.a_minus[j]);
  }
  return phi;
}

double lyapunov_phi_dot(const ReducedState& s, double C1) {
  ReducedState ds;
  rhs_core(s, ds);
  double v = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j + 1 < s.size() && s.signs[j] == s.signs[j + 1])
      v += std::ldexp(ds.lambda[j] * s.beta[j] + s.lambda[j] * ds.beta[j], -int(j + 1));
    v += C1 * ds.lambda[j] * (s.a_plus[j] * s.a_plus[j] - s.a_minus[j] * s.a_minus[j]);
    v += 2.0 * C1 * s.lambda[j] * (s.a_plus[j] * ds.a_plus[j] - s.a_minus[j] * ds.a_minus[j]);
  }
  return v;
}

ReducedTrajectory integrate_reduced(const ReducedState& s0, double t_end, const ReducedOptions& opt) {
  s0.validate();
  require(t_end > 0.0, "integrate_reduced: t_end must be positive");
  require(opt.dt_out > 0.0, "integrate_reduced: dt_out must be positive");
  if (max_ratio_of(s0) > opt.exit_ratio) throw OutOfRegime("integrate_reduced: initial state outside the regime");

  using Vec = std::vector<double>;
  ReducedState tmpl = s0;
  auto system = [&tmpl](const Vec& x, Vec& dx, double) {
    ReducedState s = tmpl, ds;
    s.unpack(x);
    rhs_core(s, ds);
    dx = ds.pack();
  };
  auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<Vec>());

  ReducedTrajectory traj;
  auto record = [&](double t, const Vec& x) {
    ReducedState s = tmpl;
    s.unpack(x);
    traj.t.push_back(t);
    traj.states.push_back(s);
  };
  // Signed distances to the event thresholds; a sign change inside a step
  // locates the event by bisection on the dense output.
  const std::size_t K = s0.size();
  auto event_values = [&](const Vec& x) {
    ReducedState s = tmpl;
    s.unpack(x);
    std::vector<double> v;
    for (std::size_t j = 0; j + 1 < K; ++j) v.push_back(s.lambda[j] / s.lambda[j + 1] - opt.exit_ratio);
    for (std::size_t j = 0; j < K; ++j) v.push_back(opt.collapse_fraction * s0.lambda[j] - s.lambda[j]);
    if (opt.a_threshold > 0.0)
      for (std::size_t j = 0; j < K; ++j) {
        v.push_back(std::abs(s.a_minus[j]) - opt.a_threshold);
        v.push_back(std::abs(s.a_plus[j]) - opt.a_threshold);
      }
    return v;
  };

  Vec x = s0.pack();
  stepper.initialize(x, 0.0, std::min(opt.dt_out, t_end) * 1e-2);
  record(0.0, x);
  std::vector<double> prev_ev = event_values(x);
  double next_out = opt.dt_out;
  Vec xi(x.size());
  while (stepper.current_time() < t_end) {
    std::pair<double, double> span;
    try {
      span = stepper.do_step(system);
    } catch (const odeint::step_adjustment_error&) {
      throw IntegrationFailure("integrate_reduced: step size control failed", stepper.current_time());
    }
    const auto [t0, t1] = span;
    if (!(t1 > t0) || (t1 - t0) < 1e-14 * std::max(1.0, std::abs(t1)))
      throw IntegrationFailure("integrate_reduced: step size underflow", t0);
    const double t_hi = std::min(t1, t_end);
    std::vector<double> cur_ev = event_values(stepper.current_state());
    double exit_time = -1.0;
    for (std::size_t e = 0; e < cur_ev.size(); ++e) {
      if ((prev_ev[e] < 0.0) == (cur_ev[e] < 0.0)) continue;
      double a = t0, b = t1;
      const bool rising = prev_ev[e] < 0.0;
      for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, b); ++it) {
        const double m = 0.5 * (a + b);
        stepper.calc_state(m, xi);
        if ((event_values(xi)[e] < 0.0) == rising) a = m; else b = m;
      }
      const double te = 0.5 * (a + b);
      if (te > t_end) continue;
      const bool is_exit = e + 1 < K;
      const bool is_collapse = !is_exit && e < 2 * K - 1;
      const std::size_t idx = is_exit ? e + 1 : is_collapse ? e - (K - 1) + 1 : (e - (2 * K - 1)) / 2 + 1;
      traj.events.push_back({is_exit ? "regime_exit" : is_collapse ? "collapse" : "a_threshold", te, idx});
      if ((is_exit || is_collapse) && (exit_time < 0.0 || te < exit_time)) exit_time = te;
    }
    const double stop = exit_time >= 0.0 ? exit_time : t_hi;
    while (next_out < stop - 1e-12 * opt.dt_out) {
      stepper.calc_state(next_out, xi);
      record(next_out, xi);
      next_out += opt.dt_out;
    }
    if (exit_time >= 0.0) {
      stepper.calc_state(exit_time, xi);
      record(exit_time, xi);
      traj.exited = traj.events.back().kind == "regime_exit" ||
                    std::any_of(traj.events.begin(), traj.events.end(),
                                [&](const auto& ev) { return ev.kind == "regime_exit" && ev.t == exit_time; });
      traj.collapsed = !traj.exited;
      break;
    }
    if (t1 >= t_end) {
      stepper.calc_state(t_end, xi);
      if (traj.t.back() < t_end) record(t_end, xi);
      break;
    }
    prev_ev = cur_ev;
  }
  std::sort(traj.events.begin(), traj.events.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return traj;
}

CollisionReport collision_report(const ReducedState& s0, double t_end, double C1, double eta0,
                                 const ReducedOptions& options) {
  require(s0.size() == 2, "collision_report: needs a two-bubble state");
  CollisionReport rep;
  rep.trajectory = integrate_reduced(s0, t_end, options);
  const auto& tr = rep.trajectory;
  rep.exited = tr.exited;
  rep.exit_time = tr.exited ? tr.t.back() : 0.0;
  std::vector<double> d(tr.t.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::sqrt(d_par_sq(tr.states[k]));
  for (std::size_t k = 1; k < d.size(); ++k) rep.d_integral += 0.5 * (d[k] + d[k - 1]) * (tr.t[k] - tr.t[k - 1]);
  const double q = 4.0 / (s0.dim - 2);
  rep.d_initial = d.front();
  rep.d_final = d.back();
  rep.d_max = *std::max_element(d.begin(), d.end());
  rep.ejection_scale = std::pow(d.front(), q) * tr.states.front().lambda.back() +
                       std::pow(d.back(), q) * tr.states.back().lambda.back();
  rep.ejection_ratio = rep.ejection_scale > 0.0 ? rep.d_integral / rep.ejection_scale : 0.0;
  bool exceeded = false;
  rep.phi_rate_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] > eta0) exceeded = true;
    if (exceeded && d[k] < 0.5 * d.front()) rep.no_return = false;
    if (d[k] > 0.0) rep.phi_rate_min = std::min(rep.phi_rate_min, lyapunov_phi_dot(tr.states[k], C1) / (d[k] * d[k]));
  }
  return rep;
}

}  // namespace nlw
