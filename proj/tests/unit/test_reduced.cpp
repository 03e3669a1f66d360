#include <doctest.h>

#include <cmath>

#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/reduced_ode.hpp"

using namespace nlw;

namespace {

constexpr double kKappa6 = 0.5307998;

ReducedState pair_state(int s2, double l1, double l2, double omega_sq = 7.5) {
  ReducedState s;
  s.dim = 6;
  s.signs = {1, s2};
  s.lambda = {l1, l2};
  s.beta = {0.0, 0.0};
  s.a_minus = {0.0, 0.0};
  s.a_plus = {0.0, 0.0};
  s.omega_sq = omega_sq;
  s.kappa = kKappa6;
  return s;
}

ReducedState single(double a_plus = 0.0) {
  ReducedState s;
  s.dim = 6;
  s.signs = {1};
  s.lambda = {1.0};
  s.beta = {0.0};
  s.a_minus = {0.0};
  s.a_plus = {a_plus};
  s.omega_sq = 7.5;
  s.kappa = kKappa6;
  return s;
}

}  // namespace

TEST_SUITE("reduced_ode") {

TEST_CASE("right-hand side") {
  const auto z = reduced_rhs(single());
  for (double v : z.pack()) CHECK(v == 0.0);

  CHECK(reduced_rhs(pair_state(1, 0.1, 1.0)).beta[0] == doctest::Approx(0.75));
  CHECK(reduced_rhs(pair_state(-1, 0.1, 1.0)).beta[0] == doctest::Approx(-0.75));
  CHECK_THROWS_AS(reduced_rhs(pair_state(1, 0.5, 1.0)), OutOfRegime);

  auto bad = pair_state(1, 0.1, 1.0);
  bad.dim = 4;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("stationary bubble") {
  const auto tr = integrate_reduced(single(), 5.0);
  for (const auto& s : tr.states) CHECK(s.lambda[0] == 1.0);
  CHECK_FALSE(tr.exited);
}

TEST_CASE("unstable mode grows at the closed-form rate") {
  const auto tr = integrate_reduced(single(1e-6), 5.0 / kKappa6);
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    CHECK(tr.states[i].a_plus[0] == doctest::Approx(1e-6 * std::exp(kKappa6 * tr.t[i])).epsilon(1e-6));
  auto s = single();
  s.a_minus = {1e-3};
  const auto d = integrate_reduced(s, 3.0);
  CHECK(d.states.back().a_minus[0] == doctest::Approx(1e-3 * std::exp(-kKappa6 * d.t.back())).epsilon(1e-6));
}

TEST_CASE("same-sign pair at rest leaves the collision regime") {
  const double omega_sq = *closed_form_constants(6).omega_sq;
  const auto tr = integrate_reduced(pair_state(1, 0.01, 1.0, omega_sq), 50.0);
  REQUIRE(tr.exited);
  double prev = 0.0;
  for (const auto& s : tr.states) {
    const double r = s.lambda[0] / s.lambda[1];
    CHECK(r >= prev);
    prev = r;
  }
  CHECK(tr.events.back().kind == "regime_exit");
  CHECK(prev == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("beta is the derivative of lambda along trajectories") {
  const auto tr = integrate_reduced(pair_state(1, 0.02, 1.0, 1.25), 5.0);
  for (std::size_t i = 1; i + 1 < tr.t.size(); i += 7) {
    const double dt = tr.t[i + 1] - tr.t[i - 1];
    if (dt <= 0.0) continue;
    const double fd = (tr.states[i + 1].lambda[0] - tr.states[i - 1].lambda[0]) / dt;
    CHECK(fd == doctest::Approx(tr.states[i].beta[0]).epsilon(1e-3));
  }
}

TEST_CASE("scaling covariance") {
  const double c = 3.0;
  auto s = pair_state(1, 0.02, 1.0, 1.25);
  s.a_plus = {1e-4, 0.0};
  auto sc = s;
  for (auto& l : sc.lambda) l *= c;
  ReducedOptions o;
  o.dt_out = 0.05;
  const auto a = integrate_reduced(s, 2.0, o);
  o.dt_out = 0.05 * c;
  const auto b = integrate_reduced(sc, 2.0 * c, o);
  const auto& ea = a.states.back();
  const auto& eb = b.states.back();
  CHECK(eb.lambda[0] == doctest::Approx(c * ea.lambda[0]).epsilon(1e-7));
  CHECK(eb.beta[0] == doctest::Approx(ea.beta[0]).epsilon(1e-7));
  CHECK(eb.a_plus[0] == doctest::Approx(ea.a_plus[0]).epsilon(1e-7));
}

TEST_CASE("Lyapunov functional") {
  CHECK(lyapunov_phi(single(), 10.0) == 0.0);
  const auto s = pair_state(1, 0.05, 1.0, 1.25);
  // phi_dot against a centered difference along the flow.
  const double e = 1e-6;
  auto shifted = [&](double h) {
    auto x = s.pack();
    const auto d = reduced_rhs(s).pack();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * d[i];
    auto y = s;
    y.unpack(x);
    return lyapunov_phi(y, 10.0);
  };
  CHECK(lyapunov_phi_dot(s, 10.0) == doctest::Approx((shifted(e) - shifted(-e)) / (2 * e)).epsilon(1e-5));
}

TEST_CASE("phi grows along same-sign trajectories") {
  for (double a : {0.0, 1e-3, -1e-3}) {
    auto s = pair_state(1, 0.01, 1.0, 1.25);
    s.a_plus = {0.0, a};
    s.a_minus = {a, 0.0};
    const auto tr = integrate_reduced(s, 20.0);
    for (const auto& x : tr.states) {
      const double dphi = lyapunov_phi_dot(x, 10.0);
      CHECK(dphi >= 0.0);
      CHECK(dphi >= 0.1 * d_par_sq(x));
    }
  }
}

TEST_CASE("collision report") {
  SUBCASE("opposite signs at rest separate") {
    const auto rep = collision_report(pair_state(-1, 0.01, 1.0, 1.25), 5.0);
    CHECK_FALSE(rep.exited);
    const auto& st = rep.trajectory.states;
    CHECK(st.back().lambda[0] / st.back().lambda[1] < st.front().lambda[0] / st.front().lambda[1]);
  }
  SUBCASE("same signs at rest exit with no return") {
    const auto rep = collision_report(pair_state(1, 0.01, 1.0, 1.25), 50.0);
    CHECK(rep.exited);
    CHECK(rep.no_return);
    CHECK(rep.phi_rate_min > 0.0);
  }
  SUBCASE("incoming pair") {
    auto s = pair_state(1, 0.05, 1.0, 1.25);
    // Shrinking inner bubble, slow enough for the attraction to turn it around.
    s.beta = {-0.05, 0.0};
    const auto rep = collision_report(s, 50.0);
    const auto& st = rep.trajectory.states;
    double dmin = 1e300;
    std::size_t kmin = 0;
    for (std::size_t k = 0; k < st.size(); ++k) {
      const double d = std::sqrt(d_par_sq(st[k]));
      if (d < dmin) {
        dmin = d;
        kmin = k;
      }
    }
    CHECK(kmin > 0);
    CHECK(kmin + 1 < st.size());
    CHECK(rep.ejection_ratio < 10.0);
  }
}

}  // TEST_SUITE
