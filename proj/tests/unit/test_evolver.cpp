#include <doctest.h>

#include <cmath>

#include "nlw/cutoffs.hpp"
#include "nlw/error.hpp"
#include "nlw/evolver.hpp"
#include "nlw/multibubble.hpp"

using namespace nlw;

namespace {

FieldPair bump_data(GridPtr g, double amp, double center, double width) {
  FieldPair p(g);
  for (std::size_t i = 0; i < g->size(); ++i) p.u[i] = amp * bump((g->node(i) - center) / width);
  return p;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t upto) {
  double m = 0.0;
  for (std::size_t i = 0; i < upto; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("evolver") {

TEST_CASE("zero state stays zero") {
  const auto g = make_grid(6, 256, 10.0);
  EvolutionSettings s;
  const auto next = step(FieldPair(g), s);
  for (double v : next.u) CHECK(v == 0.0);
  for (double v : next.udot) CHECK(v == 0.0);
}

TEST_CASE("W is nearly stationary over one step") {
  const auto g = make_grid(6, 4096, 50.0);
  const auto w = synthesize({{1}, {1.0}}, g);
  EvolutionSettings s;
  const auto next = step(w, s);
  CHECK(energy_norm(next - w) <= g->h() * g->h() * s.dt(*g));
}

TEST_CASE("settings are validated") {
  const auto g = make_grid(6, 256, 10.0);
  EvolutionSettings s;
  s.cfl = 1.5;
  CHECK_THROWS_AS(s.validate(*g), ContractViolation);
  s.cfl = 0.5;
  s.t_end = -1.0;
  CHECK_THROWS_AS(s.validate(*g), ContractViolation);
}

TEST_CASE("free waves propagate at unit speed") {
  const auto g = make_grid(5, 2000, 40.0);
  const auto u0 = bump_data(g, 1.0, 10.0, 2.0);
  EvolutionSettings s;
  s.nonlinear = false;
  s.t_end = 5.0;
  s.record_stride = 1000000;
  const auto tr = evolve(u0, s);
  const auto& u = tr.states.back();
  // Numerical dispersion leaks a small tail ahead of the cone.
  const double lo = 8.0 - s.t_end - 4 * g->h(), hi = 12.0 + s.t_end + 4 * g->h();
  double outside = 0.0, inside = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->node(i);
    if (r < lo || r > hi) outside = std::max(outside, std::abs(u.u[i]));
    else inside = std::max(inside, std::abs(u.u[i]));
  }
  CHECK(outside < 1e-4 * inside);
}

TEST_CASE("free-wave energy drift shrinks with the data's resolution") {
  auto drift = [](double width) {
    const auto g = make_grid(6, 4096, 100.0);
    EvolutionSettings s;
    s.nonlinear = false;
    s.t_end = 10.0;
    s.record_stride = 16;
    return energy_drift(evolve(bump_data(g, 0.5, 50.0, width), s));
  };
  const double a = drift(6.0), b = drift(12.0);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.25));
  CHECK(b < 1e-5);
}

TEST_CASE("time reversal returns the initial state") {
  const auto g = make_grid(6, 1024, 40.0);
  auto u0 = synthesize({{1}, {1.0}}, g);
  u0 += bump_data(g, 0.05, 10.0, 3.0);
  EvolutionSettings s;
  s.t_end = 2.0;
  s.boundary = Boundary::DirichletZero;
  s.record_stride = 1000000;
  auto fwd = evolve(u0, s).states.back();
  for (auto& v : fwd.udot) v = -v;
  const auto back = evolve(fwd, s).states.back();
  CHECK(max_abs_diff(back.u, u0.u, g->size()) < 1e-11);
  double rev = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) rev = std::max(rev, std::abs(back.udot[i] + u0.udot[i]));
  CHECK(rev < 1e-11);
}

TEST_CASE("second order in time at fixed h") {
  const auto g = make_grid(6, 1024, 40.0);
  auto u0 = synthesize({{1}, {1.0}}, g);
  u0 += bump_data(g, 0.1, 8.0, 3.0);
  auto run = [&](double cfl) {
    EvolutionSettings s;
    s.cfl = cfl;
    // A whole number of steps at every cfl below.
    s.t_end = 0.625;
    s.record_stride = 1000000;
    return evolve(u0, s).states.back();
  };
  const auto ref = run(0.5 / 64);
  const double e1 = energy_norm(run(0.5) - ref), e2 = energy_norm(run(0.25) - ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("causality against a larger domain") {
  const double h = 0.02;
  const auto small = make_grid(6, 1000, 1000 * h);
  const auto large = make_grid(6, 3000, 3000 * h);
  EvolutionSettings s;
  s.t_end = 4.0;
  s.record_stride = 1000000;
  s.boundary = Boundary::DirichletZero;
  const auto a = evolve(bump_data(small, 0.3, 6.0, 2.0), s).states.back();
  const auto b = evolve(bump_data(large, 0.3, 6.0, 2.0), s).states.back();
  const double r_ok = observation_radius(*small, s.t_end, s.cfl);
  std::size_t upto = 0;
  while (upto < small->size() && small->node(upto) < r_ok) ++upto;
  CHECK(upto > 0);
  CHECK(max_abs_diff(a.u, b.u, upto) == 0.0);
}

TEST_CASE("energy drift") {
  Trajectory one;
  one.energy = {3.0};
  CHECK(energy_drift(one) == 0.0);

  const auto g = make_grid(6, 4096, 50.0);
  EvolutionSettings s;
  s.t_end = 1.0;
  const auto tr = evolve(synthesize({{1}, {1.0}}, g), s);
  CHECK(energy_drift(tr) <= 1e-6);
  CHECK(energy_norm(tr.states.back() - tr.states.front()) <= 1e-3);
}

TEST_CASE("large data blows up with a failure time") {
  const auto g = make_grid(6, 512, 20.0);
  auto u0 = synthesize({{1}, {1.0}}, g);
  u0 *= 3.0;
  EvolutionSettings s;
  s.t_end = 5.0;
  try {
    evolve(u0, s);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() < 5.0);
  }
}

}  // TEST_SUITE
