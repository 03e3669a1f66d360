#include <doctest.h>

#include <cmath>

#include "nlw/cutoffs.hpp"
#include "nlw/error.hpp"
#include "nlw/multibubble.hpp"
#include "nlw/proximity.hpp"

using namespace nlw;

TEST_SUITE("proximity") {

TEST_CASE("empty configuration") {
  const auto g = make_grid(6, 1024, 50.0);
  CHECK(distance_d(FieldPair(g), nullptr, 0, 100.0).value == 0.0);
  CHECK_THROWS_AS(distance_d(FieldPair(g), nullptr, 5, 100.0), ContractViolation);
}

TEST_CASE("single bubble") {
  const auto g = make_grid(6, 4096, 50.0);
  const auto w = synthesize({{1}, {1.0}}, g);
  const auto d = distance_d(w, nullptr, 1, 100.0);
  CHECK(d.value <= std::pow(0.01, 1.0) + 1e-6);
  CHECK(d.config.signs[0] == 1);
  CHECK(d.config.scales[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("same-sign pair is bracketed by the objective at the truth") {
  const auto g = make_grid(6, 16384, 50.0);
  const BubbleConfig truth{{1, 1}, {0.01, 1.0}};
  const auto u = synthesize(truth, g);
  const double v = std::sqrt(1e-4 + 1e-4);
  CHECK(proximity_objective(u, nullptr, truth, 100.0) == doctest::Approx(v).epsilon(1e-12));
  const auto d = distance_d(u, nullptr, 2, 100.0);
  CHECK(d.value <= v + 1e-9);
  CHECK(d.value >= 0.5 * v);
}

TEST_CASE("subtracting ustar") {
  const auto g = make_grid(6, 4096, 50.0);
  const auto w = synthesize({{1}, {1.0}}, g);
  auto u = w;
  const auto ustar = synthesize({{-1}, {2.0}}, g);
  u += ustar;
  CHECK(distance_d(u, &ustar, 1, 100.0).value == doctest::Approx(distance_d(w, nullptr, 1, 100.0).value).epsilon(1e-6));
}

TEST_CASE("local delta") {
  const auto g = make_grid(6, 4096, 200.0);
  const auto zero = local_delta(FieldPair(g), 100.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.bubbles == 0);

  const auto w = synthesize({{1}, {1.0}}, g);
  const auto d = local_delta(w, 100.0);
  CHECK(d.value <= std::pow(0.01, 1.0) + 1e-6);

  auto far = w;
  for (std::size_t i = 0; i < g->size(); ++i) far.u[i] += 0.3 * bump((g->node(i) - 150.0) / 20.0);
  CHECK(local_delta(far, 100.0).value == doctest::Approx(d.value).epsilon(1e-12));
}

TEST_CASE("d_K") {
  const auto g = make_grid(6, 8192, 100.0);
  const auto w = synthesize({{1}, {1.0}}, g);
  const double t_conv = 100.0;

  SUBCASE("K = N has no free parameters") {
    const double rho = 30.0;
    const double e = energy_norm(w, rho, g->r_max());
    const double ref = std::sqrt(std::pow(rho / t_conv, 2.0) + e * e);
    CHECK(distance_dK(w, nullptr, 1, rho, t_conv, 1).value == doctest::Approx(ref).epsilon(1e-12));
  }
  SUBCASE("K = 0 with small rho agrees with d up to the (rho / lambda_1)^2 term") {
    const double rho = g->h() / 4;
    const double dk = distance_dK(w, nullptr, 0, rho, t_conv, 1).value;
    const double d = distance_d(w, nullptr, 1, t_conv).value;
    CHECK(dk == doctest::Approx(std::sqrt(d * d + rho * rho)).epsilon(1e-4));
    CHECK(distance_dK(w, nullptr, 0, 0.0, t_conv, 1).value == doctest::Approx(d).epsilon(1e-8));
    CHECK_THROWS_AS(distance_dK(w, nullptr, 1, 0.0, t_conv, 1), ContractViolation);
  }
  SUBCASE("exterior bubble") {
    const double rho = 0.1;
    const double v = distance_dK(w, nullptr, 0, rho, t_conv, 1).value;
    const double lead = std::sqrt(std::pow(rho / 1.0, 2.0) + std::pow(1.0 / t_conv, 2.0));
    CHECK(v <= lead + 1e-6);
    CHECK(v >= 0.5 * lead);
  }
}

TEST_CASE("jitter is reproducible") {
  const auto g = make_grid(6, 4096, 50.0);
  const auto u = synthesize({{1, -1}, {0.2, 1.0}}, g);
  ProximityOptions o;
  o.jitter = 0.3;
  o.seed = 42;
  const auto a = distance_d(u, nullptr, 2, 50.0, o), b = distance_d(u, nullptr, 2, 50.0, o);
  CHECK(a.value == b.value);
  CHECK(a.config.scales == b.config.scales);
  CHECK(a.config.signs == std::vector<int>{1, -1});
}

}  // TEST_SUITE
