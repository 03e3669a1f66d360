#include <doctest.h>

#include <cmath>

#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/multibubble.hpp"
#include "oracle.hpp"

using namespace nlw;

TEST_SUITE("multibubble") {

TEST_CASE("synthesize") {
  const auto g = make_grid(6, 4096, 50.0);
  const auto zero = synthesize({}, g);
  for (double v : zero.u) CHECK(v == 0.0);

  const auto one = synthesize({{1}, {1.0}}, g);
  const auto w = sample_profile({6}, *g);
  for (std::size_t i = 0; i < w.size(); i += 31) CHECK(one.u[i] == w[i]);
  for (double v : one.udot) CHECK(v == 0.0);

  const auto two = synthesize({{1, 1}, {0.01, 1.0}}, make_grid(6, 10000, 100.0));
  // Node 9 sits at r = 0.095.
  const double r = two.grid->node(9);
  const double ref = 1e4 * oracle::W(r / 0.01, 6) + oracle::W(r, 6);
  CHECK(two.u[9] == doctest::Approx(ref).epsilon(1e-14));

  CHECK_THROWS_AS(synthesize({{1, 1}, {1.0, 0.5}}, g), ContractViolation);
  CHECK_THROWS_AS(synthesize({{1, 2}, {0.5, 1.0}}, g), ContractViolation);
}

TEST_CASE("two-bubble energy expansion") {
  const auto g = make_grid(6, 131072, 100.0);
  const BubbleConfig same{{1, 1}, {0.01, 1.0}};
  const BubbleConfig opp{{1, -1}, {0.01, 1.0}};
  const double corr = 2304.0 * 1e-4;

  auto energy = [&](const BubbleConfig& c) { return nonlinear_energy(synthesize(c, g)); };
  const double singles = energy({{1}, {0.01}}) + energy({{1}, {1.0}});
  CHECK(energy(same) - singles == doctest::Approx(-corr).epsilon(0.1));
  CHECK(energy(opp) - singles == doctest::Approx(corr).epsilon(0.1));

  CHECK(interaction_energy_gap({{1}, {1.0}}, g) == 0.0);
  CHECK(std::abs(interaction_energy_gap(same, g)) <= 0.1 * corr);
  CHECK_THROWS_AS(interaction_energy_gap({{1, 1}, {0.5, 1.0}}, g), OutOfRegime);
}

TEST_CASE("energy defect is scale invariant") {
  const auto g = make_grid(6, 131072, 100.0);
  const double a = interaction_energy_gap({{1, 1}, {0.01, 1.0}}, g);
  const double b = interaction_energy_gap({{1, 1}, {0.02, 2.0}}, g);
  CHECK(b == doctest::Approx(a).epsilon(0.05));
}

TEST_CASE("interaction force") {
  const auto g = make_grid(6, 131072, 100.0);
  CHECK(interaction_force(1, {{1}, {1.0}}, g) == 0.0);
  const BubbleConfig same{{1, 1}, {0.01, 1.0}};
  CHECK(interaction_force(2, same, g) == doctest::Approx(4608.0 * 1e-4).epsilon(0.1));
  CHECK(interaction_force_leading(2, same, 6) == doctest::Approx(4608.0 * 1e-4));

  // Global sign flip negates f_i and therefore every projection.
  const BubbleConfig flipped{{-1, -1}, {0.01, 1.0}};
  CHECK(interaction_force(2, flipped, g) == doctest::Approx(-interaction_force(2, same, g)).epsilon(1e-12));
  CHECK(interaction_force(1, flipped, g) == doctest::Approx(-interaction_force(1, same, g)).epsilon(1e-12));
}

TEST_CASE("D = 4 interaction force approaches the leading term slowly") {
  // Measured defect theta = force / leading: 1.38, 1.17, 1.08 at the three
  // ratios below. The leading term is only reached in the limit.
  const auto g = make_grid(4, 262144, 100.0);
  double prev = 1e300;
  for (double l1 : {1e-2, 3e-3, 1e-3}) {
    const BubbleConfig c{{1, 1}, {l1, 1.0}};
    const double theta = interaction_force(2, c, g) / interaction_force_leading(2, c, 4);
    CHECK(theta > 1.0);
    CHECK(theta - 1.0 < prev);
    prev = theta - 1.0;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("interaction nonlinearity vanishes where one bubble dominates") {
  const auto g = make_grid(6, 65536, 100.0);
  const BubbleConfig c{{1, -1}, {0.01, 1.0}};
  CHECK(interaction_nonlinearity({{1}, {1.0}}, *g) == std::vector<double>(g->size(), 0.0));
  const auto fi = interaction_nonlinearity(c, *g);
  const auto w1 = bubble_sum({{1}, {0.01}}, *g), w2 = bubble_sum({{1}, {1.0}}, *g);
  for (std::size_t i = 0; i < fi.size(); ++i) {
    const double big = std::max(std::abs(w1[i]), std::abs(w2[i]));
    const double small = std::min(std::abs(w1[i]), std::abs(w2[i]));
    if (big >= 1e3 * small) {
      // |f(a + b) - f(a) - f(b)| <= (f'(|a|) + ...) |b| for |b| << |a|.
      CHECK(std::abs(fi[i]) <= 3.0 * std::abs(nonlinearity_df(big, 6)) * small + 1e-300);
    }
  }
}

}  // TEST_SUITE
