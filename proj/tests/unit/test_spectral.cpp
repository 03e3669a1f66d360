#include <doctest.h>

#include <cmath>
#include <random>

#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/spectral.hpp"
#include "oracle.hpp"

using namespace nlw;

namespace {

double l2(const std::vector<double>& v, const RadialGrid& g) { return std::sqrt(inner_product(v, v, g)); }

const EigenPair& eig6() {
  static const EigenPair e = negative_eigenpair(make_grid(6, 8192, 40.0));
  return e;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("linearized operator is self-adjoint") {
  const auto g = make_grid(6, 1024, 20.0);
  const auto op = assemble_linearized(g, 1.0);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    const auto a = oracle::random_smooth(*g, rng, 0.0, 15.0), b = oracle::random_smooth(*g, rng, 0.0, 15.0);
    CHECK(inner_product(op.apply(a), b, *g) == doctest::Approx(inner_product(a, op.apply(b), *g)).epsilon(1e-12));
  }
  const std::vector<double> zero(g->size(), 0.0);
  for (double v : op.apply(zero)) CHECK(v == 0.0);
}

TEST_CASE("Lambda W is a zero mode to second order") {
  double prev = 0.0;
  for (std::size_t n : {2048u, 4096u, 8192u}) {
    const auto g = make_grid(6, n, 40.0);
    const auto op = assemble_linearized(g, 1.0);
    const auto lw = sample_profile({6, ProfileKind::LambdaW}, *g);
    const double ghost = LambdaW((n + 0.5) * g->h(), 6);
    const double res = l2(op.apply(lw, ghost), *g);
    if (prev > 0.0) CHECK(prev / res >= 3.5);
    prev = res;
  }
}

TEST_CASE("under-resolved scales are rejected") {
  const auto g = make_grid(6, 256, 10.0);
  CHECK_THROWS_AS(assemble_linearized(g, 0.01), ResolutionError);
  CHECK_THROWS_AS(assemble_linearized(g, 5.0), ResolutionError);
}

TEST_CASE("one negative eigenvalue with second-order kappa") {
  std::vector<double> k;
  for (std::size_t n : {2048u, 4096u, 8192u}) {
    const auto g = make_grid(6, n, 40.0);
    const auto e = negative_eigenpair(g);
    CHECK(assemble_linearized(g).symmetrized().count_below(0.0) == 1);
    k.push_back(e.kappa);
  }
  const double ratio = (k[0] - k[1]) / (k[1] - k[2]);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
  CHECK(k[2] == doctest::Approx(0.53080).epsilon(1e-4));
}

TEST_CASE("kappa of the rescaled operator") {
  const auto g = make_grid(6, 8192, 40.0);
  const auto e2 = negative_eigenpair(g, 2.0);
  CHECK(e2.kappa == doctest::Approx(eig6().kappa).epsilon(1e-4));
  CHECK(e2.rate() == doctest::Approx(eig6().kappa / 2.0).epsilon(1e-4));
}

TEST_CASE("Y is orthogonal to Lambda W up to discretization") {
  const auto& e = eig6();
  const auto lw = sample_profile({6, ProfileKind::LambdaW, 1.0, Normalization::L2}, *e.grid);
  const double overlap = std::abs(inner_product(e.Y, lw, *e.grid)) / l2(lw, *e.grid);
  CHECK(overlap < 1e-4);
  CHECK(l2(e.Y, *e.grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.Y[0] > 0.0);
}

TEST_CASE("alpha forms are biorthogonal to the Y pairs") {
  const auto& e = eig6();
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto g = make_grid(6, 8192, 40.0);
    for (Sign s : {Sign::Minus, Sign::Plus}) {
      const auto form = make_alpha(e, s, g, lambda);
      for (Sign t : {Sign::Minus, Sign::Plus}) {
        const double v = alpha_pairing(form, make_Y_pair(e, t, g, lambda));
        CHECK(v == doctest::Approx(s == t ? 1.0 : 0.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("alpha pairing is bounded by the energy norm uniformly in lambda") {
  const auto& e = eig6();
  const auto g = make_grid(6, 16384, 200.0);
  std::mt19937_64 rng(5);
  double lo = 1e300, hi = 0.0;
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (int k = 0; k < 4; ++k) {
      FieldPair p(g, oracle::random_smooth(*g, rng, 0.0, 4.0 * lambda), oracle::random_smooth(*g, rng, 0.0, 4.0 * lambda));
      for (auto& x : p.u) x *= std::pow(lambda, -2.0);
      for (auto& x : p.udot) x *= std::pow(lambda, -3.0);
      const double c = std::abs(alpha_pairing(make_alpha(e, Sign::Plus, g, lambda), p)) / energy_norm(p);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  CHECK(hi < 1.0);
  MESSAGE("alpha/||g||_E in [" << lo << ", " << hi << "]");
}

TEST_CASE("pairing identity") {
  const auto& e = eig6();
  const auto g = make_grid(6, 8192, 40.0);
  for (Sign s : {Sign::Minus, Sign::Plus}) {
    CHECK(pairing_identity_residual(e, s, 1.0, make_Y_pair(e, Sign::Minus, g, 1.0)) < 1e-6);
    CHECK(pairing_identity_residual(e, s, 1.0, make_Y_pair(e, Sign::Plus, g, 1.0)) < 1e-6);
  }
  FieldPair lw(g, sample_profile({6, ProfileKind::LambdaW}, *g), std::vector<double>(g->size(), 0.0));
  CHECK(pairing_identity_residual(e, Sign::Plus, 1.0, lw) < 1e-5);
  FieldPair far(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = (g->node(i) - 15.0) / 5.0;
    far.u[i] = std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
  }
  CHECK(pairing_identity_residual(e, Sign::Minus, 1.0, far) < 1e-6);
}

TEST_CASE("localized coercivity on Y- and Z-orthogonal trial functions") {
  const auto& e = eig6();
  const auto g = e.grid;
  const auto op = assemble_linearized(g);
  const auto z = make_Z(e, *g);
  std::mt19937_64 rng(21);
  double worst = 1e300;
  for (int k = 0; k < 20; ++k) {
    auto v = oracle::random_smooth(*g, rng, 0.0, 6.0);
    const double cy = inner_product(v, e.Y, *g);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= cy * e.Y[i];
    const double cz = inner_product(v, z, *g) / inner_product(z, z, *g);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= cz * z[i];
    const double en = energy_norm(FieldPair(g, v, std::vector<double>(v.size(), 0.0)));
    worst = std::min(worst, op.quadratic_form(v) / (en * en));
  }
  MESSAGE("coercivity constant (empirical) " << worst);
  CHECK(worst > 0.0);
}

TEST_CASE("Z profile") {
  for (int D : {4, 5, 6, 7, 8}) {
    const auto g = make_grid(D, 8192, 40.0);
    const auto e = negative_eigenpair(g);
    const auto z = make_Z(e, *g);
    const auto lw = sample_profile({D, ProfileKind::LambdaW, 1.0, Normalization::L2}, *g);
    CHECK(inner_product(z, lw, *g) > 0.0);
    if (D >= 7) {
      for (std::size_t i = 0; i < z.size(); i += 97) CHECK(z[i] == doctest::Approx(lw[i]).epsilon(1e-14));
    } else {
      CHECK(std::abs(inner_product(z, e.Y, *g)) < 1e-10);
    }
  }
}

}  // TEST_SUITE
