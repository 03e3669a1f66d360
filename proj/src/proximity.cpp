#include "nlw/proximity.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "nlw/error.hpp"

namespace nlw {

namespace {

constexpr std::size_t kMaxBubbles = 4;

// One minimization problem: bubbles j = 1..n with scales strictly between
// `lower` (0 if absent) and `upper`, norm over [r1, r2].
struct Problem {
  const FieldPair* target;  // u - ustar
  double r1, r2;
  double lower, upper;
  std::size_t n;
  double min_scale;
  double exponent;
};

double norm_sq_minus(const Problem& p, const std::vector<double>* w) {
  FieldPair diff = *p.target;
  if (w)
    for (std::size_t i = 0; i < w->size(); ++i) diff.u[i] -= (*w)[i];
  const double e = energy_norm(diff, p.r1, p.r2);
  return e * e;
}

double norm_sq(const Problem& p, const BubbleConfig& c) {
  if (c.size() == 0) return norm_sq_minus(p, nullptr);
  const auto w = bubble_sum(c, *p.target->grid);
  return norm_sq_minus(p, &w);
}

double ratio_terms(const Problem& p, const std::vector<double>& lam) {
  double acc = 0.0;
  double prev = p.lower;
  for (double l : lam) {
    if (prev > 0.0) acc += std::pow(prev / l, p.exponent);
    prev = l;
  }
  if (prev > 0.0) acc += std::pow(prev / p.upper, p.exponent);
  return acc;
}

double objective(const Problem& p, const std::vector<int>& signs, const std::vector<double>& lam) {
  for (std::size_t k = 0; k < lam.size(); ++k) {
    if (!std::isfinite(lam[k]) || lam[k] < p.min_scale || lam[k] >= p.upper) return std::numeric_limits<double>::max();
    if (k > 0 && lam[k] <= lam[k - 1]) return std::numeric_limits<double>::max();
    if (lam[k] <= p.lower) return std::numeric_limits<double>::max();
  }
  return norm_sq(p, BubbleConfig{signs, lam}) + ratio_terms(p, lam);
}

struct NmContext {
  const Problem* p;
  const std::vector<int>* signs;
};

double nm_function(const gsl_vector* x, void* params) {
  auto* ctx = static_cast<NmContext*>(params);
  std::vector<double> lam(x->size);
  for (std::size_t k = 0; k < lam.size(); ++k) lam[k] = std::exp(gsl_vector_get(x, k));
  const double v = objective(*ctx->p, *ctx->signs, lam);
  // nmsimplex2 rejects non-finite values; infeasible points get a large finite one.
  return std::isfinite(v) && v < 1e100 ? v : 1e100;
}

struct Candidate {
  double value;
  std::vector<int> signs;
  std::vector<double> lam;
};

Candidate polish(const Problem& p, Candidate c, const ProximityOptions& opt) {
  const std::size_t n = c.lam.size();
  NmContext ctx{&p, &c.signs};
  gsl_multimin_function f{&nm_function, n, &ctx};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(gsl_vector_alloc(n), gsl_vector_free);
  for (std::size_t k = 0; k < n; ++k) {
    gsl_vector_set(x.get(), k, std::log(c.lam[k]));
    gsl_vector_set(ss.get(), k, 0.1);
  }
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &f, x.get(), ss.get());
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), opt.tol) == GSL_SUCCESS) break;
  }
  if (s->fval < c.value) {
    c.value = s->fval;
    for (std::size_t k = 0; k < n; ++k) c.lam[k] = std::exp(gsl_vector_get(s->x, k));
  }
  return c;
}

void ladder_combinations(std::size_t size, std::size_t n, std::size_t start, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < size; ++i) {
    cur.push_back(i);
    ladder_combinations(size, n, i + 1, cur, out);
    cur.pop_back();
  }
}

ProximityResult solve(const Problem& p, const ProximityOptions& opt) {
  if (p.n > kMaxBubbles) throw ContractViolation("proximity: at most 4 bubbles (2^N sign enumeration)");
  ProximityResult res;
  if (p.n == 0) {
    res.value = std::sqrt(norm_sq(p, {}) + ratio_terms(p, {}));
    return res;
  }
  // Dyadic ladder 2^{-m} upper, inside (max(lower, min_scale), upper).
  std::vector<double> ladder;
  for (int m = 60; m >= 1; --m) {
    const double l = std::ldexp(p.upper, -m);
    if (l >= p.min_scale && l > p.lower) ladder.push_back(l);
  }
  if (opt.jitter > 0.0) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    for (auto& l : ladder) l *= std::exp(opt.jitter * unit(rng));
    std::sort(ladder.begin(), ladder.end());
  }
  if (ladder.size() < p.n) throw ResolutionError("proximity: scale range too narrow for the ladder");
  std::vector<std::vector<std::size_t>> seeds;
  std::vector<std::size_t> cur;
  ladder_combinations(ladder.size(), p.n, 0, cur, seeds);
  const RadialGrid& grid = *p.target->grid;
  std::vector<std::vector<double>> profiles;
  for (double l : ladder) profiles.push_back(bubble_sum(BubbleConfig{{1}, {l}}, grid));

  std::vector<Candidate> ranked;
  std::vector<double> w(grid.size());
  // Signs enumerated in lexicographic order with -1 < +1; ties keep the first.
  for (std::size_t mask = 0; mask < (std::size_t{1} << p.n); ++mask) {
    std::vector<int> signs(p.n);
    for (std::size_t k = 0; k < p.n; ++k) signs[k] = (mask >> (p.n - 1 - k)) & 1 ? 1 : -1;
    for (const auto& idx : seeds) {
      std::fill(w.begin(), w.end(), 0.0);
      std::vector<double> lam;
      for (std::size_t k = 0; k < p.n; ++k) {
        lam.push_back(ladder[idx[k]]);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += signs[k] * profiles[idx[k]][i];
      }
      ranked.push_back({norm_sq_minus(p, &w) + ratio_terms(p, lam), signs, lam});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  Candidate best = ranked.front();
  const std::size_t count = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(opt.polish, 1)));
  for (std::size_t i = 0; i < count; ++i) {
    Candidate c = polish(p, ranked[i], opt);
    if (c.value < best.value || (c.value == best.value && c.signs < best.signs)) best = c;
  }
  res.value = std::sqrt(best.value);
  res.config = BubbleConfig{best.signs, best.lam};
  res.bubbles = p.n;
  return res;
}

FieldPair difference(const FieldPair& u, const FieldPair* ustar) {
  u.validate();
  if (!ustar) return u;
  return u - *ustar;
}

double exponent(const FieldPair& u) { return 0.5 * (u.grid->dim() - 2); }
double min_scale(const FieldPair& u) { return 2.0 * u.grid->h(); }

}  // namespace

double proximity_objective(const FieldPair& u, const FieldPair* ustar, const BubbleConfig& config, double t_conv) {
  const FieldPair diff = difference(u, ustar);
  Problem p{&diff, 0.0, diff.grid->r_max(), 0.0, t_conv, config.size(), 0.0, exponent(u)};
  return std::sqrt(norm_sq(p, config) + ratio_terms(p, config.scales));
}

ProximityResult distance_d(const FieldPair& u, const FieldPair* ustar, std::size_t N, double t_conv,
                           const ProximityOptions& options) {
  require(t_conv > 0.0, "distance_d: t_conv must be positive");
  const FieldPair diff = difference(u, ustar);
  Problem p{&diff, 0.0, diff.grid->r_max(), 0.0, t_conv, N, min_scale(u), exponent(u)};
  return solve(p, options);
}

ProximityResult refine_distance(const FieldPair& u, const FieldPair* ustar, const BubbleConfig& seed, double t_conv,
                                const ProximityOptions& options) {
  seed.validate();
  require(seed.size() <= kMaxBubbles, "refine_distance: at most 4 bubbles");
  const FieldPair diff = difference(u, ustar);
  Problem p{&diff, 0.0, diff.grid->r_max(), 0.0, t_conv, seed.size(), min_scale(u), exponent(u)};
  Candidate c{objective(p, seed.signs, seed.scales), seed.signs, seed.scales};
  if (c.value == std::numeric_limits<double>::max()) throw ContractViolation("refine_distance: infeasible seed");
  c = polish(p, c, options);
  ProximityResult res;
  res.value = std::sqrt(c.value);
  res.config = BubbleConfig{c.signs, c.lam};
  res.bubbles = seed.size();
  return res;
}

ProximityResult local_delta(const FieldPair& u, double R, const ProximityOptions& options) {
  require(R > 0.0 && R <= u.grid->r_max(), "local_delta: need 0 < R <= r_max");
  const FieldPair diff = difference(u, nullptr);
  ProximityResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t M = 0; M <= kMaxBubbles; ++M) {
    Problem p{&diff, 0.0, R, 0.0, R, M, min_scale(u), exponent(u)};
    ProximityResult r;
    try {
      r = solve(p, options);
    } catch (const ResolutionError&) {
      break;
    }
    if (r.value < best.value) best = r;
  }
  return best;
}

ProximityResult distance_dK(const FieldPair& u, const FieldPair* ustar, std::size_t K, double rho, double t_conv,
                            std::size_t N, const ProximityOptions& options) {
  require(K <= N, "distance_dK: need K <= N");
  require(rho < t_conv && (rho > 0.0 || (rho == 0.0 && K == 0)), "distance_dK: need 0 < rho < t_conv (rho = 0 only for K = 0)");
  const FieldPair diff = difference(u, ustar);
  Problem p{&diff, std::min(rho, diff.grid->r_max() * (1.0 - 1e-12)), diff.grid->r_max(), rho, t_conv, N - K,
            min_scale(u), exponent(u)};
  return solve(p, options);
}

}  // namespace nlw
