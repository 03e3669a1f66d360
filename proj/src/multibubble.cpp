#include "nlw/multibubble.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "nlw/error.hpp"
#include "nlw/ground_state.hpp"
#include "nlw/nonlinearity.hpp"

namespace nlw {

void BubbleConfig::validate() const {
  require(signs.size() == scales.size(), "BubbleConfig: signs and scales differ in length");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    require(signs[j] == 1 || signs[j] == -1, "BubbleConfig: signs must be +1 or -1");
    require(std::isfinite(scales[j]) && scales[j] > 0.0, "BubbleConfig: scales must be positive");
    if (j > 0) require(scales[j - 1] < scales[j], "BubbleConfig: scales must be strictly increasing");
  }
}

double BubbleConfig::ratio_sum(int dim) const {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < scales.size(); ++j) s += std::pow(scales[j] / scales[j + 1], 0.5 * (dim - 2));
  return s;
}

std::vector<double> bubble_sum(const BubbleConfig& config, const RadialGrid& grid) {
  config.validate();
  std::vector<double> u(grid.size(), 0.0);
  for (std::size_t j = 0; j < config.size(); ++j) {
    const auto wj = sample_profile({grid.dim(), ProfileKind::W, config.scales[j], Normalization::H}, grid);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += config.signs[j] * wj[i];
  }
  return u;
}

FieldPair synthesize(const BubbleConfig& config, GridPtr grid) {
  auto u = bubble_sum(config, *grid);
  if (config.size() > 0) {
    if (config.scales.front() < 10.0 * grid->h())
      std::clog << "warning: smallest bubble scale " << config.scales.front() << " is below 10h = "
                << 10.0 * grid->h() << "\n";
    if (config.scales.back() > grid->r_max() / 5.0)
      std::clog << "warning: largest bubble scale " << config.scales.back() << " exceeds r_max/5 = "
                << grid->r_max() / 5.0 << "\n";
  }
  std::vector<double> ud(grid->size(), 0.0);
  return FieldPair(std::move(grid), std::move(u), std::move(ud));
}

namespace {

void regime_guard(const BubbleConfig& config, int dim, const char* who) {
  config.validate();
  const double s = config.ratio_sum(dim);
  if (s > 0.1) throw OutOfRegime(std::string(who) + ": scale ratio sum " + std::to_string(s) + " exceeds 0.1");
}

}  // namespace

double interaction_energy_gap(const BubbleConfig& config, GridPtr grid) {
  const int dim = grid->dim();
  regime_guard(config, dim, "interaction_energy_gap");
  if (config.size() <= 1) return 0.0;
  const double total = nonlinear_energy(synthesize(config, grid));
  double singles = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j) {
    BubbleConfig one{{1}, {config.scales[j]}};
    singles += nonlinear_energy(synthesize(one, grid));
  }
  const double k = std::pow(dim * (dim - 2.0), 0.5 * dim) / dim;
  double lead = 0.0;
  for (std::size_t j = 0; j + 1 < config.size(); ++j)
    lead += config.signs[j] * config.signs[j + 1] * std::pow(config.scales[j] / config.scales[j + 1], 0.5 * (dim - 2));
  return total - singles + k * lead;
}

std::vector<double> interaction_nonlinearity(const BubbleConfig& config, const RadialGrid& grid) {
  config.validate();
  const int dim = grid.dim();
  std::vector<double> sum(grid.size(), 0.0), fsum(grid.size(), 0.0);
  for (std::size_t j = 0; j < config.size(); ++j) {
    const auto wj = sample_profile({dim, ProfileKind::W, config.scales[j], Normalization::H}, grid);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += config.signs[j] * wj[i];
      fsum[i] += config.signs[j] * nonlinearity_f(wj[i], dim);
    }
  }
  if (config.size() <= 1) return std::vector<double>(grid.size(), 0.0);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = nonlinearity_f(sum[i], dim) - fsum[i];
  return sum;
}

double interaction_force(std::size_t j, const BubbleConfig& config, GridPtr grid) {
  const int dim = grid->dim();
  require(j >= 1 && j <= config.size(), "interaction_force: index out of range");
  regime_guard(config, dim, "interaction_force");
  if (config.size() <= 1) return 0.0;
  const auto fi = interaction_nonlinearity(config, *grid);
  const auto lw = sample_profile({dim, ProfileKind::LambdaW, config.scales[j - 1], Normalization::H}, *grid);
  return inner_product(lw, fi, *grid);
}

double interaction_force_leading(std::size_t j, const BubbleConfig& config, int dim) {
  require(j >= 1 && j <= config.size(), "interaction_force_leading: index out of range");
  const double k = (dim - 2.0) / (2.0 * dim) * std::pow(dim * (dim - 2.0), 0.5 * dim);
  const double p = 0.5 * (dim - 2);
  double v = 0.0;
  if (j >= 2) v += config.signs[j - 2] * k * std::pow(config.scales[j - 2] / config.scales[j - 1], p);
  if (j < config.size()) v -= config.signs[j] * k * std::pow(config.scales[j - 1] / config.scales[j], p);
  return v;
}

}  // namespace nlw
