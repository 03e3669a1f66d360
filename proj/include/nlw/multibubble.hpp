#pragma once

// Multi-bubble configurations W(iota, lambda) = sum_j iota_j W_{lambda_j}.

#include <cstddef>
#include <vector>

#include "nlw/radial.hpp"

namespace nlw {

struct BubbleConfig {
  std::vector<int> signs;
  std::vector<double> scales;

  std::size_t size() const { return scales.size(); }
  /// Throws ContractViolation unless signs are +-1 and scales are positive
  /// and strictly increasing.
  void validate() const;
  /// sum_j (lambda_j / lambda_{j+1})^{(D-2)/2}.
  double ratio_sum(int dim) const;
};

/// Samples of sum_j iota_j W_{lambda_j} at the nodes.
std::vector<double> bubble_sum(const BubbleConfig& config, const RadialGrid& grid);

/// (bubble_sum, 0). Warns on std::clog when lambda_1 < 10 h or
/// lambda_M > r_max / 5 (twice the slack of the 20 h, r_max/10 guard).
FieldPair synthesize(const BubbleConfig& config, GridPtr grid);

/// E(W(iota, lambda)) - sum_j E(W_{lambda_j}) + (D(D-2))^{D/2}/D sum_j iota_j
/// iota_{j+1} (lambda_j/lambda_{j+1})^{(D-2)/2}. All energies are evaluated
/// on the same grid, so truncation and discretization of the individual
/// bubbles cancel. Throws OutOfRegime if ratio_sum > 0.1.
double interaction_energy_gap(const BubbleConfig& config, GridPtr grid);

/// f(W(iota, lambda)) - sum_j iota_j f(W_{lambda_j}) at the nodes.
std::vector<double> interaction_nonlinearity(const BubbleConfig& config, const RadialGrid& grid);

/// <Lambda W_{lambda_j} | f_i(iota, lambda)>, j 1-based. Throws OutOfRegime
/// if ratio_sum > 0.1.
double interaction_force(std::size_t j, const BubbleConfig& config, GridPtr grid);

/// The leading term iota_{j-1} k (lambda_{j-1}/lambda_j)^{(D-2)/2}
/// - iota_{j+1} k (lambda_j/lambda_{j+1})^{(D-2)/2}, k = (D-2)/(2D) (D(D-2))^{D/2}.
double interaction_force_leading(std::size_t j, const BubbleConfig& config, int dim);

}  // namespace nlw
