#pragma once

// Modulation parameters of a state near a multi-bubble: scales fitted under
// the orthogonality conditions <Z_{ul lambda_j} | g> = 0, the stable and
// unstable components a_j^{-+}, and the refined parameters xi_j and beta_j.

#include <vector>

#include "nlw/multibubble.hpp"
#include "nlw/radial.hpp"
#include "nlw/spectral.hpp"
#include "nlw/virial_cutoff.hpp"

namespace nlw {

struct FitOptions {
  int max_iterations = 50;
  /// ||F|| <= f_tol * max(||u||_E, 1).
  double f_tol = 1e-10;
  /// Converged once every relative scale update is below this.
  double step_tol = 1e-12;
};

struct ModulationState {
  int dim = 0;
  std::vector<int> signs;
  std::vector<double> lambdas;
  /// chi(r/nu) u - W(iota, lambda), both components windowed.
  FieldPair g;
  std::vector<double> a_minus, a_plus;
  /// a_j^{-+} of g + sum_{i<j} iota_i W_{lambda_i}; filled for D = 4, 5 only.
  std::vector<double> a_tilde_minus, a_tilde_plus;
  /// <Z_{ul lambda_j} | g> at the returned scales.
  std::vector<double> ortho_residual;
  double nu = 0.0;
  int iterations = 0;

  explicit ModulationState(GridPtr grid) : g(std::move(grid)) {}
  std::size_t size() const { return lambdas.size(); }
  BubbleConfig config() const { return {signs, lambdas}; }
};

/// Newton iteration in log lambda on F_j = <Z_{ul lambda_j} | chi_nu u - W(iota, lambda)>.
/// K is seed.size(). Throws FitFailure on non-convergence, on a scale
/// collision that persists after one reorder, or when the amplitude sign near
/// lambda_j contradicts iota_j; ContractViolation if lambda_K >= nu.
ModulationState fit(const FieldPair& u, const BubbleConfig& seed, double nu, const EigenPair& eig,
                    const FitOptions& options = {});

/// xi_j (1-based). D >= 7: lambda_j. D = 5, 6: lambda_j minus the windowed
/// projection of g (for D = 5, g + sum_{i<j} iota_i W_{lambda_i}) on
/// Lambda W_{ul lambda_j}, normalized by ||Lambda W||^2. D = 4: the window is
/// chi at L sqrt(lambda_j lambda_{j+1}) and the normalization
/// 8 log(lambda_{j+1}/lambda_j); throws OutOfRegime if that ratio is <= e.
double xi(std::size_t j, const ModulationState& state, double L = 10.0);

/// beta_j (1-based), a corrected version of xi_j'.
double beta(std::size_t j, const ModulationState& state, const CutoffQ& q, double L = 10.0);

}  // namespace nlw
