#pragma once

// Proximity of a state to multi-bubble configurations: the infima d, delta_R
// and d_K, approximated by multistart over a dyadic scale ladder and all sign
// vectors, then Nelder-Mead in log-scale coordinates. Every returned value is
// the objective at the returned configuration, hence an upper bound.

#include <cstdint>
#include <optional>
#include <vector>

#include "nlw/multibubble.hpp"
#include "nlw/radial.hpp"

namespace nlw {

struct ProximityOptions {
  /// Nelder-Mead stops when the simplex size drops below this.
  double tol = 1e-8;
  int max_iterations = 4000;
  /// Number of best ladder seeds that get polished.
  int polish = 3;
  /// Ladder entries are multiplied by exp(jitter * U(-1/2, 1/2)) drawn from
  /// a generator seeded with `seed` (jitter 0 keeps the plain ladder).
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

struct ProximityResult {
  double value = 0.0;
  /// Minimizing configuration (empty when no bubbles).
  BubbleConfig config;
  /// Number of bubbles in the minimizer (relevant for local_delta).
  std::size_t bubbles = 0;
};

/// Objective (||u - ustar - W(iota, lambda)||^2_E + sum_{j=1}^{N}
/// (lambda_j/lambda_{j+1})^{(D-2)/2})^{1/2} with lambda_{N+1} = t_conv.
double proximity_objective(const FieldPair& u, const FieldPair* ustar, const BubbleConfig& config, double t_conv);

/// d(u; N) with lambda_{N+1} = t_conv. Pass ustar = nullptr for zero.
/// Throws ContractViolation for N > 4.
ProximityResult distance_d(const FieldPair& u, const FieldPair* ustar, std::size_t N, double t_conv,
                           const ProximityOptions& options = {});

/// Nelder-Mead polish of the d objective from a given configuration (N is
/// seed.size()); no multistart.
ProximityResult refine_distance(const FieldPair& u, const FieldPair* ustar, const BubbleConfig& seed, double t_conv,
                                const ProximityOptions& options = {});

/// delta_R(u): restricted to r <= R with lambda_{M+1} = R, minimized over
/// M in {0, ..., 4}.
ProximityResult local_delta(const FieldPair& u, double R, const ProximityOptions& options = {});

/// d_K(u; rho): the N - K exterior scales are free, lambda_K = rho,
/// lambda_{N+1} = t_conv and the energy norm is taken over (rho, infinity).
/// K = 0 also admits rho = 0, which is d itself.
ProximityResult distance_dK(const FieldPair& u, const FieldPair* ustar, std::size_t K, double rho, double t_conv,
                            std::size_t N, const ProximityOptions& options = {});

}  // namespace nlw
