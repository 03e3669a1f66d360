#pragma once

// Linearized operator L_lambda = -Delta - f'(W_lambda), its negative
// eigenpair (kappa, Y), the linear forms alpha^{+-} and the profile Z.

#include <span>
#include <vector>

#include "nlw/radial.hpp"

namespace nlw {

enum class Sign { Minus = -1, Plus = 1 };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

/// Symmetric tridiagonal matrix: diag[0..n-1], off[0..n-2].
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  /// Number of eigenvalues strictly below sigma (Sturm sequence).
  std::size_t count_below(double sigma) const;
  /// Solves (T - sigma) x = b by the Thomas algorithm.
  std::vector<double> solve_shifted(double sigma, std::span<const double> b) const;
  std::vector<double> apply(std::span<const double> x) const;
};

/// Discrete L_lambda on a grid, with the Laplacian of radial_core.
struct LinearizedOperator {
  GridPtr grid;
  double lambda = 1.0;
  /// f'(W_lambda) at the nodes.
  std::vector<double> potential;

  /// L u with `outer_ghost` at the ghost node.
  std::vector<double> apply(std::span<const double> u, double outer_ghost = 0.0) const;
  /// <L u | u> with a zero ghost.
  double quadratic_form(std::span<const double> u) const;
  /// W^{1/2} L W^{-1/2} in the midpoint weights W (the discrete form of the
  /// substitution v = r^{(D-1)/2} u). Zero ghost.
  SymTridiag symmetrized() const;
};

/// Throws ResolutionError unless 10 h <= lambda <= r_max / 10.
LinearizedOperator assemble_linearized(GridPtr grid, double lambda = 1.0);

/// The negative eigenpair of L_lambda on a grid.
struct EigenPair {
  int dim = 0;
  /// Unit-scale kappa (eigenvalue of L_1 is -kappa^2).
  double kappa = 0.0;
  /// Scale of the operator that was diagonalized; its eigenvalue is
  /// -(kappa / lambda)^2.
  double lambda = 1.0;
  /// Y_{underline lambda} at the grid nodes, L^2 normalized, Y[0] > 0.
  std::vector<double> Y;
  GridPtr grid;
  /// Number of inverse-iteration sweeps used.
  int iterations = 0;

  double rate() const { return kappa / lambda; }
  /// Unit-scale Y(r): cubic interpolation with even reflection at 0 and zero
  /// beyond the grid.
  double value(double r) const;
  /// Samples of Y_{underline mu} scaled to unit discrete L2 norm on g, or
  /// Y_mu = mu Y_{underline mu} (H normalization).
  std::vector<double> sample(const RadialGrid& g, double mu, bool l2_normalized = true) const;
};

/// Throws DiscretizationAnomaly if more than one negative eigenvalue is
/// found, ResolutionError if none.
EigenPair negative_eigenpair(GridPtr grid, double lambda = 1.0);

/// alpha^-_lambda = 1/2 (kappa/lambda Y_{ul}, -Y_{ul}),
/// alpha^+_lambda = 1/2 (kappa/lambda Y_{ul}, +Y_{ul}).
struct AlphaForm {
  Sign sign = Sign::Plus;
  double lambda = 1.0;
  double kappa = 0.0;
  GridPtr grid;
  std::vector<double> Y_l2;
};

AlphaForm make_alpha(const EigenPair& eig, Sign sign, GridPtr grid, double lambda);
double alpha_pairing(const AlphaForm& form, const FieldPair& g);

/// Y^{-+}_lambda = (Y_lambda / kappa, -+ Y_{underline lambda}).
FieldPair make_Y_pair(const EigenPair& eig, Sign sign, GridPtr grid, double lambda);

/// |<alpha | J D^2E(W_lambda) h> - s (kappa/lambda) <alpha | h>| with s the
/// sign of the form.
double pairing_identity_residual(const EigenPair& eig, Sign sign, double lambda, const FieldPair& h);

/// The profile Z. For D >= 7 it is Lambda W. For D <= 6 it is
/// bump((r - 1)/0.5) - c bump((r - r2)/0.5), r2 = 1.5 sqrt(D(D-2)), where
/// the second bump sits in the region Lambda W < 0 and c makes <Z|Y> = 0.
struct ZProfile {
  int dim = 0;
  double coef = 0.0;

  bool is_lambda_w() const { return dim >= 7; }
  double value(double r) const;
  /// (r d/dr + D/2) Z.
  double under_lambda(double r) const;
  /// Z vanishes beyond this radius (infinity for D >= 7).
  double support_radius() const;
};

/// Builds Z for samples at scale lambda on `grid`, with c chosen so that the
/// discrete pairing <Z_{ul} | Y_{ul}> vanishes exactly. Throws
/// ConstructionError if <Z | Lambda W> <= 0.
ZProfile make_Z_profile(const EigenPair& eig, const RadialGrid& grid, double lambda = 1.0);

/// Samples of Z_{underline lambda} = lambda^{-D/2} Z(r / lambda).
std::vector<double> sample_Z(const ZProfile& z, const RadialGrid& grid, double lambda = 1.0);

/// make_Z_profile followed by sample_Z.
std::vector<double> make_Z(const EigenPair& eig, const RadialGrid& grid, double lambda = 1.0);

}  // namespace nlw
