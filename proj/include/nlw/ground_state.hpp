#pragma once

// The Aubin-Talenti ground state W, its scaling derivatives and the catalog
// of closed-form constants attached to it.

#include <optional>
#include <vector>

#include "nlw/nonlinearity.hpp"
#include "nlw/radial.hpp"

namespace nlw {

enum class ProfileKind { W, LambdaW, UnderLambdaLambdaW };

/// H: lambda^{-(D-2)/2} phi(r/lambda). L2: lambda^{-D/2} phi(r/lambda).
enum class Normalization { H, L2 };

struct BubbleProfile {
  int dim = 6;
  ProfileKind kind = ProfileKind::W;
  double lambda = 1.0;
  Normalization normalization = Normalization::H;
};

/// W(r) = (1 + r^2/(D(D-2)))^{-(D-2)/2}.
double W(double r, int dim);
/// dW/dr.
double W_prime(double r, int dim);
/// d^2W/dr^2.
double W_second(double r, int dim);
/// Lambda W = r W' + (D-2)/2 W = ((D-2)/2 - r^2/(2D)) (1 + r^2/(D(D-2)))^{-D/2}.
double LambdaW(double r, int dim);
/// d(Lambda W)/dr.
double LambdaW_prime(double r, int dim);
/// (r d/dr + D/2) Lambda W.
double UnderLambdaLambdaW(double r, int dim);

/// Evaluates a (possibly rescaled) profile. Throws ContractViolation for r < 0
/// or lambda <= 0.
double eval_profile(const BubbleProfile& p, double r);

/// Samples a profile on the grid nodes.
std::vector<double> sample_profile(const BubbleProfile& p, const RadialGrid& grid);

/// Pointwise W'' + (D-1)/r W' + f(W) evaluated from the closed forms.
double analytic_static_defect(double r, int dim);

struct ConstantsTable {
  int dim = 0;
  /// ||Lambda W||^2_{L^2}; empty for D = 4 where the integral diverges.
  std::optional<double> lamW_L2_sq;
  /// The published closed form 2(D^2-4)(D(D-2))^{D/2}/(D^2(D-4)) Gamma(1+D/2)/Gamma(D).
  /// It differs from the integral by a factor Gamma(1+D/2); kept for reporting.
  std::optional<double> lamW_L2_sq_published;
  /// (D-2)/(2D) (D(D-2))^{D/2}.
  double interaction_constant = 0.0;
  /// interaction_constant / ||Lambda W||^2; empty for D = 4.
  std::optional<double> omega_sq;
  /// <(r d/dr + D/2) Lambda W | Lambda W>: 32 for D = 4, 0 otherwise.
  double pairing_UL = 0.0;
  /// Set by the spectral module.
  std::optional<double> kappa;
  /// E(W) = ||dW/dr||^2 / D.
  double E_W = 0.0;
  /// ||dW/dr||^2_{L^2}.
  double grad_W_sq = 0.0;
};

/// Throws ContractViolation unless 4 <= D <= 8.
ConstantsTable closed_form_constants(int dim);

/// Quadrature values of the same constants, for verification.
struct QuadratureConstants {
  int dim = 0;
  /// (D+2)/(D-2) int Lambda W W^{4/(D-2)} r^{D-1} dr.
  double interaction = 0.0;
  std::optional<double> lamW_L2_sq;
  double pairing_UL = 0.0;
  /// ||UnderLambda Lambda W|| ||Lambda W|| (infinite for D = 4).
  double pairing_scale = 0.0;
  double grad_W_sq = 0.0;
  /// int W^{2D/(D-2)} r^{D-1} dr; equals grad_W_sq by the Pohozaev identity.
  double potential_W = 0.0;
};

QuadratureConstants quadrature_constants(int dim, double rel_tol = 1e-12);

/// Weighted L^2 norm of laplacian(W) + f(W) on the grid, with the outer ghost
/// set to the exact W.
double static_residual(const RadialGrid& grid);

/// D = 4: I(R) = int_0^R (Lambda W)^2 r^3 dr by quadrature.
double d4_lamW_partial_integral(double R);
/// Exact antiderivative of the same integral.
double d4_lamW_partial_integral_exact(double R);
/// [I(2R) - I(R)] / log 2, the coefficient of log R in I(R).
double d4_log_coefficient(double R);

}  // namespace nlw
