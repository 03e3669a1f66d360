#pragma once

// Localized virial functionals and their time-derivative identities, the
// bubble scale mu and its regularization mu*, and collision intervals on a
// sampled d(t) series.

#include <utility>
#include <vector>

#include "nlw/evolver.hpp"
#include "nlw/radial.hpp"

namespace nlw {

/// <u_t | chi_rho (r u_r + (D-2)/2 u)>.
double virial_value(const FieldPair& state, double rho);

/// <u_t | chi_rho (r u_r + D/2 u)>.
double jia_kenig_multiplier(const FieldPair& state, double rho);

/// int [(u_r)^2 - |u|^{2D/(D-2)}] chi_rho r^{D-1} dr.
double jia_kenig_value(const FieldPair& state, double rho);

/// (Omega_1, Omega_2) at cutoff radius rho moving with speed rho_dot, with
/// psi = (r d_r chi)(r/rho):
///   Omega_1 = -(rho'/rho) int u_t r u_r psi - 1/2 int (u_t^2 + u_r^2 + (D-2)/D |u|^{2D/(D-2)}) psi,
///   Omega_2 = -(rho'/rho) int u_t u psi - int u_r (u/r) psi.
/// The potential term enters Omega_1 with the plus sign: it is -int F(u) psi
/// from integrating f(u) r u_r by parts, and the identities fail at W with
/// the opposite sign.
std::pair<double, double> omega_errors(const FieldPair& state, double rho, double rho_dot);

struct VirialRecord {
  double t = 0.0;
  double v = 0.0;
  double v_jk = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  /// int u_t^2 chi_rho r^{D-1} dr.
  double kinetic_inside = 0.0;
  /// jia_kenig_value at the same rho.
  double jk_density = 0.0;
  double rho = 0.0;
  double rho_dot = 0.0;
};

VirialRecord virial_terms(const FieldPair& state, double t, double rho, double rho_dot);

enum class VirialIdentity { Kinetic, JiaKenig };

/// Centered difference of the functional minus the right side of its
/// identity, at every interior record of a uniformly recorded trajectory.
/// rho_series has one entry per record (rho' by centered differences).
/// Returns (t_k, residual_k) for k = 1..n-2.
std::vector<std::pair<double, double>> virial_identity_residual(const Trajectory& traj,
                                                                const std::vector<double>& rho_series,
                                                                VirialIdentity identity);

/// ||u||^2_{E(r, r_max)}, the energy outside radius r.
double exterior_energy(const FieldPair& state, double r);

/// sup{r <= nu : ||u||_{E(r, nu)} = kappa1} by bisection on the (continuous,
/// cell-interpolated) exterior norm. Throws OutOfRegime unless
/// ||u||_{E(0, nu)} >= 2 kappa1.
double mu_scale(const FieldPair& state, double nu, double kappa1);

/// mu*(t_k) = min_s (4 mu(s) + |s - t_k|) over the samples.
std::vector<double> mu_star(const std::vector<double>& times, const std::vector<double>& mu);

struct CollisionInterval {
  double a = 0.0;
  double b = 0.0;
  double peak_d = 0.0;
  double dK_max = 0.0;
};

/// Excursions of d above eps whose endpoints return to eps, whose peak
/// reaches eta, and along which dK <= eps. Endpoints are placed at the
/// linearly interpolated crossing d = eps.
std::vector<CollisionInterval> detect_collision_intervals(const std::vector<double>& times,
                                                          const std::vector<double>& d,
                                                          const std::vector<double>& dK, double eps, double eta);

}  // namespace nlw
