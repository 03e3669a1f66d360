#pragma once

// Radial grids, weighted quadrature and energy functionals for radial fields
// in R^D. Every other module works on top of these primitives.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nlw {

/// Cell-centered radial mesh r_i = (i + 1/2) h on (0, r_max].
///
/// Quadrature uses the midpoint weights h r_i^{D-1}. The grid also carries
/// face weights m_{i+1/2} for the discrete Laplacian; they are chosen so that
/// the Laplacian is exact on quadratics and self-adjoint for the midpoint
/// weights. m_{i+1/2} = r_{i+1/2}^{D-1} (1 + O(h^2 / r^2)).
class RadialGrid {
 public:
  RadialGrid(int dim, std::size_t n, double r_max);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double h() const noexcept { return h_; }
  double r_max() const noexcept { return r_max_; }

  double node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// Midpoint weights h r_i^{D-1}.
  std::span<const double> weights() const noexcept { return weights_; }
  /// Face weights m_{i+1/2}, i = 0..n-1 (the last one is the outer face).
  std::span<const double> face_weights() const noexcept { return faces_; }

  /// Index of the cell boundary k*h nearest to r, clamped to [0, n].
  std::size_t snap(double r) const;

  bool same_as(const RadialGrid& other) const noexcept;

 private:
  int dim_;
  double h_;
  double r_max_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> faces_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dim, std::size_t n, double r_max);

/// Sampled pair (u, udot) on a grid: the state of the wave equation.
struct FieldPair {
  GridPtr grid;
  std::vector<double> u;
  std::vector<double> udot;

  /// Zero pair.
  explicit FieldPair(GridPtr g);
  FieldPair(GridPtr g, std::vector<double> u_in, std::vector<double> udot_in);

  std::size_t size() const noexcept { return u.size(); }
  /// Throws ContractViolation on length mismatch or non-finite entries.
  void validate() const;

  FieldPair& operator+=(const FieldPair& o);
  FieldPair& operator-=(const FieldPair& o);
  FieldPair& operator*=(double s);
};

FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(double s, FieldPair a);

/// Samples f at every node.
std::vector<double> sample(const RadialGrid& grid, const std::function<double(double)>& f);

/// Midpoint approximation of the integral of phi psi r^{D-1} over [0, r_max].
double inner_product(std::span<const double> phi, std::span<const double> psi, const RadialGrid& grid);

/// Midpoint approximation of (integral |phi|^p r^{D-1})^{1/p}.
double lp_norm(std::span<const double> phi, const RadialGrid& grid, double p);

/// Radial derivative: centered differences in the interior, the even
/// reflection u(-r) = u(r) at the first node and a one-sided second-order
/// stencil at the last node.
std::vector<double> radial_derivative(std::span<const double> u, const RadialGrid& grid);

/// Localized energy norm over [r1, r2]; endpoints snap to the nearest cell
/// boundary. Throws ContractViolation unless 0 <= r1 < r2.
double energy_norm(const FieldPair& pair, double r1, double r2);
double energy_norm(const FieldPair& pair);

/// Localized nonlinear energy over [r1, r2] (same snapping rule).
double nonlinear_energy(const FieldPair& pair, double r1, double r2);
double nonlinear_energy(const FieldPair& pair);

/// Discrete radial Laplacian in flux form. `outer_ghost` is the value held at
/// the ghost node r_n = (n + 1/2) h.
std::vector<double> laplacian(std::span<const double> u, const RadialGrid& grid, double outer_ghost = 0.0);

/// The energy conserved by the semi-discrete flow u_tt = laplacian(u) + f(u):
/// kinetic and potential parts use the midpoint weights, the gradient part
/// the face weights. Matches `nonlinear_energy` to O(h^2).
double discrete_hamiltonian(const FieldPair& pair, double outer_ghost = 0.0, bool nonlinear = true);

}  // namespace nlw
