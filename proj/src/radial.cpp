#include "nlw/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlw/error.hpp"
#include "nlw/nonlinearity.hpp"

namespace nlw {

RadialGrid::RadialGrid(int dim, std::size_t n, double r_max) : dim_(dim), r_max_(r_max) {
  require(dim >= 4 && dim <= 8, "RadialGrid: dimension must lie in {4,...,8}, got " + std::to_string(dim));
  require(n >= 4, "RadialGrid: need at least 4 cells");
  require(std::isfinite(r_max) && r_max > 0.0, "RadialGrid: r_max must be positive");
  h_ = r_max / static_cast<double>(n);
  nodes_.resize(n);
  weights_.resize(n);
  faces_.resize(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * h_;
    nodes_[i] = r;
    weights_[i] = h_ * std::pow(r, dim - 1);
    running += weights_[i];
    // D * (midpoint volume up to the face) / r_face makes the flux-form
    // Laplacian reproduce Delta r^2 = 2D exactly.
    faces_[i] = dim * running / ((static_cast<double>(i) + 1.0) * h_);
  }
}

std::size_t RadialGrid::snap(double r) const {
  if (!(r > 0.0)) return 0;
  const double k = std::round(r / h_);
  if (k >= static_cast<double>(size())) return size();
  return static_cast<std::size_t>(k);
}

bool RadialGrid::same_as(const RadialGrid& other) const noexcept {
  return dim_ == other.dim_ && size() == other.size() && h_ == other.h_;
}

GridPtr make_grid(int dim, std::size_t n, double r_max) {
  return std::make_shared<const RadialGrid>(dim, n, r_max);
}

FieldPair::FieldPair(GridPtr g) : grid(std::move(g)) {
  require(grid != nullptr, "FieldPair: null grid");
  u.assign(grid->size(), 0.0);
  udot.assign(grid->size(), 0.0);
}

FieldPair::FieldPair(GridPtr g, std::vector<double> u_in, std::vector<double> udot_in)
    : grid(std::move(g)), u(std::move(u_in)), udot(std::move(udot_in)) {
  validate();
}

void FieldPair::validate() const {
  require(grid != nullptr, "FieldPair: null grid");
  require(u.size() == grid->size() && udot.size() == grid->size(), "FieldPair: length does not match grid");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(udot[i]))
      throw ContractViolation("FieldPair: non-finite entry at node " + std::to_string(i));
  }
}

namespace {
void require_same(const FieldPair& a, const FieldPair& b) {
  require(a.grid->same_as(*b.grid), "FieldPair: grid mismatch");
}
}  // namespace

FieldPair& FieldPair::operator+=(const FieldPair& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] += o.u[i];
    udot[i] += o.udot[i];
  }
  return *this;
}

FieldPair& FieldPair::operator-=(const FieldPair& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] -= o.u[i];
    udot[i] -= o.udot[i];
  }
  return *this;
}

FieldPair& FieldPair::operator*=(double s) {
  for (auto& x : u) x *= s;
  for (auto& x : udot) x *= s;
  return *this;
}

FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
FieldPair operator*(double s, FieldPair a) { return a *= s; }

std::vector<double> sample(const RadialGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.node(i));
  return out;
}

double inner_product(std::span<const double> phi, std::span<const double> psi, const RadialGrid& grid) {
  if (phi.size() != grid.size() || psi.size() != grid.size())
    throw ContractViolation("inner_product: vector length does not match grid");
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) acc += w[i] * phi[i] * psi[i];
  return acc;
}

double lp_norm(std::span<const double> phi, const RadialGrid& grid, double p) {
  require(phi.size() == grid.size(), "lp_norm: vector length does not match grid");
  require(p >= 1.0, "lp_norm: p must be >= 1");
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) acc += w[i] * std::pow(std::abs(phi[i]), p);
  return std::pow(acc, 1.0 / p);
}

std::vector<double> radial_derivative(std::span<const double> u, const RadialGrid& grid) {
  require(u.size() == grid.size(), "radial_derivative: vector length does not match grid");
  const std::size_t n = u.size();
  const double inv2h = 0.5 / grid.h();
  std::vector<double> du(n);
  du[0] = (u[1] - u[0]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) * inv2h;
  du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2h;
  return du;
}

namespace {

struct Range {
  std::size_t lo, hi;
};

Range snapped_range(const RadialGrid& grid, double r1, double r2, const char* who) {
  if (!(r1 >= 0.0 && r1 < r2))
    throw ContractViolation(std::string(who) + ": need 0 <= r1 < r2");
  return {grid.snap(r1), grid.snap(r2)};
}

}  // namespace

double energy_norm(const FieldPair& pair, double r1, double r2) {
  const RadialGrid& grid = *pair.grid;
  const auto [lo, hi] = snapped_range(grid, r1, r2, "energy_norm");
  const auto du = radial_derivative(pair.u, grid);
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double r = grid.node(i);
    const double hardy = pair.u[i] / r;
    acc += w[i] * (pair.udot[i] * pair.udot[i] + du[i] * du[i] + hardy * hardy);
  }
  return std::sqrt(acc);
}

double energy_norm(const FieldPair& pair) { return energy_norm(pair, 0.0, pair.grid->r_max()); }

double nonlinear_energy(const FieldPair& pair, double r1, double r2) {
  const RadialGrid& grid = *pair.grid;
  const auto [lo, hi] = snapped_range(grid, r1, r2, "nonlinear_energy");
  const auto du = radial_derivative(pair.u, grid);
  const auto w = grid.weights();
  const int dim = grid.dim();
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    acc += w[i] * (0.5 * (pair.udot[i] * pair.udot[i] + du[i] * du[i]) - potential_density(pair.u[i], dim));
  }
  return acc;
}

double nonlinear_energy(const FieldPair& pair) { return nonlinear_energy(pair, 0.0, pair.grid->r_max()); }

std::vector<double> laplacian(std::span<const double> u, const RadialGrid& grid, double outer_ghost) {
  require(u.size() == grid.size(), "laplacian: vector length does not match grid");
  const std::size_t n = u.size();
  const auto m = grid.face_weights();
  const auto w = grid.weights();
  const double h = grid.h();
  std::vector<double> out(n);
  double flux_in = 0.0;  // m_{-1/2} = 0
  for (std::size_t i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? u[i + 1] : outer_ghost;
    const double flux_out = m[i] * (next - u[i]);
    out[i] = (flux_out - flux_in) / (h * w[i]);
    flux_in = flux_out;
  }
  return out;
}

double discrete_hamiltonian(const FieldPair& pair, double outer_ghost, bool nonlinear) {
  const RadialGrid& grid = *pair.grid;
  const auto m = grid.face_weights();
  const auto w = grid.weights();
  const double h = grid.h();
  const int dim = grid.dim();
  const std::size_t n = grid.size();
  double kinetic = 0.0, gradient = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    kinetic += w[i] * pair.udot[i] * pair.udot[i];
    const double next = (i + 1 < n) ? pair.u[i + 1] : outer_ghost;
    const double d = next - pair.u[i];
    gradient += m[i] * d * d;
    if (nonlinear) potential += w[i] * potential_density(pair.u[i], dim);
  }
  return 0.5 * kinetic + 0.5 * gradient / h - potential;
}

}  // namespace nlw
