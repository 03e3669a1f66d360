#pragma once

// The cutoff q_{c,R} and the localized virial operators A(lambda) and
// A_0(lambda) (written A-underline below).
//
// q is built in the variable s = log r through q'(r)/r = M(log r): M = 1 on
// [-log R, log R], M = 0 outside [-log R~, log R~], and the two transitions
// follow a C^4 polynomial step of length ell. In s,
//   q'' = M + M',  Delta q = D M + M',  r (q'/r)' = M',
//   r^2 Delta^2 q = D M'' + M''' + (D-2)(D M' + M''),
// so every property reduces to bounds on M', M'', M''' that scale like
// 1/ell, 1/ell^2, 1/ell^3. R~ = R e^ell is typically far beyond double range;
// only log R~ is stored.

#include <cmath>
#include <span>
#include <vector>

#include "nlw/radial.hpp"

namespace nlw {

struct CutoffTable {
  std::vector<double> r, q, q_prime, q_second, lap_q, bilap_q;
};

class CutoffQ {
 public:
  CutoffQ(int dim, double c, double R);

  int dim() const { return dim_; }
  double c() const { return c_; }
  double R() const { return R_; }
  /// Length of each transition in log r.
  double transition_length() const { return ell_; }
  /// log of the plateau radius R~ (q is constant beyond R~ and below 1/R~).
  double log_R_tilde() const { return std::log(R_) + ell_; }

  /// M(s) and its first three derivatives in s.
  double M(double s, int derivative = 0) const;

  /// q(r); +infinity where the value overflows a double.
  double q(double r) const;
  double q_prime(double r) const;
  double q_second(double r) const;
  double lap_q(double r) const;
  double bilap_q(double r) const;
  /// r (q'(r)/r)'.
  double r_dlog_qprime(double r) const;

  /// Values on n log-spaced points of [1/R~, R~] (clipped to the range where
  /// r is representable).
  CutoffTable tabulate(std::size_t n) const;

  /// Checks P1-P6 on a log-spaced mesh; throws ConstructionError whose index
  /// is the violated property.
  void verify(std::size_t mesh_points = 10000) const;

 private:
  int dim_;
  double c_;
  double R_;
  double ell_;
};

/// Throws ContractViolation unless 0 < c <= 1 and R > 2; throws
/// ConstructionError if a property fails on the verification mesh.
CutoffQ build_cutoff(int dim, double c, double R);

enum class VirialKind { A, A_underline };

/// A(lambda) g = q'(r/lambda) g' + (D-2)/(2D) lambda^{-1} Delta q(r/lambda) g,
/// A-underline with coefficient 1/2. The A-underline part is discretized in
/// skew form on the cell faces, so <A-underline g | g> = 0 to round-off.
std::vector<double> virial_apply(VirialKind kind, double lambda, std::span<const double> g, const RadialGrid& grid,
                                 const CutoffQ& q);

}  // namespace nlw
