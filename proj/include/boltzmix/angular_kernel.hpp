#pragma once

#include <vector>

namespace boltzmix {

class Rng;

/// Angular part b(sigma . u_hat) of a collision cross section, either a
/// constant or a tabulated nonnegative function of tau = sigma . u_hat on
/// [-1, 1]. Norms are taken against the sphere measure d(sigma):
///   ||b||_L1  = 2 pi * integral_{-1}^{1} b(tau) d(tau)
///   ||b||_Linf = sup b.
/// Tabulated kernels integrate by composite trapezoid on the stored grid and
/// interpolate linearly between nodes.
class AngularKernel {
 public:
  enum class Kind { Constant, Tabulated };

  static AngularKernel constant(double value);
  static AngularKernel tabulated(std::vector<double> tau, std::vector<double> b);

  Kind kind() const { return kind_; }
  double l1_norm() const { return l1_norm_; }
  double sup_norm() const { return sup_norm_; }

  /// Pointwise b(tau), tau clamped to [-1, 1].
  double value(double tau) const;

  /// Draw tau with density proportional to b(tau) d(tau). Constant kernels
  /// give tau uniform on [-1, 1]; tabulated kernels invert the piecewise
  /// quadratic CDF exactly. Throws on a degenerate (all-zero) table.
  double sample_tau(Rng& rng) const;

  bool same_shape(const AngularKernel& other, double tol) const;

 private:
  AngularKernel() = default;

  Kind kind_ = Kind::Constant;
  double constant_value_ = 0.0;
  std::vector<double> tau_;
  std::vector<double> b_;
  std::vector<double> segment_cdf_;  // cumulative segment masses, tabulated only
  double l1_norm_ = 0.0;
  double sup_norm_ = 0.0;
};

}  // namespace boltzmix
