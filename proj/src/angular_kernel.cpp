#include "boltzmix/angular_kernel.hpp"

#include "boltzmix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boltzmix {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
constexpr double kGridTol = 1e-12;
}  // namespace

AngularKernel AngularKernel::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("AngularKernel: constant value must be finite and >= 0");
  }
  AngularKernel k;
  k.kind_ = Kind::Constant;
  k.constant_value_ = value;
  k.l1_norm_ = 4.0 * kPi * value;
  k.sup_norm_ = value;
  return k;
}

AngularKernel AngularKernel::tabulated(std::vector<double> tau, std::vector<double> b) {
  if (tau.size() != b.size() || tau.size() < 2) {
    throw std::invalid_argument("AngularKernel: table needs matching tau/b arrays, length >= 2");
  }
  if (std::abs(tau.front() + 1.0) > kGridTol || std::abs(tau.back() - 1.0) > kGridTol) {
    throw std::invalid_argument("AngularKernel: tau grid must cover [-1, 1]");
  }
  for (std::size_t m = 0; m + 1 < tau.size(); ++m) {
    if (!(tau[m + 1] > tau[m])) {
      throw std::invalid_argument("AngularKernel: tau grid must be strictly increasing");
    }
  }
  for (double v : b) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("AngularKernel: table values must be finite and >= 0");
    }
  }
  AngularKernel k;
  k.kind_ = Kind::Tabulated;
  k.tau_ = std::move(tau);
  k.b_ = std::move(b);
  k.segment_cdf_.resize(k.tau_.size() - 1);
  double acc = 0.0;
  for (std::size_t m = 0; m + 1 < k.tau_.size(); ++m) {
    const double dt = k.tau_[m + 1] - k.tau_[m];
    acc += 0.5 * (k.b_[m] + k.b_[m + 1]) * dt;
    k.segment_cdf_[m] = acc;
  }
  k.l1_norm_ = 2.0 * kPi * acc;
  k.sup_norm_ = *std::max_element(k.b_.begin(), k.b_.end());
  return k;
}

double AngularKernel::value(double tau) const {
  if (kind_ == Kind::Constant) return constant_value_;
  tau = std::clamp(tau, -1.0, 1.0);
  const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
  std::size_t m = it == tau_.begin() ? 0 : static_cast<std::size_t>(it - tau_.begin()) - 1;
  m = std::min(m, tau_.size() - 2);
  const double t = (tau - tau_[m]) / (tau_[m + 1] - tau_[m]);
  return b_[m] + t * (b_[m + 1] - b_[m]);
}

double AngularKernel::sample_tau(Rng& rng) const {
  if (kind_ == Kind::Constant) {
    if (constant_value_ <= 0.0) throw std::domain_error("AngularKernel: cannot sample zero kernel");
    return -1.0 + 2.0 * rng.uniform();
  }
  const double total = segment_cdf_.back();
  if (total <= 0.0) throw std::domain_error("AngularKernel: cannot sample all-zero table");
  const double x = rng.uniform() * total;
  const auto it = std::lower_bound(segment_cdf_.begin(), segment_cdf_.end(), x);
  const std::size_t m = std::min(static_cast<std::size_t>(it - segment_cdf_.begin()),
                                 segment_cdf_.size() - 1);
  const double mass_before = m == 0 ? 0.0 : segment_cdf_[m - 1];
  const double within = x - mass_before;
  const double dt = tau_[m + 1] - tau_[m];
  const double b0 = b_[m];
  const double slope = (b_[m + 1] - b_[m]) / dt;
  // Invert b0*t + slope*t^2/2 = within on [0, dt]; stable quadratic root.
  double t;
  const double disc = b0 * b0 + 2.0 * slope * within;
  if (std::abs(slope) * dt < 1e-12 * std::max(b0, 1e-300)) {
    t = within / b0;
  } else {
    t = 2.0 * within / (b0 + std::sqrt(std::max(disc, 0.0)));
  }
  return tau_[m] + std::clamp(t, 0.0, dt);
}

bool AngularKernel::same_shape(const AngularKernel& other, double tol) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::Constant) return std::abs(constant_value_ - other.constant_value_) <= tol;
  if (tau_.size() != other.tau_.size()) return false;
  for (std::size_t m = 0; m < tau_.size(); ++m) {
    if (std::abs(tau_[m] - other.tau_[m]) > tol) return false;
    if (std::abs(b_[m] - other.b_[m]) > tol) return false;
  }
  return true;
}

}  // namespace boltzmix
