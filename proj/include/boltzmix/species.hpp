#pragma once

#include <Eigen/Dense>

#include <vector>

namespace boltzmix {

/// Masses of the mixture components. Immutable after construction.
class SpeciesSet {
 public:
  explicit SpeciesSet(std::vector<double> masses);

  int count() const { return static_cast<int>(masses_.size()); }
  double mass(int i) const;
  const Eigen::VectorXd& masses() const { return masses_; }
  double total_mass() const { return total_mass_; }
  double max_mass() const { return masses_.maxCoeff(); }
  double min_mass() const { return masses_.minCoeff(); }

 private:
  Eigen::VectorXd masses_;
  double total_mass_;
};

/// Dimensionless bracket weight sqrt(1 + (m_i / sum_j m_j) |v|^2).
/// All mixture moments are taken against powers of this weight, which makes
/// them independent of mass units. Always >= 1.
double bracket(const Eigen::Vector3d& v, int i, const SpeciesSet& species);

/// Squared bracket, 1 + (m_i / sum m) |v|^2; avoids a sqrt/square round trip.
double bracket_squared(const Eigen::Vector3d& v, int i, const SpeciesSet& species);

/// Two-body mass fraction r_ij = m_i / (m_i + m_j) in (0,1).
/// r_ij + r_ji = 1 up to rounding.
double mass_fraction(int i, int j, const SpeciesSet& species);

}  // namespace boltzmix
