#include "boltzmix/species.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boltzmix {

SpeciesSet::SpeciesSet(std::vector<double> masses) {
  if (masses.empty()) throw std::invalid_argument("SpeciesSet: needs at least one species");
  masses_.resize(static_cast<Eigen::Index>(masses.size()));
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i])) {
      throw std::invalid_argument("SpeciesSet: mass " + std::to_string(i) +
                                  " must be positive and finite");
    }
    masses_[static_cast<Eigen::Index>(i)] = masses[i];
  }
  total_mass_ = masses_.sum();
}

double SpeciesSet::mass(int i) const {
  if (i < 0 || i >= count()) throw std::out_of_range("SpeciesSet: species index " + std::to_string(i));
  return masses_[i];
}

double bracket_squared(const Eigen::Vector3d& v, int i, const SpeciesSet& species) {
  return 1.0 + species.mass(i) / species.total_mass() * v.squaredNorm();
}

double bracket(const Eigen::Vector3d& v, int i, const SpeciesSet& species) {
  return std::sqrt(bracket_squared(v, i, species));
}

double mass_fraction(int i, int j, const SpeciesSet& species) {
  const double mi = species.mass(i);
  const double mj = species.mass(j);
  return mi / (mi + mj);
}

}  // namespace boltzmix
