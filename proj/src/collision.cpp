#include "boltzmix/collision.hpp"

#include "boltzmix/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace boltzmix {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kUnitTol = 1e-12;
}  // namespace

Eigen::Vector3d EnergyIdentityTerms::v_hat() const {
  const double norm = V.norm();
  if (norm == 0.0) return Eigen::Vector3d::Zero();
  return V / norm;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> center_and_relative(const CollisionInput& input,
                                                                const SpeciesSet& species) {
  const double mi = species.mass(input.i);
  const double mj = species.mass(input.j);
  const Eigen::Vector3d V = (mi * input.v + mj * input.v_star) / (mi + mj);
  const Eigen::Vector3d u = input.v - input.v_star;
  return {V, u};
}

CollisionOutput collide(const CollisionInput& input, const Eigen::Vector3d& sigma,
                        const SpeciesSet& species) {
  if (std::abs(sigma.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("collide: sigma is not a unit vector");
  }
  const double mi = species.mass(input.i);
  const double mj = species.mass(input.j);
  const auto [V, u] = center_and_relative(input, species);
  const double speed = u.norm();
  const double r = mi / (mi + mj);
  const double one_minus_r = mj / (mi + mj);
  return {V + one_minus_r * speed * sigma, V - r * speed * sigma};
}

EnergyIdentityTerms energy_identity(const CollisionInput& input, const SpeciesSet& species) {
  const double mi = species.mass(input.i);
  const double mj = species.mass(input.j);
  const double msum = species.total_mass();
  const auto [V, u] = center_and_relative(input, species);

  EnergyIdentityTerms t;
  t.V = V;
  t.u = u;
  t.r = mi / (mi + mj);

  // Convex split of E: sE carries the relative-speed part, (1-s)E the
  // center-of-mass part; both are >= 1 by construction.
  const double sE = 1.0 + mi * mj / ((mi + mj) * msum) * u.squaredNorm();
  const double omsE = 1.0 + (mi + mj) / msum * V.squaredNorm();
  t.E = sE + omsE;
  t.s = sE / t.E;
  t.p = t.r * omsE + (1.0 - t.r) * sE;
  t.q = t.E - t.p;
  t.lambda = 2.0 * std::sqrt(t.r * (1.0 - t.r)) * std::sqrt(mi * mj) / msum * u.norm() * V.norm();
  return t;
}

std::pair<double, double> conservation_residuals(const CollisionInput& input,
                                                 const CollisionOutput& output,
                                                 const SpeciesSet& species) {
  const double mi = species.mass(input.i);
  const double mj = species.mass(input.j);
  const Eigen::Vector3d momentum_defect =
      mi * output.v_prime + mj * output.v_star_prime - mi * input.v - mj * input.v_star;
  const double energy_defect = mi * output.v_prime.squaredNorm() +
                               mj * output.v_star_prime.squaredNorm() -
                               mi * input.v.squaredNorm() - mj * input.v_star.squaredNorm();
  return {momentum_defect.norm(), std::abs(energy_defect)};
}

Eigen::Vector3d sample_sigma(Rng& rng, const Eigen::Vector3d& u_hat,
                             const AngularKernel& kernel) {
  const double tau = kernel.sample_tau(rng);
  const double phi = kTwoPi * rng.uniform();

  // Orthonormal frame around u_hat; helper axis chosen least aligned.
  Eigen::Vector3d helper = std::abs(u_hat.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                     : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = u_hat.cross(helper).normalized();
  const Eigen::Vector3d e2 = u_hat.cross(e1);

  const double rho = std::sqrt(std::max(0.0, 1.0 - tau * tau));
  return (tau * u_hat + rho * (std::cos(phi) * e1 + std::sin(phi) * e2)).normalized();
}

}  // namespace boltzmix
