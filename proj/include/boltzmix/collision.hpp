#pragma once

#include "boltzmix/angular_kernel.hpp"
#include "boltzmix/species.hpp"

#include <Eigen/Dense>

#include <utility>

namespace boltzmix {

class Rng;

struct CollisionInput {
  Eigen::Vector3d v;
  Eigen::Vector3d v_star;
  int i = 0;
  int j = 0;
};

struct CollisionOutput {
  Eigen::Vector3d v_prime;
  Eigen::Vector3d v_star_prime;
};

/// Terms of the bracket-energy identity for one colliding pair.
/// E = <v>_i^2 + <v_*>_j^2 splits as p + q, and the post-collision brackets
/// recompose as <v'>_i^2 = p + lambda sigma.V_hat and
/// <v'_*>_j^2 = q - lambda sigma.V_hat, with p + lambda <= E and
/// q + lambda <= E.
struct EnergyIdentityTerms {
  double E = 2.0;
  double p = 1.0;
  double q = 1.0;
  double lambda = 0.0;
  double s = 0.5;
  double r = 0.5;
  Eigen::Vector3d V = Eigen::Vector3d::Zero();
  Eigen::Vector3d u = Eigen::Vector3d::Zero();

  /// Unit vector of V, or the zero sentinel when |V| = 0 (lambda vanishes
  /// there, so the direction is never consumed).
  Eigen::Vector3d v_hat() const;
};

/// Center-of-mass velocity and relative velocity (V, u).
std::pair<Eigen::Vector3d, Eigen::Vector3d> center_and_relative(const CollisionInput& input,
                                                                const SpeciesSet& species);

/// Elastic scattering: v' = V + (1-r)|u| sigma, v'_* = V - r|u| sigma.
/// sigma must be unit to 1e-12 (a violation is a caller bug in the sigma
/// sampler and throws). u = 0 degenerates gracefully to (V, V).
CollisionOutput collide(const CollisionInput& input, const Eigen::Vector3d& sigma,
                        const SpeciesSet& species);

EnergyIdentityTerms energy_identity(const CollisionInput& input, const SpeciesSet& species);

/// (|momentum defect|, |kinetic-energy defect|) between input and output.
std::pair<double, double> conservation_residuals(const CollisionInput& input,
                                                 const CollisionOutput& output,
                                                 const SpeciesSet& species);

/// Scattering direction with density b(sigma . u_hat)/||b||_L1 on S^2:
/// inverse-CDF in tau plus a uniform azimuth around u_hat.
Eigen::Vector3d sample_sigma(Rng& rng, const Eigen::Vector3d& u_hat,
                             const AngularKernel& kernel);

}  // namespace boltzmix
