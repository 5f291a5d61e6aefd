#pragma once

#include "boltzmix/species.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace boltzmix {

/// Weighted velocity samples representing the vector of distribution
/// functions, one array per species. The statistical weight is shared
/// across species so that pairwise collision bookkeeping stays exactly
/// conservative.
struct ParticleEnsemble {
  SpeciesSet species;
  std::vector<std::vector<Eigen::Vector3d>> velocities;
  double weight = 1.0;

  std::size_t total_particles() const;
};

/// m0 per species is w * N_i; the scalar moment of order q is
/// w * sum_i sum_p <v_p>_i^q.
double poly_moment(const ParticleEnsemble& ensemble, double q);
double poly_moment_species(const ParticleEnsemble& ensemble, int i, double q);

/// sum_i m_i integral v f_i; the mixture's conserved momentum vector.
Eigen::Vector3d mixture_momentum(const ParticleEnsemble& ensemble);

/// Standard error of the momentum estimator (norm of per-component SEs);
/// used to test "zero momentum" statistically.
double momentum_std_error(const ParticleEnsemble& ensemble);

/// w * sum_i sum_p exp(alpha <v_p>_i^s). Throws std::range_error naming the
/// offending particle when an exponent argument exceeds 700.
double exp_moment(const ParticleEnsemble& ensemble, double alpha, double s);

/// Lower bound (I C_m0)^(-lambda/k) m_k^(1 + lambda/k) for m_{k+lambda}.
double jensen_lower_bound(double m_k, double m0_cap, int species_count, double k, double lambda);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// m_k <= I * m_k1^alpha * m_k2^(1-alpha) with k = alpha k1 + (1-alpha) k2.
InequalityCheck interpolation_check(const ParticleEnsemble& ensemble, double k1, double k2,
                                    double alpha);

/// Generalized binomial coefficient C(p, n) for real p, integer n >= 0.
double generalized_binomial(double p, int n);

/// (x+y)^p - x^p - y^p <= sum_{n=1}^{floor((p+1)/2)} C(p,n)(x^n y^(p-n) + x^(p-n) y^n).
InequalityCheck poly_inequality_I(double x, double y, double p);

/// x^a y^(p-a) + x^(p-a) y^a <= x^b y^(p-b) + x^(p-b) y^b
/// for b >= 0 and b + 1 <= a <= (p+1)/2.
InequalityCheck poly_inequality_II(double x, double y, double a, double b, double p);

struct EntropyEstimate {
  double value = 0.0;
  /// Fraction of particles inside the histogram box.
  double coverage = 1.0;
};

/// Histogram estimate of sum_i integral f_i log f_i on the common box
/// [-halfwidth, halfwidth]^3, empty cells skipped. Box should cover at least
/// 99.9% of the particles; coverage reports the achieved fraction.
EntropyEstimate entropy_estimate(const ParticleEnsemble& ensemble, int bins_per_axis,
                                 double box_halfwidth);
double entropy(const ParticleEnsemble& ensemble, int bins_per_axis, double box_halfwidth);

struct ExpMomentParams {
  double alpha = 0.0;
  double s = 2.0;
};

/// One diagnostic row of a simulation run.
struct MomentRecord {
  double time = 0.0;
  std::vector<double> m0_per_species;
  Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
  double m2 = 0.0;
  std::map<double, double> mk;
  std::optional<ExpMomentParams> exp_params;
  std::optional<double> exp_moment;
  std::optional<double> entropy;
  std::optional<double> entropy_std_error;
};

std::string moment_csv_header(const MomentRecord& sample);
std::string moment_csv_row(const MomentRecord& record);

}  // namespace boltzmix
