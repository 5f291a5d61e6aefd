#pragma once

#include "boltzmix/cross_section.hpp"
#include "boltzmix/moments.hpp"
#include "boltzmix/rng.hpp"
#include "boltzmix/species.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace boltzmix {

struct MaxwellianIC {
  double temperature = 1.0;
  Eigen::Vector3d drift = Eigen::Vector3d::Zero();
};

struct TwoTemperatureIC {
  double t_a = 1.0;
  double t_b = 1.0;
  double fraction_a = 0.5;
};

struct SphericalShellIC {
  double speed = 1.0;
};

using InitialCondition = std::variant<MaxwellianIC, TwoTemperatureIC, SphericalShellIC>;

struct SimConfig {
  SpeciesSet species;
  CrossSection cross_section;
  std::vector<std::size_t> particles_per_species;
  std::vector<InitialCondition> initial;

  /// Total mixture number density m_0 = weight * total particle count;
  /// the effective volume is fixed to 1.
  double number_density = 1.0;

  /// Time step; <= 0 selects one targeting at most 0.1 majorant collisions
  /// per particle per step.
  double dt = 0.0;
  double t_end = 1.0;
  std::size_t diagnostic_every = 100;
  std::vector<double> moment_orders;
  std::optional<ExpMomentParams> exp_moment;

  std::uint64_t seed = 1;
  double majorant_cap_quantile = 0.99;

  /// Entropy diagnostics; bins < 8 disables them. A non-positive halfwidth
  /// is resolved at init from the initial ensemble and then kept fixed.
  int entropy_bins = 0;
  double entropy_box_halfwidth = 0.0;
  /// Bootstrap resamples for the entropy standard error; 0 disables.
  int entropy_bootstrap = 0;

  void validate() const;
};

struct SimState {
  ParticleEnsemble ensemble;
  double time = 0.0;
  Rng rng;
  double dt = 0.0;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> attempted;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> accepted;
  Eigen::MatrixXd majorant;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> majorant_exceedances;
  double entropy_halfwidth = 0.0;

  SimState(SpeciesSet species, Rng r) : ensemble{std::move(species), {}, 1.0}, rng(r) {}
};

struct RunSummary {
  double initial_m2 = 0.0;
  double final_m2 = 0.0;
  double max_abs_m2_drift = 0.0;
  double max_abs_momentum_drift = 0.0;
  /// Normalization scales for the relative drifts reported in summaries:
  /// the initial m2 and the L1 norm of |m v| over the initial ensemble.
  double momentum_scale = 1.0;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> attempted;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> accepted;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> majorant_exceedances;
  Eigen::MatrixXd final_majorant;
  double dt = 0.0;
  std::size_t steps = 0;
};

struct SimResult {
  std::vector<MomentRecord> records;
  RunSummary summary;
};

/// Samples the initial ensemble, shifts total momentum to exactly zero and
/// initializes per-pair majorants. Deterministic given config.seed.
SimState init(const SimConfig& config);

/// One Nanbu-Babovsky step: per unordered species pair, candidate pairs are
/// drawn at the majorant rate and accepted with probability
/// (|u|/U_max)^gamma_ij; accepted pairs scatter elastically with sigma drawn
/// from the pair's angular kernel. Majorant exceedances double the cap for
/// subsequent steps and are counted, never silent.
void step(SimState& state, const SimConfig& config);

MomentRecord diagnostics(const SimState& state, const SimConfig& config);

SimResult run(const SimConfig& config);

struct ReplicaAggregate {
  std::vector<double> times;
  std::vector<std::string> columns;
  /// mean(row, col) / std_error(row, col) over replicas, one row per
  /// diagnostic time, one column per CSV field after t.
  Eigen::MatrixXd mean;
  Eigen::MatrixXd std_error;
  std::size_t replicas = 0;
};

/// Independent replicas with decorrelated seed substreams.
ReplicaAggregate replicate(const SimConfig& config, std::size_t n_replicas);

/// Aggregation core, exposed for testing: every replica must have the same
/// record layout.
ReplicaAggregate aggregate_records(const std::vector<std::vector<MomentRecord>>& all_records);

}  // namespace boltzmix
