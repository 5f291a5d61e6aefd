#include "boltzmix/dsmc.hpp"

#include "boltzmix/collision.hpp"
#include "boltzmix/format.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boltzmix {

void SimConfig::validate() const {
  const std::size_t count = static_cast<std::size_t>(species.count());
  if (particles_per_species.size() != count || initial.size() != count) {
    throw std::invalid_argument("SimConfig: need one particle count and one initial condition per species");
  }
  for (std::size_t n : particles_per_species) {
    if (n < 100) throw std::invalid_argument("SimConfig: needs at least 100 particles per species");
  }
  for (const auto& ic : initial) {
    if (const auto* m = std::get_if<MaxwellianIC>(&ic)) {
      if (!(m->temperature > 0.0)) throw std::invalid_argument("SimConfig: Maxwellian temperature must be positive");
    } else if (const auto* tt = std::get_if<TwoTemperatureIC>(&ic)) {
      if (!(tt->t_a > 0.0 && tt->t_b > 0.0) || !(tt->fraction_a >= 0.0 && tt->fraction_a <= 1.0)) {
        throw std::invalid_argument("SimConfig: TwoTemperature needs positive temperatures, fraction in [0,1]");
      }
    } else if (const auto* sh = std::get_if<SphericalShellIC>(&ic)) {
      if (!(sh->speed > 0.0)) throw std::invalid_argument("SimConfig: shell speed must be positive");
    }
  }
  if (!(number_density > 0.0)) throw std::invalid_argument("SimConfig: number_density must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("SimConfig: t_end must be >= 0");
  if (diagnostic_every == 0) throw std::invalid_argument("SimConfig: diagnostic_every must be >= 1");
  if (!(majorant_cap_quantile > 0.9 && majorant_cap_quantile <= 1.0)) {
    throw std::invalid_argument("SimConfig: majorant_cap_quantile must lie in (0.9, 1]");
  }
  const ValidationReport report = boltzmix::validate(cross_section, species);
  if (!report.ok()) {
    throw std::invalid_argument("SimConfig: invalid cross section: " + report.issues.front().message);
  }
}

namespace {

Eigen::Vector3d sample_initial_velocity(const InitialCondition& ic, int i,
                                        const SpeciesSet& species, Rng& rng) {
  const double mass = species.mass(i);
  if (const auto* m = std::get_if<MaxwellianIC>(&ic)) {
    return m->drift + rng.normal3(std::sqrt(m->temperature / mass));
  }
  if (const auto* tt = std::get_if<TwoTemperatureIC>(&ic)) {
    const double t = rng.uniform() < tt->fraction_a ? tt->t_a : tt->t_b;
    return rng.normal3(std::sqrt(t / mass));
  }
  const auto& shell = std::get<SphericalShellIC>(ic);
  return shell.speed * rng.isotropic_direction();
}

/// Majorant relative-speed cap per pair: sampled quantile of the initial
/// |u| distribution times 1.5.
double initial_majorant(const std::vector<Eigen::Vector3d>& vi,
                        const std::vector<Eigen::Vector3d>& vj, double quantile, Rng& rng) {
  const std::size_t samples = 4096;
  std::vector<double> speeds(samples);
  for (auto& s : speeds) {
    const auto& a = vi[static_cast<std::size_t>(rng.uniform() * static_cast<double>(vi.size()))];
    const auto& b = vj[static_cast<std::size_t>(rng.uniform() * static_cast<double>(vj.size()))];
    s = (a - b).norm();
  }
  std::sort(speeds.begin(), speeds.end());
  const std::size_t idx =
      std::min(samples - 1, static_cast<std::size_t>(quantile * static_cast<double>(samples)));
  const double cap = 1.5 * speeds[idx];
  return cap > 0.0 ? cap : 1.0;
}

double majorant_rate_per_particle(const SimConfig& config, const SimState& state) {
  // Worst-case collision frequency of a single particle under the majorant.
  double worst = 0.0;
  for (int i = 0; i < config.species.count(); ++i) {
    double rate = 0.0;
    for (int j = 0; j < config.species.count(); ++j) {
      const double nj = state.ensemble.weight *
                        static_cast<double>(config.particles_per_species[static_cast<std::size_t>(j)]);
      rate += nj * config.cross_section.kernel(i, j).l1_norm() *
              std::pow(state.majorant(i, j), config.cross_section.gamma(i, j));
    }
    worst = std::max(worst, rate);
  }
  return worst;
}

}  // namespace

SimState init(const SimConfig& config) {
  config.validate();
  SimState state{config.species, Rng(config.seed)};
  const int count = config.species.count();

  state.ensemble.velocities.resize(static_cast<std::size_t>(count));
  std::size_t total = 0;
  for (std::size_t n : config.particles_per_species) total += n;
  state.ensemble.weight = config.number_density / static_cast<double>(total);

  for (int i = 0; i < count; ++i) {
    auto& vs = state.ensemble.velocities[static_cast<std::size_t>(i)];
    vs.resize(config.particles_per_species[static_cast<std::size_t>(i)]);
    for (auto& v : vs) {
      v = sample_initial_velocity(config.initial[static_cast<std::size_t>(i)], i, config.species,
                                  state.rng);
    }
  }

  // Shift by the mass-weighted mean velocity: total momentum becomes zero
  // up to rounding.
  Eigen::Vector3d momentum = Eigen::Vector3d::Zero();
  double mass_total = 0.0;
  for (int i = 0; i < count; ++i) {
    const double mi = config.species.mass(i);
    for (const auto& v : state.ensemble.velocities[static_cast<std::size_t>(i)]) momentum += mi * v;
    mass_total += mi * static_cast<double>(config.particles_per_species[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector3d shift = momentum / mass_total;
  for (auto& vs : state.ensemble.velocities) {
    for (auto& v : vs) v -= shift;
  }

  state.majorant.resize(count, count);
  state.attempted.setZero(count, count);
  state.accepted.setZero(count, count);
  state.majorant_exceedances.setZero(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = i; j < count; ++j) {
      const double cap = initial_majorant(state.ensemble.velocities[static_cast<std::size_t>(i)],
                                          state.ensemble.velocities[static_cast<std::size_t>(j)],
                                          config.majorant_cap_quantile, state.rng);
      state.majorant(i, j) = cap;
      state.majorant(j, i) = cap;
    }
  }

  state.dt = config.dt;
  if (!(state.dt > 0.0)) {
    state.dt = 0.1 / majorant_rate_per_particle(config, state);
  }
  if (state.dt * majorant_rate_per_particle(config, state) >= 0.5) {
    throw std::invalid_argument("SimConfig: dt * majorant collision rate per particle must stay below 0.5");
  }

  if (config.entropy_bins >= 8) {
    state.entropy_halfwidth = config.entropy_box_halfwidth;
    if (!(state.entropy_halfwidth > 0.0)) {
      double vmax = 0.0;
      for (const auto& vs : state.ensemble.velocities) {
        for (const auto& v : vs) vmax = std::max(vmax, v.lpNorm<Eigen::Infinity>());
      }
      // Headroom for the thermal spread the dynamics will add.
      state.entropy_halfwidth = 2.0 * vmax + 1.0;
    }
  }
  return state;
}

void step(SimState& state, const SimConfig& config) {
  const int count = config.species.count();
  const double dt = state.dt;
  Eigen::MatrixXd next_majorant = state.majorant;

  for (int i = 0; i < count; ++i) {
    for (int j = i; j < count; ++j) {
      auto& vi = state.ensemble.velocities[static_cast<std::size_t>(i)];
      auto& vj = state.ensemble.velocities[static_cast<std::size_t>(j)];
      const double ni = static_cast<double>(vi.size());
      const double nj = static_cast<double>(vj.size());
      // Distinct unordered pairs: the diagonal halves to avoid double
      // counting; an unordered off-diagonal pair carries the full N_i N_j
      // (it absorbs both (i,j) and (j,i) terms of the pairwise weak form).
      const double base_pairs = (i == j) ? 0.5 * ni * (ni - 1.0) : ni * nj;
      const double gamma = config.cross_section.gamma(i, j);
      const AngularKernel& kernel = config.cross_section.kernel(i, j);
      const double u_cap = state.majorant(i, j);
      const double rate = base_pairs * state.ensemble.weight * dt * kernel.l1_norm() *
                          std::pow(u_cap, gamma);
      if (!(rate > 0.0)) continue;
      const auto candidates = static_cast<long>(std::ceil(rate));
      state.attempted(i, j) += candidates;

      for (long c = 0; c < candidates; ++c) {
        std::size_t p = static_cast<std::size_t>(state.rng.uniform() * ni);
        std::size_t q = static_cast<std::size_t>(state.rng.uniform() * nj);
        if (i == j) {
          while (q == p) q = static_cast<std::size_t>(state.rng.uniform() * nj);
        }
        const Eigen::Vector3d u = vi[p] - vj[q];
        const double speed = u.norm();
        if (speed > u_cap) {
          ++state.majorant_exceedances(i, j);
          next_majorant(i, j) = std::max(next_majorant(i, j), 2.0 * u_cap);
          next_majorant(j, i) = next_majorant(i, j);
        }
        const double accept = std::min(1.0, std::pow(speed / u_cap, gamma));
        if (state.rng.uniform() >= accept) continue;

        const Eigen::Vector3d sigma = sample_sigma(state.rng, u / speed, kernel);
        const CollisionInput input{vi[p], vj[q], i, j};
        const CollisionOutput out = collide(input, sigma, config.species);
        vi[p] = out.v_prime;
        vj[q] = out.v_star_prime;
        ++state.accepted(i, j);
      }
    }
  }
  state.majorant = next_majorant;
  state.time += dt;
}

MomentRecord diagnostics(const SimState& state, const SimConfig& config) {
  MomentRecord rec;
  rec.time = state.time;
  for (int i = 0; i < config.species.count(); ++i) {
    rec.m0_per_species.push_back(poly_moment_species(state.ensemble, i, 0.0));
  }
  rec.momentum = mixture_momentum(state.ensemble);
  rec.m2 = poly_moment(state.ensemble, 2.0);
  for (double order : config.moment_orders) {
    rec.mk[order] = poly_moment(state.ensemble, order);
  }
  if (config.exp_moment) {
    rec.exp_params = config.exp_moment;
    rec.exp_moment = exp_moment(state.ensemble, config.exp_moment->alpha, config.exp_moment->s);
  }
  if (config.entropy_bins >= 8) {
    rec.entropy = entropy(state.ensemble, config.entropy_bins, state.entropy_halfwidth);
    if (config.entropy_bootstrap > 0) {
      // Resampling bootstrap over particles, per species, with a stream
      // seeded from the diagnostic time so records stay deterministic.
      Rng boot = Rng::substream(config.seed ^ 0x9e3779b97f4a7c15ULL,
                                static_cast<std::uint64_t>(state.time / state.dt + 0.5));
      std::vector<double> values(static_cast<std::size_t>(config.entropy_bootstrap));
      ParticleEnsemble resampled = state.ensemble;
      for (auto& value : values) {
        for (int i = 0; i < config.species.count(); ++i) {
          const auto& src = state.ensemble.velocities[static_cast<std::size_t>(i)];
          auto& dst = resampled.velocities[static_cast<std::size_t>(i)];
          for (auto& v : dst) {
            v = src[static_cast<std::size_t>(boot.uniform() * static_cast<double>(src.size()))];
          }
        }
        value = entropy(resampled, config.entropy_bins, state.entropy_halfwidth);
      }
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size() - 1);
      rec.entropy_std_error = std::sqrt(var);
    }
  }
  return rec;
}

SimResult run(const SimConfig& config) {
  SimState state = init(config);
  SimResult result;
  result.summary.dt = state.dt;

  const auto steps = static_cast<std::size_t>(std::llround(config.t_end / state.dt));
  result.summary.steps = steps;

  const MomentRecord first = diagnostics(state, config);
  result.summary.initial_m2 = first.m2;
  double momentum_scale = 0.0;
  for (int i = 0; i < config.species.count(); ++i) {
    const double mi = config.species.mass(i);
    for (const auto& v : state.ensemble.velocities[static_cast<std::size_t>(i)]) {
      momentum_scale += state.ensemble.weight * mi * v.norm();
    }
  }
  result.summary.momentum_scale = momentum_scale > 0.0 ? momentum_scale : 1.0;
  result.records.push_back(first);

  for (std::size_t n = 1; n <= steps; ++n) {
    step(state, config);
    if (n % config.diagnostic_every == 0 || n == steps) {
      result.records.push_back(diagnostics(state, config));
      const MomentRecord& rec = result.records.back();
      result.summary.max_abs_m2_drift =
          std::max(result.summary.max_abs_m2_drift, std::abs(rec.m2 - first.m2));
      result.summary.max_abs_momentum_drift = std::max(
          result.summary.max_abs_momentum_drift, (rec.momentum - first.momentum).norm());
    }
  }
  result.summary.final_m2 = result.records.back().m2;
  result.summary.attempted = state.attempted;
  result.summary.accepted = state.accepted;
  result.summary.majorant_exceedances = state.majorant_exceedances;
  result.summary.final_majorant = state.majorant;
  return result;
}

ReplicaAggregate aggregate_records(const std::vector<std::vector<MomentRecord>>& all_records) {
  if (all_records.size() < 2) {
    throw std::invalid_argument("aggregate_records: needs at least 2 replicas");
  }
  const std::size_t rows = all_records.front().size();
  for (const auto& records : all_records) {
    if (records.size() != rows) {
      throw std::invalid_argument("aggregate_records: replicas disagree on record count");
    }
  }

  const auto flatten = [](const MomentRecord& rec) {
    std::vector<double> row;
    for (double m0 : rec.m0_per_species) row.push_back(m0);
    for (int c = 0; c < 3; ++c) row.push_back(rec.momentum[c]);
    row.push_back(rec.m2);
    for (const auto& [order, value] : rec.mk) {
      (void)order;
      row.push_back(value);
    }
    if (rec.exp_moment) row.push_back(*rec.exp_moment);
    if (rec.entropy) row.push_back(*rec.entropy);
    return row;
  };

  ReplicaAggregate agg;
  agg.replicas = all_records.size();
  const MomentRecord& sample = all_records.front().front();
  for (std::size_t i = 0; i < sample.m0_per_species.size(); ++i) {
    agg.columns.push_back("m0_" + std::to_string(i));
  }
  agg.columns.insert(agg.columns.end(), {"px", "py", "pz", "m2"});
  for (const auto& [order, value] : sample.mk) {
    (void)value;
    agg.columns.push_back("mk_" + format_double(order));
  }
  if (sample.exp_moment) agg.columns.push_back("exp");
  if (sample.entropy) agg.columns.push_back("entropy");

  const auto cols = static_cast<Eigen::Index>(agg.columns.size());
  agg.mean.setZero(static_cast<Eigen::Index>(rows), cols);
  agg.std_error.setZero(static_cast<Eigen::Index>(rows), cols);
  agg.times.resize(rows);

  const double n = static_cast<double>(all_records.size());
  for (std::size_t row = 0; row < rows; ++row) {
    agg.times[row] = all_records.front()[row].time;
    for (const auto& records : all_records) {
      const auto flat = flatten(records[row]);
      for (Eigen::Index col = 0; col < cols; ++col) {
        agg.mean(static_cast<Eigen::Index>(row), col) += flat[static_cast<std::size_t>(col)];
      }
    }
    agg.mean.row(static_cast<Eigen::Index>(row)) /= n;
    for (const auto& records : all_records) {
      const auto flat = flatten(records[row]);
      for (Eigen::Index col = 0; col < cols; ++col) {
        const double d = flat[static_cast<std::size_t>(col)] -
                         agg.mean(static_cast<Eigen::Index>(row), col);
        agg.std_error(static_cast<Eigen::Index>(row), col) += d * d;
      }
    }
    agg.std_error.row(static_cast<Eigen::Index>(row)) =
        (agg.std_error.row(static_cast<Eigen::Index>(row)) / (n * (n - 1.0))).cwiseSqrt();
  }
  return agg;
}

ReplicaAggregate replicate(const SimConfig& config, std::size_t n_replicas) {
  if (n_replicas < 2) throw std::invalid_argument("replicate: needs n_replicas >= 2");
  std::vector<std::vector<MomentRecord>> all_records;
  all_records.reserve(n_replicas);
  for (std::size_t rep = 0; rep < n_replicas; ++rep) {
    SimConfig replica_config = config;
    // Decorrelate replicas by hashing (seed, replica) through the stream
    // splitter; replica 0 keeps the base seed stream layout.
    replica_config.seed = Rng::substream(config.seed, rep).next_u64();
    all_records.push_back(run(replica_config).records);
  }
  return aggregate_records(all_records);
}

}  // namespace boltzmix
