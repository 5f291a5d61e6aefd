#include "boltzmix/moments.hpp"

#include "boltzmix/format.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boltzmix {

std::size_t ParticleEnsemble::total_particles() const {
  std::size_t n = 0;
  for (const auto& sp : velocities) n += sp.size();
  return n;
}

double poly_moment_species(const ParticleEnsemble& ensemble, int i, double q) {
  if (q < 0.0) throw std::invalid_argument("poly_moment: requires q >= 0");
  const auto& vs = ensemble.velocities[static_cast<std::size_t>(i)];
  const double half_q = 0.5 * q;
  const double sum = pairwise_sum(vs.size(), [&](std::size_t p) {
    return std::pow(bracket_squared(vs[p], i, ensemble.species), half_q);
  });
  return ensemble.weight * sum;
}

double poly_moment(const ParticleEnsemble& ensemble, double q) {
  double total = 0.0;
  for (int i = 0; i < ensemble.species.count(); ++i) total += poly_moment_species(ensemble, i, q);
  return total;
}

Eigen::Vector3d mixture_momentum(const ParticleEnsemble& ensemble) {
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (int i = 0; i < ensemble.species.count(); ++i) {
    const auto& vs = ensemble.velocities[static_cast<std::size_t>(i)];
    const double mi = ensemble.species.mass(i);
    for (int c = 0; c < 3; ++c) {
      total[c] += mi * ensemble.weight *
                  pairwise_sum(vs.size(), [&](std::size_t p) { return vs[p][c]; });
    }
  }
  return total;
}

double momentum_std_error(const ParticleEnsemble& ensemble) {
  // Per-component variance of the summands m_i v_c; the total over N terms
  // has standard error w * sd * sqrt(N).
  double se_sq = 0.0;
  const double n = static_cast<double>(ensemble.total_particles());
  if (n < 2.0) return 0.0;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < ensemble.species.count(); ++i) {
      const double mi = ensemble.species.mass(i);
      for (const auto& v : ensemble.velocities[static_cast<std::size_t>(i)]) {
        const double x = mi * v[c];
        sum += x;
        sum_sq += x * x;
      }
    }
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    se_sq += ensemble.weight * ensemble.weight * var * n;
  }
  return std::sqrt(se_sq);
}

double exp_moment(const ParticleEnsemble& ensemble, double alpha, double s) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exp_moment: requires alpha > 0");
  if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("exp_moment: requires 0 < s <= 2");
  double total = 0.0;
  for (int i = 0; i < ensemble.species.count(); ++i) {
    const auto& vs = ensemble.velocities[static_cast<std::size_t>(i)];
    total += ensemble.weight * pairwise_sum(vs.size(), [&](std::size_t p) {
               const double arg = alpha * std::pow(bracket_squared(vs[p], i, ensemble.species),
                                                   0.5 * s);
               if (arg > 700.0) {
                 throw std::range_error("exp_moment: overflow for species " + std::to_string(i) +
                                        " particle " + std::to_string(p) +
                                        " (alpha <v>^s = " + format_double(arg) + ")");
               }
               return std::exp(arg);
             });
  }
  return total;
}

double jensen_lower_bound(double m_k, double m0_cap, int species_count, double k, double lambda) {
  if (!(m_k > 0.0 && m0_cap > 0.0 && species_count > 0 && k >= 1.0 && lambda > 0.0 &&
        lambda <= 1.0)) {
    throw std::invalid_argument("jensen_lower_bound: invalid arguments");
  }
  return std::pow(static_cast<double>(species_count) * m0_cap, -lambda / k) *
         std::pow(m_k, 1.0 + lambda / k);
}

InequalityCheck interpolation_check(const ParticleEnsemble& ensemble, double k1, double k2,
                                    double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(k1 > 0.0) || !(k1 <= k2)) {
    throw std::invalid_argument("interpolation_check: requires 0 < k1 <= k2, alpha in (0,1)");
  }
  const double k = alpha * k1 + (1.0 - alpha) * k2;
  InequalityCheck chk;
  chk.lhs = poly_moment(ensemble, k);
  chk.rhs = static_cast<double>(ensemble.species.count()) *
            std::pow(poly_moment(ensemble, k1), alpha) *
            std::pow(poly_moment(ensemble, k2), 1.0 - alpha);
  chk.holds = chk.lhs <= chk.rhs * (1.0 + 1e-12);
  return chk;
}

double generalized_binomial(double p, int n) {
  if (n < 0) throw std::invalid_argument("generalized_binomial: n must be >= 0");
  double value = 1.0;
  for (int j = 0; j < n; ++j) value *= (p - static_cast<double>(j)) / static_cast<double>(j + 1);
  return value;
}

InequalityCheck poly_inequality_I(double x, double y, double p) {
  if (!(x > 0.0 && y > 0.0 && p > 1.0)) {
    throw std::invalid_argument("poly_inequality_I: requires x, y > 0 and p > 1");
  }
  const int n_p = static_cast<int>(std::floor((p + 1.0) / 2.0));
  InequalityCheck chk;
  chk.lhs = std::pow(x + y, p) - std::pow(x, p) - std::pow(y, p);
  chk.rhs = 0.0;
  for (int n = 1; n <= n_p; ++n) {
    chk.rhs += generalized_binomial(p, n) *
               (std::pow(x, n) * std::pow(y, p - n) + std::pow(x, p - n) * std::pow(y, n));
  }
  chk.holds = chk.lhs <= chk.rhs * (1.0 + 1e-12);
  return chk;
}

InequalityCheck poly_inequality_II(double x, double y, double a, double b, double p) {
  if (!(b >= 0.0 && b + 1.0 <= a && a <= (p + 1.0) / 2.0)) {
    throw std::invalid_argument("poly_inequality_II: requires 0 <= b, b + 1 <= a <= (p+1)/2");
  }
  if (!(x >= 0.0 && y >= 0.0)) {
    throw std::invalid_argument("poly_inequality_II: requires x, y >= 0");
  }
  InequalityCheck chk;
  chk.lhs = std::pow(x, a) * std::pow(y, p - a) + std::pow(x, p - a) * std::pow(y, a);
  chk.rhs = std::pow(x, b) * std::pow(y, p - b) + std::pow(x, p - b) * std::pow(y, b);
  chk.holds = chk.lhs <= chk.rhs * (1.0 + 1e-12);
  return chk;
}

EntropyEstimate entropy_estimate(const ParticleEnsemble& ensemble, int bins_per_axis,
                                 double box_halfwidth) {
  if (bins_per_axis < 8) throw std::invalid_argument("entropy: needs bins_per_axis >= 8");
  if (!(box_halfwidth > 0.0)) throw std::invalid_argument("entropy: needs box_halfwidth > 0");
  if (ensemble.total_particles() == 0) throw std::invalid_argument("entropy: empty ensemble");

  const int nb = bins_per_axis;
  const double cell_width = 2.0 * box_halfwidth / static_cast<double>(nb);
  const double cell_volume = cell_width * cell_width * cell_width;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(nb) * nb * nb);

  double value = 0.0;
  std::size_t inside_total = 0;
  for (int i = 0; i < ensemble.species.count(); ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    const auto& vs = ensemble.velocities[static_cast<std::size_t>(i)];
    for (const auto& v : vs) {
      int idx[3];
      bool inside = true;
      for (int c = 0; c < 3; ++c) {
        const double t = (v[c] + box_halfwidth) / cell_width;
        if (t < 0.0 || t >= static_cast<double>(nb)) {
          inside = false;
          break;
        }
        idx[c] = static_cast<int>(t);
      }
      if (!inside) continue;
      ++inside_total;
      ++counts[(static_cast<std::size_t>(idx[0]) * nb + idx[1]) * nb + idx[2]];
    }
    // cell density f = w * count / cellvol, so the cell contribution
    // f log(f) * cellvol collapses to w * count * log(w * count / cellvol).
    for (const auto count : counts) {
      if (count == 0) continue;
      const double mass = ensemble.weight * static_cast<double>(count);
      value += mass * std::log(mass / cell_volume);
    }
  }
  EntropyEstimate est;
  est.value = value;
  est.coverage = static_cast<double>(inside_total) /
                 static_cast<double>(ensemble.total_particles());
  return est;
}

double entropy(const ParticleEnsemble& ensemble, int bins_per_axis, double box_halfwidth) {
  return entropy_estimate(ensemble, bins_per_axis, box_halfwidth).value;
}

namespace {

std::string exp_column_name(const ExpMomentParams& params) {
  return "exp_a" + format_double(params.alpha) + "_s" + format_double(params.s);
}

}  // namespace

std::string moment_csv_header(const MomentRecord& sample) {
  std::string header = "t";
  for (std::size_t i = 0; i < sample.m0_per_species.size(); ++i) {
    header += ",m0_" + std::to_string(i);
  }
  header += ",px,py,pz,m2";
  for (const auto& [order, value] : sample.mk) {
    (void)value;
    header += ",mk_" + format_double(order);
  }
  if (sample.exp_moment && sample.exp_params) header += "," + exp_column_name(*sample.exp_params);
  if (sample.entropy) header += ",entropy";
  if (sample.entropy_std_error) header += ",entropy_se";
  return header;
}

std::string moment_csv_row(const MomentRecord& record) {
  std::string row = format_double(record.time);
  for (double m0 : record.m0_per_species) row += "," + format_double(m0);
  for (int c = 0; c < 3; ++c) row += "," + format_double(record.momentum[c]);
  row += "," + format_double(record.m2);
  for (const auto& [order, value] : record.mk) {
    (void)order;
    row += "," + format_double(value);
  }
  if (record.exp_moment) row += "," + format_double(*record.exp_moment);
  if (record.entropy) row += "," + format_double(*record.entropy);
  if (record.entropy_std_error) row += "," + format_double(*record.entropy_std_error);
  return row;
}

}  // namespace boltzmix
