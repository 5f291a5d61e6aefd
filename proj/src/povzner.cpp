#include "boltzmix/povzner.hpp"

#include "boltzmix/format.hpp"
#include "boltzmix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boltzmix {

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

double povzner_renormalized(double n, double r) {
  if (!(n > 1.0)) throw std::invalid_argument("povzner_renormalized: requires n > 1");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("povzner_renormalized: requires 0 < r < 1");
  const double r_max = std::max(r, 1.0 - r);
  const double r_min = std::min(r, 1.0 - r);
  if (n <= 2.0) return 2.0 * std::pow(r_max, n);
  const double decay = 1.0 - r_min;
  const double ratio2 = r_max * r_max / (r_min * r_min);
  return 2.0 * std::pow(r_max, n) - 2.0 * ratio2 * std::pow(decay, n) -
         r_max * r_max / r_min * n * std::pow(decay, n - 1.0) +
         2.0 * r_max * r_max / (r_min * r_min * r_min) *
             (1.0 - std::pow(decay, n + 1.0)) / (n + 1.0);
}

double povzner_linf(double n, double r, double b_sup) {
  if (!(b_sup >= 0.0)) throw std::invalid_argument("povzner_linf: requires b_sup >= 0");
  return kFourPi * b_sup * povzner_renormalized(n, r);
}

McEstimate angular_average_mc(double k, const CollisionInput& input,
                              const AngularKernel& kernel, const SpeciesSet& species,
                              std::size_t samples, Rng& rng) {
  if (samples < 1000) throw std::invalid_argument("angular_average_mc: needs samples >= 1000");
  if (!(kernel.l1_norm() > 0.0)) throw std::domain_error("angular_average_mc: degenerate kernel");

  const auto [V, u] = center_and_relative(input, species);
  const double speed = u.norm();
  const Eigen::Vector3d u_hat = speed > 0.0 ? Eigen::Vector3d(u / speed)
                                            : Eigen::Vector3d::UnitZ();
  const double mi = species.mass(input.i);
  const double mj = species.mass(input.j);
  const double r = mi / (mi + mj);
  const double one_minus_r = mj / (mi + mj);
  const double half_k = 0.5 * k;

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::Vector3d sigma = rng.isotropic_direction();
    const Eigen::Vector3d v_prime = V + one_minus_r * speed * sigma;
    const Eigen::Vector3d v_star_prime = V - r * speed * sigma;
    const double weight = kFourPi * kernel.value(sigma.dot(u_hat));
    const double x = weight * (std::pow(bracket_squared(v_prime, input.i, species), half_k) +
                               std::pow(bracket_squared(v_star_prime, input.j, species), half_k));
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

double find_kstar_pair(double r, const AngularKernel& kernel, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("find_kstar_pair: grid_step must be positive");
  if (!(kernel.sup_norm() > 0.0) || !std::isfinite(kernel.sup_norm())) {
    throw std::domain_error("find_kstar_pair: kernel needs a finite positive sup norm");
  }
  const double target = kernel.l1_norm();
  const auto grid_k = [&](std::size_t m) { return 2.0 + grid_step * static_cast<double>(m + 1); };

  std::vector<char> cache;  // 1 if the margin holds at grid index m
  const auto below = [&](std::size_t m) {
    while (cache.size() <= m) {
      const double n = grid_k(cache.size()) / 2.0;
      cache.push_back(povzner_linf(n, r, kernel.sup_norm()) < target ? 1 : 0);
    }
    return cache[m] != 0;
  };

  // A candidate k qualifies only if the whole look-ahead window
  // [k, horizon_factor * k] stays below the target. On a violation at index
  // mm, every candidate up to mm fails too (mm lies inside all their
  // windows), so the sweep jumps past it.
  std::size_t m = 0;
  while (grid_k(m) < kKStarHardCap) {
    const double k = grid_k(m);
    const double horizon = kKStarHorizonFactor * k;
    std::size_t violation = static_cast<std::size_t>(-1);
    for (std::size_t mm = m; grid_k(mm) <= horizon; ++mm) {
      if (!below(mm)) {
        violation = mm;
        break;
      }
    }
    if (violation == static_cast<std::size_t>(-1)) return k;
    m = violation + 1;
  }
  throw std::runtime_error("find_kstar_pair: no threshold below hard cap " +
                           format_double(kKStarHardCap) + " (r = " + format_double(r) + ")");
}

KStarSummary kstar_global(const SpeciesSet& species, const CrossSection& cross_section,
                          double grid_step) {
  const int n = species.count();
  KStarSummary summary;
  summary.grid_step = grid_step;
  summary.gamma_bar = cross_section.gamma_bar();
  summary.k_star_pairs.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double k = find_kstar_pair(mass_fraction(i, j, species), cross_section.kernel(i, j),
                                       grid_step);
      summary.k_star_pairs(i, j) = k;
      summary.k_star_pairs(j, i) = k;
    }
  }
  summary.k_bar = summary.k_star_pairs.maxCoeff();
  summary.k_star = std::max(summary.k_bar, 2.0 + 2.0 * summary.gamma_bar);
  return summary;
}

std::vector<PovznerScanRow> povzner_scan(const std::vector<double>& r_grid,
                                         const std::vector<double>& n_grid) {
  if (r_grid.empty() || n_grid.empty()) {
    throw std::invalid_argument("povzner_scan: grids must be non-empty");
  }
  std::vector<PovznerScanRow> rows;
  rows.reserve(r_grid.size() * n_grid.size());
  for (double r : r_grid) {
    for (double n : n_grid) {
      rows.push_back({r, n, povzner_renormalized(n, r)});
    }
  }
  return rows;
}

}  // namespace boltzmix
