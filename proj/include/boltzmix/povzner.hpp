#pragma once

#include "boltzmix/collision.hpp"
#include "boltzmix/cross_section.hpp"
#include "boltzmix/species.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace boltzmix {

class Rng;

/// Normalized angular-averaged gain constant C_inf_n(r) for a bounded
/// angular kernel. With r_max = max(r, 1-r) and r_min = min(r, 1-r):
///
///   n in (1, 2]:  2 r_max^n
///   n > 2:        2 r_max^n
///                 - 2 (r_max^2 / r_min^2) (1 - r_min)^n
///                 - (r_max^2 / r_min) n (1 - r_min)^(n-1)
///                 + 2 (r_max^2 / r_min^3) (1 - (1 - r_min)^(n+1)) / (n+1)
///
/// Symmetric under r <-> 1-r; tends to zero as n grows (the surviving term
/// decays like 1/n). Throws unless n > 1 and 0 < r < 1.
double povzner_renormalized(double n, double r);

/// Dimensional constant for bounded kernels: 4 pi ||b||_Linf C_inf_n(r).
double povzner_linf(double n, double r, double b_sup);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo sphere average of (<v'>_i^k + <v'_*>_j^k) b(sigma.u_hat):
/// uniform sigma with importance weight 4 pi b(tau). For k = 2 the integrand
/// sum is the conserved pair energy, so the estimate is ||b||_L1 * E up to
/// the weight's variance (exactly, with zero variance, for constant b).
McEstimate angular_average_mc(double k, const CollisionInput& input,
                              const AngularKernel& kernel, const SpeciesSet& species,
                              std::size_t samples, Rng& rng);

/// Smallest grid point k in {2 + step, 2 + 2 step, ...} such that
/// 4 pi ||b||_Linf C_inf_{k'/2}(r) < ||b||_L1 holds at every grid point
/// k' in [k, horizon_factor * k]. The look-ahead guards against the
/// constant's non-monotonic hump in n. Throws if no such k exists below the
/// hard cap of 1e4.
double find_kstar_pair(double r, const AngularKernel& kernel, double grid_step);

inline constexpr double kKStarHardCap = 1e4;
inline constexpr double kKStarHorizonFactor = 100.0;

struct KStarSummary {
  Eigen::MatrixXd k_star_pairs;
  double k_bar = 0.0;
  double gamma_bar = 0.0;
  double k_star = 0.0;
  double grid_step = 0.0;
  double horizon_factor = kKStarHorizonFactor;
};

/// Per-pair thresholds plus the global k* = max(k_bar, 2 + 2 gamma_bar).
KStarSummary kstar_global(const SpeciesSet& species, const CrossSection& cross_section,
                          double grid_step);

struct PovznerScanRow {
  double r = 0.0;
  double n = 0.0;
  double c_inf = 0.0;
};

std::vector<PovznerScanRow> povzner_scan(const std::vector<double>& r_grid,
                                         const std::vector<double>& n_grid);

}  // namespace boltzmix
