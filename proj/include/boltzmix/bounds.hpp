#pragma once

#include "boltzmix/cross_section.hpp"
#include "boltzmix/moments.hpp"
#include "boltzmix/povzner.hpp"
#include "boltzmix/species.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace boltzmix {

/// Characterization data of the invariant set: bounds on the number density
/// (c0 <= m_0 <= C0), energy (c2 <= m_2 <= C2), the 2+eps moment and the k*
/// moment, with the structural requirement C0 < c2. User-supplied
/// configuration, validated on construction.
struct OmegaConstants {
  double c0 = 0.0;
  double C0 = 0.0;
  double c2 = 0.0;
  double C2 = 0.0;
  double C2eps = 0.0;
  double eps = 0.0;
  double C_kstar = 0.0;

  void validate() const;
};

/// Coefficients of the moment differential inequality
/// d/dt m_k <= -A_k m_k^(1 + gamma_bar/k) + B_k m_k.
struct ODIConstants {
  double k = 0.0;
  double A_k = 0.0;
  double B_k = 0.0;
  double c_lb = 0.0;
  double gamma_bar = 0.0;
};

/// Inputs (c, C, B) of the collision-frequency lower bound, assembled from
/// the Omega constants the way the moment estimates consume them:
///   c = min(c0 min_i m_i, (c2 - C0) sum m)
///   C = max(C0 max_i m_i, (C2 - c0) sum m)
///   B = C2eps (sum m)^(1 + eps/2) max_i m_i^(-eps/2).
struct ClbInputs {
  double c = 0.0;
  double C = 0.0;
  double B = 0.0;
  double eps = 0.0;
};

ClbInputs omega_to_clb_inputs(const SpeciesSet& species, const OmegaConstants& omega);

/// Explicit collision-frequency floor:
///   c_lb = (c/2) c_tilde
///          * (2^(2+eps) (max(C,B)/c) (1 + (2C/(c_tilde c))^(2/gamma_bar))^((2+eps)/2))
///            ^((gamma_min - 2)/eps)
///          * (1 + (max_j m_j / sum m) (2C/(c_tilde c))^2)^(-gamma_bar/2)
/// with c_tilde = min_ij min(1, 2^(1-gamma_ij)).
double compute_clb(const SpeciesSet& species, const CrossSection& cross_section, double c,
                   double C, double B, double eps);

struct LowerBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// True when the ensemble fails the zero-momentum hypothesis and the
  /// check was not performed.
  bool skipped = false;
};

/// Discrete test of sum_i m_i integral f_i(w) |v - w|^gamma_ij dw
/// >= c_lb <v>_j^gamma_bar.
LowerBoundCheck lower_bound_check(const ParticleEnsemble& ensemble, const Eigen::Vector3d& v,
                                  int j, double c_lb, const CrossSection& cross_section);

/// Assembles the ODI coefficients for order k >= k*:
///   A_k = min_ij(||b_ij||_L1 - C^ij_{k/2}) * c_lb / max_i m_i * (I C0)^(-gamma_bar/k)
///   B_k = 2 C2 max_ij((sum m / sqrt(m_i m_j))^gamma_ij C^ij_{k/2})
///         * sum_{l=1}^{floor((k+1)/2)} C(k, l)
/// Throws when k < k* or the Povzner margin is not positive for some pair.
ODIConstants compute_ak_bk(double k, const KStarSummary& kstar, const OmegaConstants& omega,
                           double c_lb, const SpeciesSet& species,
                           const CrossSection& cross_section);

/// The same assembly in its halved exponential-moment form:
///   K1 = min_ij(||b_ij||_L1 - C^ij_{k/2}) * c_lb / max_i m_i
///   K2 = (1/2) max_ij (sum m / sqrt(m_i m_j))^gamma_ij.
std::pair<double, double> compute_k1_k2(double k, const SpeciesSet& species,
                                        const CrossSection& cross_section, double c_lb);

/// Closed-form solution of y' = -a y^(1+c) + b y:
///   y(t) = (a/b (1 - e^(-cbt)) + y0^(-c) e^(-cbt))^(-1/c).
double bernoulli_solution(double a, double b, double c, double y0, double t);

/// Bound for generated moments: (A_k/B_k)^(-k/gamma_bar)
/// * (1 - exp(-gamma_bar B_k t / k))^(-k/gamma_bar), t > 0.
double generation_envelope(double k, const ODIConstants& consts, double t);

/// max{1, t^(-k/gamma_bar)} variant of the generation bound.
double generation_envelope_max_t(double k, const ODIConstants& consts, double t);

/// max((A_k/B_k)^(-k/gamma_bar), m_k(0)).
double propagation_envelope(const ODIConstants& consts, double mk0);

/// Cap C_k* = x* + L* for L(x) = -A x^(1 + gamma_bar/k*) + B x, where x* is
/// the positive root and L* the maximum of L.
double omega_cap_constant(double A, double B, double gamma_bar, double k_star);

struct OmegaCondition {
  std::string name;
  double measured = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};

struct OmegaReport {
  std::vector<OmegaCondition> conditions;
  bool all_pass() const;
};

/// Measures each membership condition of the invariant set against an
/// ensemble; the momentum condition uses a 5-sigma statistical tolerance.
OmegaReport check_omega(const ParticleEnsemble& ensemble, const OmegaConstants& omega,
                        double k_star);

}  // namespace boltzmix
