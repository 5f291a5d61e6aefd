#include "boltzmix/bounds.hpp"

#include "boltzmix/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boltzmix {

void OmegaConstants::validate() const {
  if (!(c0 > 0.0 && c0 <= C0)) throw std::invalid_argument("OmegaConstants: needs 0 < c0 <= C0");
  if (!(c2 > 0.0 && c2 <= C2)) throw std::invalid_argument("OmegaConstants: needs 0 < c2 <= C2");
  if (!(C0 < c2)) throw std::invalid_argument("OmegaConstants: needs C0 < c2");
  if (!(C2eps > 0.0 && eps > 0.0)) {
    throw std::invalid_argument("OmegaConstants: needs positive C2eps and eps");
  }
  if (!(C_kstar > 0.0)) throw std::invalid_argument("OmegaConstants: needs positive C_kstar");
}

ClbInputs omega_to_clb_inputs(const SpeciesSet& species, const OmegaConstants& omega) {
  omega.validate();
  ClbInputs in;
  const double msum = species.total_mass();
  in.c = std::min(omega.c0 * species.min_mass(), (omega.c2 - omega.C0) * msum);
  in.C = std::max(omega.C0 * species.max_mass(), (omega.C2 - omega.c0) * msum);
  in.B = omega.C2eps * std::pow(msum, 1.0 + omega.eps / 2.0) *
         std::pow(species.max_mass(), -omega.eps / 2.0);
  in.eps = omega.eps;
  return in;
}

double compute_clb(const SpeciesSet& species, const CrossSection& cross_section, double c,
                   double C, double B, double eps) {
  if (!(c > 0.0 && c <= C)) throw std::invalid_argument("compute_clb: requires 0 < c <= C");
  if (!(B > 0.0 && eps > 0.0)) throw std::invalid_argument("compute_clb: requires B, eps > 0");

  double c_tilde = 1.0;
  for (int i = 0; i < cross_section.count(); ++i) {
    for (int j = 0; j < cross_section.count(); ++j) {
      c_tilde = std::min(c_tilde, std::min(1.0, std::pow(2.0, 1.0 - cross_section.gamma(i, j))));
    }
  }
  const double gamma_bar = cross_section.gamma_bar();
  const double gamma_min = cross_section.gamma_min();
  const double ball = 2.0 * C / (c_tilde * c);
  const double radius_factor =
      std::pow(2.0, 2.0 + eps) * (std::max(C, B) / c) *
      std::pow(1.0 + std::pow(ball, 2.0 / gamma_bar), (2.0 + eps) / 2.0);
  return 0.5 * c * c_tilde * std::pow(radius_factor, (gamma_min - 2.0) / eps) *
         std::pow(1.0 + species.max_mass() / species.total_mass() * ball * ball,
                  -gamma_bar / 2.0);
}

LowerBoundCheck lower_bound_check(const ParticleEnsemble& ensemble, const Eigen::Vector3d& v,
                                  int j, double c_lb, const CrossSection& cross_section) {
  LowerBoundCheck chk;
  const Eigen::Vector3d momentum = mixture_momentum(ensemble);
  if (momentum.norm() > 5.0 * momentum_std_error(ensemble)) {
    chk.skipped = true;
    return chk;
  }
  double lhs = std::numeric_limits<double>::infinity();
  // The bound holds for each fixed i-row; test the weakest one.
  for (int i = 0; i < ensemble.species.count(); ++i) {
    const double gamma = cross_section.gamma(i, j);
    double row = 0.0;
    for (int l = 0; l < ensemble.species.count(); ++l) {
      const auto& vs = ensemble.velocities[static_cast<std::size_t>(l)];
      const double ml = ensemble.species.mass(l);
      row += ml * ensemble.weight * pairwise_sum(vs.size(), [&](std::size_t p) {
               return std::pow((v - vs[p]).norm(), gamma);
             });
    }
    lhs = std::min(lhs, row);
  }
  chk.lhs = lhs;
  chk.rhs = c_lb * std::pow(bracket_squared(v, j, ensemble.species),
                            cross_section.gamma_bar() / 2.0);
  chk.holds = chk.lhs >= chk.rhs * (1.0 - 1e-9);
  return chk;
}

ODIConstants compute_ak_bk(double k, const KStarSummary& kstar, const OmegaConstants& omega,
                           double c_lb, const SpeciesSet& species,
                           const CrossSection& cross_section) {
  omega.validate();
  if (!(c_lb > 0.0)) throw std::invalid_argument("compute_ak_bk: requires c_lb > 0");
  if (k < kstar.k_star) {
    throw std::invalid_argument("compute_ak_bk: k = " + format_double(k) +
                                " is below k* = " + format_double(kstar.k_star) +
                                "; A_k would not be positive");
  }
  const int count = species.count();
  const double msum = species.total_mass();
  double min_margin = std::numeric_limits<double>::infinity();
  double max_gain = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const AngularKernel& kernel = cross_section.kernel(i, j);
      const double c_pov = povzner_linf(k / 2.0, mass_fraction(i, j, species),
                                        kernel.sup_norm());
      min_margin = std::min(min_margin, kernel.l1_norm() - c_pov);
      const double mass_amp = std::pow(msum / std::sqrt(species.mass(i) * species.mass(j)),
                                       cross_section.gamma(i, j));
      max_gain = std::max(max_gain, mass_amp * c_pov);
    }
  }
  if (!(min_margin > 0.0)) {
    throw std::invalid_argument("compute_ak_bk: Povzner margin not positive at k = " +
                                format_double(k));
  }
  double binom_sum = 0.0;
  const int ell_max = static_cast<int>(std::floor((k + 1.0) / 2.0));
  for (int ell = 1; ell <= ell_max; ++ell) binom_sum += generalized_binomial(k, ell);

  ODIConstants consts;
  consts.k = k;
  consts.c_lb = c_lb;
  consts.gamma_bar = cross_section.gamma_bar();
  consts.A_k = min_margin * c_lb / species.max_mass() *
               std::pow(static_cast<double>(count) * omega.C0, -consts.gamma_bar / k);
  consts.B_k = 2.0 * omega.C2 * max_gain * binom_sum;
  return consts;
}

std::pair<double, double> compute_k1_k2(double k, const SpeciesSet& species,
                                        const CrossSection& cross_section, double c_lb) {
  double min_margin = std::numeric_limits<double>::infinity();
  double max_mass_amp = 0.0;
  const double msum = species.total_mass();
  for (int i = 0; i < species.count(); ++i) {
    for (int j = 0; j < species.count(); ++j) {
      const AngularKernel& kernel = cross_section.kernel(i, j);
      min_margin = std::min(min_margin,
                            kernel.l1_norm() - povzner_linf(k / 2.0, mass_fraction(i, j, species),
                                                            kernel.sup_norm()));
      max_mass_amp = std::max(max_mass_amp,
                              std::pow(msum / std::sqrt(species.mass(i) * species.mass(j)),
                                       cross_section.gamma(i, j)));
    }
  }
  return {min_margin * c_lb / species.max_mass(), 0.5 * max_mass_amp};
}

double bernoulli_solution(double a, double b, double c, double y0, double t) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0 && y0 > 0.0 && t >= 0.0)) {
    throw std::invalid_argument("bernoulli_solution: invalid arguments");
  }
  if (t == 0.0) return y0;
  const double decay = std::exp(-c * b * t);
  return std::pow(a / b * (1.0 - decay) + std::pow(y0, -c) * decay, -1.0 / c);
}

double generation_envelope(double k, const ODIConstants& consts, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("generation_envelope: requires t > 0");
  const double exponent = -k / consts.gamma_bar;
  const double limit = std::pow(consts.A_k / consts.B_k, exponent);
  return limit * std::pow(1.0 - std::exp(-consts.gamma_bar * consts.B_k * t / k), exponent);
}

double generation_envelope_max_t(double k, const ODIConstants& consts, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("generation_envelope_max_t: requires t > 0");
  const double c = consts.gamma_bar / k;
  const double b = consts.B_k;
  const double limit = std::pow(consts.A_k / consts.B_k, -1.0 / c);
  const double short_time = std::pow(c * b, -1.0 / c) * std::exp(b / 2.0);
  const double long_time = std::pow(1.0 - std::exp(-c * b), -1.0 / c);
  return limit * std::max(short_time, long_time) * std::max(1.0, std::pow(t, -1.0 / c));
}

double propagation_envelope(const ODIConstants& consts, double mk0) {
  if (!(mk0 >= 0.0)) throw std::invalid_argument("propagation_envelope: requires mk0 >= 0");
  return std::max(std::pow(consts.A_k / consts.B_k, -consts.k / consts.gamma_bar), mk0);
}

double omega_cap_constant(double A, double B, double gamma_bar, double k_star) {
  if (!(A > 0.0 && B > 0.0 && gamma_bar > 0.0 && k_star > 0.0)) {
    throw std::invalid_argument("omega_cap_constant: all arguments must be positive");
  }
  const double c = gamma_bar / k_star;
  const double root = std::pow(B / A, 1.0 / c);
  const double x_max = std::pow(B / (A * (1.0 + c)), 1.0 / c);
  const double peak = -A * std::pow(x_max, 1.0 + c) + B * x_max;
  return root + peak;
}

bool OmegaReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const OmegaCondition& c) { return c.pass; });
}

OmegaReport check_omega(const ParticleEnsemble& ensemble, const OmegaConstants& omega,
                        double k_star) {
  omega.validate();
  const double inf = std::numeric_limits<double>::infinity();
  OmegaReport report;
  const double m0 = poly_moment(ensemble, 0.0);
  report.conditions.push_back({"m0", m0, omega.c0, omega.C0, omega.c0 <= m0 && m0 <= omega.C0});
  const double m2 = poly_moment(ensemble, 2.0);
  report.conditions.push_back({"m2", m2, omega.c2, omega.C2, omega.c2 <= m2 && m2 <= omega.C2});
  const double m2eps = poly_moment(ensemble, 2.0 + omega.eps);
  report.conditions.push_back({"m2eps", m2eps, 0.0, omega.C2eps, m2eps <= omega.C2eps});
  const double mkstar = poly_moment(ensemble, k_star);
  report.conditions.push_back({"mkstar", mkstar, 0.0, omega.C_kstar, mkstar <= omega.C_kstar});
  const double momentum = mixture_momentum(ensemble).norm();
  const double tol = 5.0 * momentum_std_error(ensemble);
  report.conditions.push_back({"momentum", momentum, -inf, tol, momentum <= tol});
  return report;
}

}  // namespace boltzmix
