#include "boltzmix/povzner.hpp"
#include "boltzmix/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace boltzmix;

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
constexpr double kInvFourPi = 1.0 / (4.0 * kPi);

// Independent transcription of the closed form, kept term by term.
double closed_form_oracle(double n, double r) {
  const double rmax = std::max(r, 1.0 - r);
  const double rmin = std::min(r, 1.0 - r);
  if (n <= 2.0) return 2.0 * std::pow(rmax, n);
  const double term1 = 2.0 * std::pow(rmax, n);
  const double term2 = -2.0 * (rmax * rmax) / (rmin * rmin) * std::pow(1.0 - rmin, n);
  const double term3 = -(rmax * rmax) / rmin * n * std::pow(1.0 - rmin, n - 1.0);
  const double term4 = 2.0 * (rmax * rmax) / (rmin * rmin * rmin) *
                       (1.0 / (n + 1.0) - std::pow(1.0 - rmin, n + 1.0) / (n + 1.0));
  return term1 + term2 + term3 + term4;
}

}  // namespace

TEST_CASE("closed form at the equal-mass point") {
  CHECK(povzner_renormalized(2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(povzner_renormalized(3.0, 0.5) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(povzner_renormalized(1.5, 0.5) == doctest::Approx(2.0 * std::pow(0.5, 1.5)).epsilon(1e-15));

  // r = 1/2 specialization: 4/(n+1) - (1/2)^n (n + 2/(n+1)).
  for (double n : {2.5, 3.0, 4.0, 7.5, 20.0, 100.0}) {
    const double special = 4.0 / (n + 1.0) - std::pow(0.5, n) * (n + 2.0 / (n + 1.0));
    CHECK(povzner_renormalized(n, 0.5) == doctest::Approx(special).epsilon(1e-13));
  }
}

TEST_CASE("closed form against the term-by-term oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const double n = rng.uniform(1.0 + 1e-6, 60.0);
    const double r = rng.uniform(0.02, 0.98);
    CHECK(povzner_renormalized(n, r) == doctest::Approx(closed_form_oracle(n, r)).epsilon(1e-13));
  }
  CHECK(povzner_renormalized(3.0, 0.9) == doctest::Approx(2.9565).epsilon(1e-4));
}

TEST_CASE("symmetry in r and its complement") {
  // Dyadic r has an exact complement, so the two evaluations agree bitwise.
  for (double r : {0.5, 0.25, 0.75, 0.125, 0.875, 0.0625, 0.9375, 0.3125, 0.6875}) {
    for (double n : {1.5, 2.0, 3.0, 6.5, 41.0}) {
      CHECK(povzner_renormalized(n, r) == povzner_renormalized(n, 1.0 - r));
    }
  }
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const double r = rng.uniform(0.01, 0.99);
    const double n = rng.uniform(1.1, 80.0);
    CHECK(povzner_renormalized(n, r) ==
          doctest::Approx(povzner_renormalized(n, 1.0 - r)).epsilon(1e-12));
  }
}

TEST_CASE("decay to zero at large order") {
  // The surviving term decays like 1/n, so the constant passes below any
  // threshold once n is large enough.
  for (double r : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9}) {
    CHECK(povzner_renormalized(1e10, r) < 1e-6);
    CHECK(povzner_renormalized(1e13, r) < 1e-9);
    double previous = povzner_renormalized(1e4, r);
    for (double n : {1e5, 1e6, 1e7}) {
      const double value = povzner_renormalized(n, r);
      CHECK(value < previous);
      previous = value;
    }
  }
}

TEST_CASE("equal-mass column is monotone decreasing beyond 3") {
  double previous = povzner_renormalized(3.0, 0.5);
  for (double n = 3.5; n <= 300.0; n += 0.5) {
    const double value = povzner_renormalized(n, 0.5);
    CHECK(value <= previous);
    previous = value;
  }
}

TEST_CASE("sub-level set in r is an interval around one half") {
  // Fixed n = 10: scanning r, the set {C < 1} must be contiguous.
  std::vector<int> inside;
  for (double r = 0.01; r < 0.995; r += 0.005) {
    inside.push_back(povzner_renormalized(10.0, r) < 1.0 ? 1 : 0);
  }
  int transitions = 0;
  for (std::size_t m = 1; m < inside.size(); ++m) {
    if (inside[m] != inside[m - 1]) ++transitions;
  }
  CHECK(transitions == 2);
  CHECK(inside[inside.size() / 2] == 1);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(povzner_renormalized(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(povzner_renormalized(3.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(povzner_renormalized(3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(povzner_linf(3.0, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("dimensional constant scaling") {
  CHECK(povzner_linf(3.0, 0.5, 0.0) == 0.0);
  CHECK(povzner_linf(3.0, 0.5, kInvFourPi) == doctest::Approx(0.5625).epsilon(1e-13));
  CHECK(povzner_linf(2.0, 0.5, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("angular average at k = 2 is the conserved pair energy") {
  const SpeciesSet species({1.0, 3.0});
  const AngularKernel kernel = AngularKernel::constant(kInvFourPi);
  Rng rng(100);
  for (int trial = 0; trial < 10; ++trial) {
    const CollisionInput in{rng.normal3(1.0), rng.normal3(1.0), 0, 1};
    const auto t = energy_identity(in, species);
    const auto mc = angular_average_mc(2.0, in, kernel, species, 5000, rng);
    // Constant kernel: the weighted integrand is identically ||b|| * E.
    CHECK(mc.std_error < 1e-12 * t.E);
    CHECK(mc.estimate == doctest::Approx(kernel.l1_norm() * t.E).epsilon(1e-12));
  }
}

TEST_CASE("angular average of a degenerate pair has zero variance") {
  const SpeciesSet species({1.0, 3.0});
  const AngularKernel kernel = AngularKernel::constant(kInvFourPi);
  Rng rng(4);
  const Eigen::Vector3d w{0.5, -0.25, 1.0};
  const auto mc = angular_average_mc(6.0, {w, w, 0, 1}, kernel, species, 2000, rng);
  const double expected = kernel.l1_norm() * (std::pow(bracket_squared(w, 0, species), 3.0) +
                                              std::pow(bracket_squared(w, 1, species), 3.0));
  CHECK(mc.std_error == 0.0);
  CHECK(mc.estimate == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("angular average stays below the bounded-kernel constant") {
  const SpeciesSet species({1.0, 3.0});
  const AngularKernel kernel = AngularKernel::constant(kInvFourPi);
  const double r = mass_fraction(0, 1, species);
  Rng rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const CollisionInput in{rng.normal3(1.2), rng.normal3(1.2), 0, 1};
    const auto t = energy_identity(in, species);
    for (double k : {4.0, 6.0, 8.0}) {
      const auto mc = angular_average_mc(k, in, kernel, species, 20000, rng);
      const double bound = povzner_linf(k / 2.0, r, kInvFourPi) * std::pow(t.E, k / 2.0);
      CHECK(mc.estimate <= bound + 3.0 * mc.std_error);
    }
  }
}

TEST_CASE("angular average with a tabulated kernel matches the energy identity") {
  const SpeciesSet species({2.0, 0.5});
  const AngularKernel kernel = AngularKernel::tabulated({-1.0, 0.0, 1.0}, {0.1, 0.4, 0.9});
  Rng rng(66);
  const CollisionInput in{rng.normal3(1.0), rng.normal3(1.0), 0, 1};
  const auto t = energy_identity(in, species);
  const auto mc = angular_average_mc(2.0, in, kernel, species, 200000, rng);
  CHECK(std::abs(mc.estimate - kernel.l1_norm() * t.E) <= 3.0 * mc.std_error);
  CHECK(mc.std_error > 0.0);
}

TEST_CASE("threshold search on the equal-mass pair") {
  const AngularKernel kernel = AngularKernel::constant(kInvFourPi);
  const double k_half = find_kstar_pair(0.5, kernel, 0.5);
  CHECK(k_half <= 4.0);
  CHECK(find_kstar_pair(0.9, kernel, 0.5) > 6.0);

  // Threshold grows with the deviation from the equal-mass point.
  double previous = k_half;
  for (double r : {0.6, 0.7, 0.8, 0.9}) {
    const double k = find_kstar_pair(r, kernel, 0.5);
    CHECK(k >= previous);
    previous = k;
  }

  // The normalization cancels for constant kernels.
  CHECK(find_kstar_pair(0.7, AngularKernel::constant(3.0), 0.5) ==
        find_kstar_pair(0.7, kernel, 0.5));
}

TEST_CASE("global threshold summary") {
  const AngularKernel kernel = AngularKernel::constant(kInvFourPi);

  {
    const SpeciesSet single({1.0});
    const CrossSection cs(Eigen::MatrixXd::Ones(1, 1), {kernel});
    const auto summary = kstar_global(single, cs, 0.5);
    CHECK(summary.k_bar == 2.5);
    CHECK(summary.k_star == 4.0);  // max(k_bar, 2 + 2 gamma_bar)
    CHECK(summary.gamma_bar == 1.0);
  }

  {
    const SpeciesSet equal({2.0, 2.0});
    const CrossSection cs(Eigen::MatrixXd::Ones(2, 2), std::vector<AngularKernel>(4, kernel));
    const auto summary = kstar_global(equal, cs, 0.5);
    CHECK(summary.k_star_pairs(0, 0) == summary.k_star_pairs(0, 1));
    CHECK(summary.k_star_pairs(0, 1) == summary.k_star_pairs(1, 1));
  }

  {
    const SpeciesSet skewed({1.0, 9.0});
    const CrossSection cs(Eigen::MatrixXd::Ones(2, 2), std::vector<AngularKernel>(4, kernel));
    const auto summary = kstar_global(skewed, cs, 0.5);
    CHECK(summary.k_star_pairs(0, 1) > summary.k_star_pairs(0, 0));
    CHECK(summary.k_star_pairs(0, 1) > summary.k_star_pairs(1, 1));
    CHECK(summary.k_star == summary.k_star_pairs(0, 1));
    CHECK(summary.k_star >= 2.0 + 2.0 * summary.gamma_bar);
  }
}

TEST_CASE("scan table layout") {
  const auto rows = povzner_scan({0.4, 0.5}, {2.0, 3.0, 4.0});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].r == 0.4);
  CHECK(rows[0].n == 2.0);
  CHECK(rows[4].n == 3.0);
  CHECK(rows[4].c_inf == doctest::Approx(0.5625).epsilon(1e-13));
  CHECK_THROWS_AS(povzner_scan({}, {2.0}), std::invalid_argument);
}
