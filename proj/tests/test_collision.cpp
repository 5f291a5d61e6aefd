#include "boltzmix/collision.hpp"
#include "boltzmix/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace boltzmix;

TEST_CASE("center of mass and relative velocity") {
  const SpeciesSet equal({1.0, 1.0});
  const SpeciesSet mixed({1.0, 3.0});

  const Eigen::Vector3d w{0.4, -2.0, 1.0};
  auto [V0, u0] = center_and_relative({w, w, 0, 1}, mixed);
  CHECK(u0.norm() == 0.0);
  CHECK((V0 - w).norm() < 1e-15);

  auto [V1, u1] = center_and_relative({{1, 0, 0}, {-1, 0, 0}, 0, 1}, equal);
  CHECK(V1.norm() == 0.0);
  CHECK((u1 - Eigen::Vector3d{2, 0, 0}).norm() == 0.0);

  auto [V2, u2] = center_and_relative({{4, 0, 0}, {0, 0, 0}, 0, 1}, mixed);
  CHECK((V2 - Eigen::Vector3d{1, 0, 0}).norm() < 1e-15);
  CHECK((u2 - Eigen::Vector3d{4, 0, 0}).norm() == 0.0);
}

TEST_CASE("collide examples") {
  const SpeciesSet equal({1.0, 1.0});
  const SpeciesSet mixed({1.0, 3.0});

  // sigma along u_hat reproduces the incoming pair.
  {
    const CollisionInput in{{1.5, 0.2, -0.3}, {-0.5, 1.0, 0.0}, 0, 1};
    const Eigen::Vector3d u = in.v - in.v_star;
    const auto out = collide(in, u / u.norm(), mixed);
    CHECK((out.v_prime - in.v).norm() < 1e-14 * in.v.norm());
    CHECK((out.v_star_prime - in.v_star).norm() < 1e-14 * in.v_star.norm());
  }

  // Equal-mass head-on pair scattered sideways.
  {
    const auto out = collide({{1, 0, 0}, {-1, 0, 0}, 0, 1}, {0, 1, 0}, equal);
    CHECK((out.v_prime - Eigen::Vector3d{0, 1, 0}).norm() == 0.0);
    CHECK((out.v_star_prime - Eigen::Vector3d{0, -1, 0}).norm() == 0.0);
  }

  // Hand-evaluated unequal-mass case: V = (1,0,0), |u| = 4, r = 1/4.
  {
    const auto out = collide({{4, 0, 0}, {0, 0, 0}, 0, 1}, {0, 0, 1}, mixed);
    CHECK((out.v_prime - Eigen::Vector3d{1, 0, 3}).norm() < 1e-15);
    CHECK((out.v_star_prime - Eigen::Vector3d{1, 0, -1}).norm() < 1e-15);
  }

  // Degenerate u = 0: both outputs collapse to the center of mass.
  {
    const Eigen::Vector3d w{0.7, 0.1, -0.2};
    const auto out = collide({w, w, 0, 1}, {0, 0, 1}, mixed);
    CHECK((out.v_prime - w).norm() < 1e-15);
    CHECK((out.v_star_prime - w).norm() < 1e-15);
  }

  CHECK_THROWS_AS(collide({{1, 0, 0}, {0, 0, 0}, 0, 1}, {0, 0, 1.1}, mixed),
                  std::invalid_argument);
}

TEST_CASE("conservation residuals") {
  const SpeciesSet mixed({1.0, 3.0});
  const CollisionInput in{{0.3, -1.0, 2.0}, {1.0, 0.5, -0.5}, 0, 1};
  auto out = collide(in, Eigen::Vector3d{0, 0, 1}, mixed);

  auto [dp, de] = conservation_residuals(in, out, mixed);
  const double scale = 3.0 * (in.v.norm() + in.v_star.norm());
  CHECK(dp / scale < 1e-12);
  CHECK(de / (3.0 * (in.v.squaredNorm() + in.v_star.squaredNorm())) < 1e-12);

  // A constructed violation shows up at its size.
  out.v_prime[0] += 1e-3;
  auto [dp2, de2] = conservation_residuals(in, out, mixed);
  CHECK(dp2 == doctest::Approx(1e-3 * mixed.mass(0)).epsilon(1e-6));

  // u = 0 pairs conserve bit-exactly.
  const Eigen::Vector3d w{0.7, 0.1, -0.2};
  const CollisionInput still{w, w, 0, 1};
  const auto out0 = collide(still, Eigen::Vector3d{1, 0, 0}, mixed);
  auto [dp0, de0] = conservation_residuals(still, out0, mixed);
  CHECK(dp0 == 0.0);
  CHECK(de0 == 0.0);
}

TEST_CASE("energy identity examples") {
  const SpeciesSet mixed({1.0, 3.0});

  {
    const auto t = energy_identity({{0, 0, 0}, {0, 0, 0}, 0, 1}, mixed);
    CHECK(t.E == 2.0);
    CHECK(t.lambda == 0.0);
    CHECK(t.p == 1.0);
    CHECK(t.q == 1.0);
    CHECK(t.s == 0.5);
    CHECK(t.v_hat().norm() == 0.0);
  }

  // Equal masses sit at the middle of the convex split: p = q = E/2.
  {
    const SpeciesSet equal({1.0, 1.0});
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const auto t = energy_identity({rng.normal3(1.0), rng.normal3(1.0), 0, 1}, equal);
      CHECK(t.p == doctest::Approx(t.E / 2.0).epsilon(1e-14));
      CHECK(t.q == doctest::Approx(t.E / 2.0).epsilon(1e-14));
    }
  }

  {
    const auto t = energy_identity({{1, 0, 0}, {0, 0, 0}, 0, 1}, mixed);
    CHECK(t.E == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(t.r == 0.25);
  }
}

TEST_CASE("energy identity fuzz: recomposition, key-point, convexity") {
  Rng rng(2024);
  double worst_recomposition = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const SpeciesSet species({std::pow(10.0, rng.uniform(-1.0, 1.0)),
                              std::pow(10.0, rng.uniform(-1.0, 1.0))});
    const CollisionInput in{rng.normal3(1.5), rng.normal3(1.5), 0, 1};
    const Eigen::Vector3d sigma = rng.isotropic_direction();
    const auto out = collide(in, sigma, species);
    const auto t = energy_identity(in, species);

    // p + q = E, both within the convex bounds.
    CHECK(t.p + t.q == doctest::Approx(t.E).epsilon(1e-13));
    const double r_hi = std::max(t.r, 1.0 - t.r);
    const double r_lo = std::min(t.r, 1.0 - t.r);
    CHECK(t.p <= r_hi * t.E * (1.0 + 1e-13));
    CHECK(t.q <= r_hi * t.E * (1.0 + 1e-13));
    CHECK(t.p >= r_lo * t.E * (1.0 - 1e-13));
    CHECK(t.q >= r_lo * t.E * (1.0 - 1e-13));

    // Key-point inequalities and the convex split range.
    CHECK(t.p + t.lambda <= t.E * (1.0 + 1e-13));
    CHECK(t.q + t.lambda <= t.E * (1.0 + 1e-13));
    CHECK(t.s * t.E >= 1.0 - 1e-13);
    CHECK((1.0 - t.s) * t.E >= 1.0 - 1e-13);

    // Recomposition of the post-collision brackets.
    const double mu = sigma.dot(t.v_hat());
    const double lhs_i = bracket_squared(out.v_prime, 0, species);
    const double lhs_j = bracket_squared(out.v_star_prime, 1, species);
    worst_recomposition = std::max(worst_recomposition,
                                   std::abs(lhs_i - (t.p + t.lambda * mu)) / t.E);
    worst_recomposition = std::max(worst_recomposition,
                                   std::abs(lhs_j - (t.q - t.lambda * mu)) / t.E);

    // |u'| = |u|.
    const double u_in = (in.v - in.v_star).norm();
    const double u_out = (out.v_prime - out.v_star_prime).norm();
    if (u_in > 0.0) CHECK(std::abs(u_out - u_in) / u_in < 1e-12);
  }
  CHECK(worst_recomposition < 1e-10);
}

TEST_CASE("equal-mass collision matches the single-gas formula") {
  Rng rng(7);
  for (double mass : {1.0, 3.7, 0.25}) {
    const SpeciesSet species({mass, mass});
    for (int trial = 0; trial < 1000; ++trial) {
      const CollisionInput in{rng.normal3(1.0), rng.normal3(1.0), 0, 1};
      const Eigen::Vector3d sigma = rng.isotropic_direction();
      const auto out = collide(in, sigma, species);
      const Eigen::Vector3d mid = 0.5 * (in.v + in.v_star);
      const double speed = (in.v - in.v_star).norm();
      const Eigen::Vector3d expected_prime = mid + 0.5 * speed * sigma;
      const Eigen::Vector3d expected_star = mid - 0.5 * speed * sigma;
      const double scale = 1.0 + mid.norm() + speed;
      CHECK((out.v_prime - expected_prime).norm() <= 4e-15 * scale);
      CHECK((out.v_star_prime - expected_star).norm() <= 4e-15 * scale);
    }
  }
}

TEST_CASE("center of mass displacement identity") {
  // V = (v + v_*)/2 + (m_i - m_j)/(2(m_i + m_j)) u.
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const SpeciesSet species({rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0)});
    const CollisionInput in{rng.normal3(1.0), rng.normal3(1.0), 0, 1};
    const auto [V, u] = center_and_relative(in, species);
    const double mi = species.mass(0);
    const double mj = species.mass(1);
    const Eigen::Vector3d displaced =
        0.5 * (in.v + in.v_star) + (mi - mj) / (2.0 * (mi + mj)) * u;
    CHECK((V - displaced).norm() <= 1e-14 * (1.0 + V.norm()));
  }
}

TEST_CASE("sample_sigma uniform for constant kernels") {
  Rng rng(12345);
  const AngularKernel kernel = AngularKernel::constant(1.0);
  const Eigen::Vector3d u_hat = Eigen::Vector3d{1.0, 2.0, -0.5}.normalized();

  const std::size_t draws = 1000000;
  std::vector<double> taus(draws);
  double mean_tau = 0.0;
  for (auto& tau : taus) {
    const Eigen::Vector3d sigma = sample_sigma(rng, u_hat, kernel);
    CHECK(std::abs(sigma.norm() - 1.0) < 1e-12);
    tau = sigma.dot(u_hat);
    mean_tau += tau;
  }
  mean_tau /= static_cast<double>(draws);

  // tau is uniform on [-1,1]: mean 0 with variance 1/3.
  const double se = std::sqrt(1.0 / 3.0 / static_cast<double>(draws));
  CHECK(std::abs(mean_tau) < 3.0 * se);

  // Kolmogorov-Smirnov against the uniform CDF at the 1% level.
  std::sort(taus.begin(), taus.end());
  double ks = 0.0;
  for (std::size_t m = 0; m < draws; ++m) {
    const double cdf = 0.5 * (taus[m] + 1.0);
    const double hi = static_cast<double>(m + 1) / static_cast<double>(draws);
    const double lo = static_cast<double>(m) / static_cast<double>(draws);
    ks = std::max({ks, std::abs(hi - cdf), std::abs(cdf - lo)});
  }
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("sample_sigma follows a linear table") {
  // b(tau) proportional to 1 + tau: per-bin counts against the analytic
  // probabilities within 3 sigma.
  Rng rng(777);
  const AngularKernel kernel = AngularKernel::tabulated({-1.0, 1.0}, {0.0, 2.0});
  const Eigen::Vector3d u_hat = Eigen::Vector3d::UnitZ();

  const int bins = 20;
  const std::size_t draws = 400000;
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t m = 0; m < draws; ++m) {
    const double tau = sample_sigma(rng, u_hat, kernel).dot(u_hat);
    const int bin = std::min(bins - 1, static_cast<int>((tau + 1.0) / 2.0 * bins));
    ++counts[static_cast<std::size_t>(bin)];
  }
  for (int bin = 0; bin < bins; ++bin) {
    const double lo = -1.0 + 2.0 * bin / bins;
    const double hi = lo + 2.0 / bins;
    // Density (1 + tau)/2 integrated over the bin.
    const double prob = 0.5 * (hi - lo) * (1.0 + 0.5 * (lo + hi));
    const double expected = prob * static_cast<double>(draws);
    const double sigma = std::sqrt(expected * (1.0 - prob));
    CHECK(std::abs(static_cast<double>(counts[static_cast<std::size_t>(bin)]) - expected) <=
          3.0 * sigma + 1.0);
  }

  CHECK_THROWS_AS(sample_sigma(rng, u_hat, AngularKernel::tabulated({-1.0, 1.0}, {0.0, 0.0})),
                  std::domain_error);
}
