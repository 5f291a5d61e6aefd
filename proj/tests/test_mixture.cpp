#include "boltzmix/cross_section.hpp"
#include "boltzmix/rng.hpp"
#include "boltzmix/species.hpp"

#include <doctest.h>

#include <cmath>

using namespace boltzmix;

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
}

TEST_CASE("bracket examples") {
  const SpeciesSet two({1.0, 3.0});
  CHECK(bracket({0.0, 0.0, 0.0}, 0, two) == 1.0);
  CHECK(bracket({0.0, 0.0, 0.0}, 1, two) == 1.0);
  CHECK(bracket({1.0, 0.0, 0.0}, 0, two) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));

  // Single species: m / sum m = 1 whatever the mass unit.
  const SpeciesSet heavy({17.3});
  const SpeciesSet light({0.004});
  const Eigen::Vector3d v{0.3, -1.2, 2.0};
  CHECK(bracket(v, 0, heavy) == doctest::Approx(std::sqrt(1.0 + v.squaredNorm())).epsilon(1e-15));
  CHECK(bracket(v, 0, light) == doctest::Approx(bracket(v, 0, heavy)).epsilon(1e-15));
}

TEST_CASE("bracket is monotone in speed and at least 1") {
  const SpeciesSet species({0.5, 2.0, 7.0});
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int i = static_cast<int>(rng.uniform() * 3);
    const Eigen::Vector3d dir = rng.isotropic_direction();
    double previous = 0.0;
    for (double speed : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
      const double value = bracket(speed * dir, i, species);
      CHECK(value >= 1.0);
      CHECK(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("mass fractions") {
  const SpeciesSet equal({2.5, 2.5});
  CHECK(mass_fraction(0, 1, equal) == 0.5);

  const SpeciesSet mixed({1.0, 3.0});
  CHECK(mass_fraction(0, 1, mixed) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(mass_fraction(1, 0, mixed) == doctest::Approx(0.75).epsilon(1e-15));

  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const SpeciesSet random({rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0)});
    const double r01 = mass_fraction(0, 1, random);
    CHECK(r01 > 0.0);
    CHECK(r01 < 1.0);
    CHECK(r01 + mass_fraction(1, 0, random) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("species construction errors") {
  CHECK_THROWS_AS(SpeciesSet({}), std::invalid_argument);
  CHECK_THROWS_AS(SpeciesSet({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpeciesSet({0.0}), std::invalid_argument);
  const SpeciesSet species({1.0});
  CHECK_THROWS_AS(bracket({0, 0, 0}, 1, species), std::out_of_range);
  CHECK_THROWS_AS(mass_fraction(0, -1, species), std::out_of_range);
}

TEST_CASE("constant kernel norms are exact") {
  const AngularKernel kernel = AngularKernel::constant(0.7);
  CHECK(kernel.l1_norm() == 4.0 * kPi * 0.7);
  CHECK(kernel.sup_norm() == 0.7);
}

TEST_CASE("tabulated kernel quadrature") {
  // Constant table: trapezoid is exact up to rounding on any grid.
  const int points = 1001;
  std::vector<double> tau(points);
  std::vector<double> b(points, 0.3);
  for (int m = 0; m < points; ++m) tau[m] = -1.0 + 2.0 * m / (points - 1.0);
  tau.front() = -1.0;
  tau.back() = 1.0;
  const AngularKernel kernel = AngularKernel::tabulated(tau, b);
  const double exact = 4.0 * kPi * 0.3;
  CHECK(std::abs(kernel.l1_norm() - exact) / exact < 1e-10);
  CHECK(kernel.sup_norm() == 0.3);

  // Quadratic integrand: composite trapezoid error shrinks like h^2.
  const auto build = [&](int n) {
    std::vector<double> grid(n), values(n);
    for (int m = 0; m < n; ++m) {
      grid[m] = -1.0 + 2.0 * m / (n - 1.0);
      values[m] = grid[m] * grid[m];
    }
    grid.front() = -1.0;
    grid.back() = 1.0;
    return AngularKernel::tabulated(grid, values);
  };
  const double analytic = 2.0 * kPi * (2.0 / 3.0);
  const double err_coarse = std::abs(build(101).l1_norm() - analytic);
  const double err_fine = std::abs(build(1001).l1_norm() - analytic);
  CHECK(err_fine < err_coarse / 50.0);
}

TEST_CASE("tabulated kernel grid validation") {
  CHECK_THROWS_AS(AngularKernel::tabulated({-1.0, 0.5}, {1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(AngularKernel::tabulated({-0.5, 1.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(AngularKernel::tabulated({-1.0, 0.0, 0.0, 1.0}, {1.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
}

namespace {

CrossSection make_cross_section(double g01, double g10, double g00) {
  Eigen::MatrixXd gamma(2, 2);
  gamma << g00, g01, g10, 1.0;
  std::vector<AngularKernel> kernels(4, AngularKernel::constant(1.0));
  return CrossSection(std::move(gamma), std::move(kernels));
}

}  // namespace

TEST_CASE("validation of symmetric configuration is clean") {
  const SpeciesSet species({1.0, 3.0});
  const auto report = validate(make_cross_section(0.5, 0.5, 1.0), species);
  CHECK(report.ok());
}

TEST_CASE("validation flags asymmetric gamma with the offending pair") {
  const SpeciesSet species({1.0, 3.0});
  const auto report = validate(make_cross_section(0.5, 0.6, 1.0), species);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues) {
    if (issue.i == 0 && issue.j == 1 && issue.message.find("asymmetric") != std::string::npos) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("validation flags gamma outside (0,1]") {
  const SpeciesSet species({1.0, 3.0});
  const auto report = validate(make_cross_section(0.5, 0.5, 1.2), species);
  REQUIRE_FALSE(report.ok());
  CHECK(report.issues.front().message.find("outside (0,1]") != std::string::npos);
}

TEST_CASE("validation flags asymmetric kernels and zero kernels") {
  const SpeciesSet species({1.0, 3.0});
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Ones(2, 2);
  std::vector<AngularKernel> kernels{
      AngularKernel::constant(1.0), AngularKernel::constant(2.0),
      AngularKernel::constant(1.0), AngularKernel::constant(0.0)};
  const auto report = validate(CrossSection(std::move(gamma), std::move(kernels)), species);
  REQUIRE_FALSE(report.ok());
  bool kernel_asym = false;
  bool zero_l1 = false;
  for (const auto& issue : report.issues) {
    if (issue.message.find("kernel asymmetric") != std::string::npos) kernel_asym = true;
    if (issue.message.find("zero L1 norm") != std::string::npos) zero_l1 = true;
  }
  CHECK(kernel_asym);
  CHECK(zero_l1);
}
