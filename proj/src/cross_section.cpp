#include "boltzmix/cross_section.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boltzmix {

CrossSection::CrossSection(Eigen::MatrixXd gamma, std::vector<AngularKernel> kernels)
    : gamma_(std::move(gamma)), kernels_(std::move(kernels)) {
  if (gamma_.rows() != gamma_.cols() || gamma_.rows() < 1) {
    throw std::invalid_argument("CrossSection: gamma must be a square I x I matrix");
  }
  const auto n = static_cast<std::size_t>(gamma_.rows());
  if (kernels_.size() != n * n) {
    throw std::invalid_argument("CrossSection: expected one kernel per species pair");
  }
  gamma_bar_ = gamma_.maxCoeff();
  gamma_min_ = gamma_.minCoeff();
}

const AngularKernel& CrossSection::kernel(int i, int j) const {
  if (i < 0 || j < 0 || i >= count() || j >= count()) {
    throw std::out_of_range("CrossSection: species pair (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
  }
  return kernels_[static_cast<std::size_t>(i) * static_cast<std::size_t>(count()) +
                  static_cast<std::size_t>(j)];
}

ValidationReport validate(const CrossSection& cross_section, const SpeciesSet& species) {
  ValidationReport report;
  const int n = cross_section.count();
  if (n != species.count()) {
    report.issues.push_back({"cross section is " + std::to_string(n) + "x" + std::to_string(n) +
                                 " but mixture has " + std::to_string(species.count()) +
                                 " species",
                             -1, -1});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double g = cross_section.gamma(i, j);
      if (!(g > 0.0) || g > 1.0 || !std::isfinite(g)) {
        report.issues.push_back({"gamma(" + std::to_string(i) + "," + std::to_string(j) +
                                     ") = " + std::to_string(g) + " outside (0,1]",
                                 i, j});
      }
      if (!(cross_section.kernel(i, j).l1_norm() > 0.0)) {
        report.issues.push_back({"kernel(" + std::to_string(i) + "," + std::to_string(j) +
                                     ") has zero L1 norm",
                                 i, j});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (cross_section.gamma(i, j) != cross_section.gamma(j, i)) {
        report.issues.push_back({"gamma asymmetric for pair (" + std::to_string(i) + "," +
                                     std::to_string(j) + "): " +
                                     std::to_string(cross_section.gamma(i, j)) + " vs " +
                                     std::to_string(cross_section.gamma(j, i)),
                                 i, j});
      }
      if (!cross_section.kernel(i, j).same_shape(cross_section.kernel(j, i), 0.0)) {
        report.issues.push_back({"angular kernel asymmetric for pair (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")",
                                 i, j});
      }
    }
  }
  const double recomputed_max = cross_section.gamma_matrix().maxCoeff();
  if (cross_section.gamma_bar() != recomputed_max) {
    report.issues.push_back({"cached gamma_bar does not equal max gamma", -1, -1});
  }
  return report;
}

}  // namespace boltzmix
