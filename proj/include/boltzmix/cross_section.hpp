#pragma once

#include "boltzmix/angular_kernel.hpp"
#include "boltzmix/species.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace boltzmix {

/// Variable-hard-potential cross section family B_ij = |u|^gamma_ij b_ij.
/// Micro-reversibility requires gamma and the kernels to be symmetric in
/// (i, j); validate() reports violations instead of throwing, since broken
/// configurations are data.
class CrossSection {
 public:
  CrossSection(Eigen::MatrixXd gamma, std::vector<AngularKernel> kernels);

  int count() const { return static_cast<int>(gamma_.rows()); }
  double gamma(int i, int j) const { return gamma_(i, j); }
  const Eigen::MatrixXd& gamma_matrix() const { return gamma_; }
  const AngularKernel& kernel(int i, int j) const;
  double gamma_bar() const { return gamma_bar_; }
  double gamma_min() const { return gamma_min_; }

 private:
  Eigen::MatrixXd gamma_;
  std::vector<AngularKernel> kernels_;  // row-major I x I
  double gamma_bar_;
  double gamma_min_;
};

struct ValidationIssue {
  std::string message;
  int i = -1;
  int j = -1;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Checks gamma symmetry and range (0,1], kernel symmetry, kernel
/// integrability, and the cached gamma_bar.
ValidationReport validate(const CrossSection& cross_section, const SpeciesSet& species);

}  // namespace boltzmix
