#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tenreg/marginal.hpp"

namespace tenreg {

/// Paired design points with optional observed outputs. Unlabeled rows carry
/// NaN in `outputs`.
struct SampleSet {
  Eigen::MatrixXd unit_points; // N x d, in [0,1]^d
  Eigen::MatrixXd phys_points; // N x d, in the physical space
  Eigen::VectorXd outputs;     // length N; NaN marks a missing label

  int size() const { return static_cast<int>(unit_points.rows()); }
  int dim() const { return static_cast<int>(unit_points.cols()); }

  bool row_labeled(int i) const;
  bool fully_labeled() const;
  /// 0-based indices of rows without an output value.
  std::vector<int> unlabeled_rows() const;

  /// Builds an unlabeled set from unit-cube points, mapping rows through the
  /// space's inverse transform.
  static SampleSet from_unit(const ParameterSpace& space,
                             const Eigen::MatrixXd& unit);

  void append(const SampleSet& other);
};

/// CSV serialization. Header: u_1,..,u_d,x_1,..,x_d,y with the y field left
/// empty on unlabeled rows. Doubles are written with round-trip precision.
void write_sample_csv(const SampleSet& set, const std::string& path);
SampleSet read_sample_csv(const std::string& path);

} // namespace tenreg
