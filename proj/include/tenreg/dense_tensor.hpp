#pragma once

#include <Eigen/Core>
#include <vector>

#include "tenreg/errors.hpp"

namespace tenreg {

/// Fully materialized coefficient tensor. Test oracle only: production code
/// never forms it (the in-scope experiments would need 3^100 entries).
struct DenseTensor {
  std::vector<int> dims;       // d extents
  Eigen::VectorXd values;      // flat, first index fastest (column-major)

  int order() const { return static_cast<int>(dims.size()); }
  std::ptrdiff_t count() const { return values.size(); }

  std::ptrdiff_t offset(const std::vector<int>& index) const;
  double& at(const std::vector<int>& index) { return values[offset(index)]; }
  double at(const std::vector<int>& index) const { return values[offset(index)]; }

  /// Mode-k unfolding: dims[k] rows, product of the other extents columns.
  /// Column order matches the column-major flattening with index k removed.
  Eigen::MatrixXd unfold(int k) const;
};

double inner(const DenseTensor& a, const DenseTensor& b);

} // namespace tenreg
