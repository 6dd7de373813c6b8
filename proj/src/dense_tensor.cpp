#include "tenreg/dense_tensor.hpp"

namespace tenreg {

std::ptrdiff_t DenseTensor::offset(const std::vector<int>& index) const {
  std::ptrdiff_t off = 0;
  std::ptrdiff_t stride = 1;
  for (int k = 0; k < order(); ++k) {
    off += stride * index[k];
    stride *= dims[k];
  }
  return off;
}

Eigen::MatrixXd DenseTensor::unfold(int k) const {
  const std::ptrdiff_t nk = dims[k];
  const std::ptrdiff_t ncols = count() / nk;
  Eigen::MatrixXd m(nk, ncols);
  std::vector<int> idx(order(), 0);
  for (std::ptrdiff_t flat = 0; flat < count(); ++flat) {
    // Recover the multi-index from the column-major flat offset.
    std::ptrdiff_t rem = flat;
    for (int j = 0; j < order(); ++j) {
      idx[j] = static_cast<int>(rem % dims[j]);
      rem /= dims[j];
    }
    std::ptrdiff_t col = 0;
    std::ptrdiff_t stride = 1;
    for (int j = 0; j < order(); ++j) {
      if (j == k) continue;
      col += stride * idx[j];
      stride *= dims[j];
    }
    m(idx[k], col) = values[flat];
  }
  return m;
}

double inner(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims != b.dims) throw SizeError("inner: mismatched tensor extents");
  return a.values.dot(b.values);
}

} // namespace tenreg
