#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "tenreg/basis.hpp"
#include "tenreg/dense_tensor.hpp"
#include "tenreg/marginal.hpp"

namespace tenreg {

/// Metadata of the fit that produced a model, carried for provenance.
struct FitMeta {
  std::uint64_t seed = 0;
  double q = 0.0;
  double lambda0 = 0.0;
  std::vector<double> objective_trace_tail;
};

/// Rank-R CP representation of the coefficient tensor of a tensor-product
/// polynomial chaos surrogate. factors[k] is (p+1) x R; column r of all d
/// factors together forms one rank-1 term. The surrogate value is
///   yhat(xi) = sum_r prod_k phi^(k)(xi_k)^T u_r^(k),
/// evaluated in O(d R (p+1)) without materializing the tensor.
class CpModel {
public:
  CpModel() = default;
  CpModel(ParameterSpace space, int degree, std::vector<Eigen::MatrixXd> factors);

  int dim() const { return space_.dim(); }
  int degree() const { return degree_; }
  int rank() const {
    return factors_.empty() ? 0 : static_cast<int>(factors_[0].cols());
  }
  const ParameterSpace& space() const { return space_; }
  const BasisBundle& bases() const { return bases_; }
  const std::vector<Eigen::MatrixXd>& factors() const { return factors_; }
  const Eigen::MatrixXd& factor(int k) const { return factors_.at(k); }

  FitMeta fit_meta;

  /// Surrogate value at a physical point.
  double evaluate(const Eigen::VectorXd& xi) const;

  /// Gradient with respect to the physical coordinates.
  Eigen::VectorXd gradient(const Eigen::VectorXd& xi) const;

  /// Mode-k slice of the design row: the (p+1) x R matrix
  /// phi^(k)(xi_k) * hadamard_{j != k}(phi^(j)(xi_j)^T U^(j)).
  /// Never forms the (p+1)^(d-1)-column unfolding. k is 0-based.
  Eigen::MatrixXd khatri_rao_row(int k, const Eigen::VectorXd& xi) const;

  /// Per-rank group norms v_r = sqrt(sum_k ||u_r^(k)||^2).
  Eigen::VectorXd group_norms() const;

  /// Drops every column r with v_r < tau * max_s v_s (simultaneously in all
  /// modes). Keeps at least the largest column. tau = 0 is the identity.
  CpModel prune_rank(double tau) const;

  /// Dense materialization, capped at 1e7 entries (oracle only).
  DenseTensor densify() const;

private:
  ParameterSpace space_;
  BasisBundle bases_;
  int degree_ = 0;
  std::vector<Eigen::MatrixXd> factors_;
};

/// JSON model file round trip. Serialization is canonical: identical models
/// produce byte-identical files.
void save_model(const CpModel& model, const std::string& path);
CpModel load_model(const std::string& path);

} // namespace tenreg
