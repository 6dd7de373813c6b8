#pragma once

#include <Eigen/Core>
#include <vector>

#include "tenreg/marginal.hpp"

namespace tenreg {

/// Orthonormal polynomial family for one marginal, held as three-term
/// recurrence coefficients and evaluated by the recurrence
///   phi_{j+1}(x) = ((x - alpha_j) phi_j(x) - sb_j phi_{j-1}(x)) / sb_{j+1}
/// with phi_0 = 1. Legendre (shifted/scaled) for Uniform marginals,
/// normalized probabilists' Hermite for Gaussian, both in the physical
/// variable.
class UnivariateBasis {
public:
  UnivariateBasis() = default;

  int degree_max() const { return degree_; }
  const Marginal& marginal() const { return marginal_; }

  /// phi_0(x), ..., phi_p(x).
  Eigen::VectorXd eval(double x) const;
  /// First derivatives, same layout.
  Eigen::VectorXd eval_deriv(double x) const;

  /// Allocation-free variants for hot loops; out must hold p+1 doubles.
  void eval_into(double x, double* out) const;
  void eval_deriv_into(double x, double* out) const;

private:
  friend UnivariateBasis build_basis(const Marginal&, int);
  int degree_ = 0;
  Marginal marginal_;
  std::vector<double> alpha_;      // alpha_0 .. alpha_p
  std::vector<double> sqrt_beta_;  // sb_0 .. sb_{p+1}; sb_0 unused by eval
};

UnivariateBasis build_basis(const Marginal& marginal, int degree);

/// One basis per parameter.
class BasisBundle {
public:
  BasisBundle() = default;
  BasisBundle(const ParameterSpace& space, int degree);

  int dim() const { return static_cast<int>(bases_.size()); }
  int degree() const { return degree_; }
  const UnivariateBasis& basis(int k) const { return bases_.at(k); }

private:
  int degree_ = 0;
  std::vector<UnivariateBasis> bases_;
};

/// Gauss quadrature rule (nodes, weights) integrating against the marginal's
/// density: Gauss-Legendre for Uniform, Gauss-Hermite for Gaussian, in the
/// physical variable. Weights sum to 1.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

QuadratureRule gauss_rule(const Marginal& marginal, int n);

} // namespace tenreg
