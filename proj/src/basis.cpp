#include "tenreg/basis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace tenreg {

UnivariateBasis build_basis(const Marginal& marginal, int degree) {
  if (degree < 0) throw DomainError("build_basis requires degree >= 0");
  UnivariateBasis b;
  b.degree_ = degree;
  b.marginal_ = marginal;
  b.alpha_.resize(degree + 1);
  b.sqrt_beta_.resize(degree + 2);
  b.sqrt_beta_[0] = 1.0; // mass of the (normalized) density

  if (marginal.kind == Marginal::Kind::Uniform) {
    // Legendre recurrence mapped to [lo, hi]: alpha_j = midpoint,
    // sqrt(beta_j) = halfwidth * j / sqrt(4 j^2 - 1).
    const double mid = 0.5 * (marginal.a + marginal.b);
    const double half = 0.5 * (marginal.b - marginal.a);
    for (int j = 0; j <= degree; ++j) b.alpha_[j] = mid;
    for (int j = 1; j <= degree + 1; ++j)
      b.sqrt_beta_[j] = half * j / std::sqrt(4.0 * j * j - 1.0);
  } else {
    // Probabilists' Hermite scaled to mean/stddev: alpha_j = mean,
    // sqrt(beta_j) = stddev * sqrt(j).
    for (int j = 0; j <= degree; ++j) b.alpha_[j] = marginal.a;
    for (int j = 1; j <= degree + 1; ++j)
      b.sqrt_beta_[j] = marginal.b * std::sqrt(static_cast<double>(j));
  }
  return b;
}

void UnivariateBasis::eval_into(double x, double* out) const {
  out[0] = 1.0;
  if (degree_ == 0) return;
  out[1] = (x - alpha_[0]) / sqrt_beta_[1];
  for (int j = 1; j < degree_; ++j)
    out[j + 1] =
        ((x - alpha_[j]) * out[j] - sqrt_beta_[j] * out[j - 1]) / sqrt_beta_[j + 1];
}

void UnivariateBasis::eval_deriv_into(double x, double* out) const {
  // Differentiate the recurrence; needs the values alongside.
  std::vector<double> val(degree_ + 1);
  eval_into(x, val.data());
  out[0] = 0.0;
  if (degree_ == 0) return;
  out[1] = 1.0 / sqrt_beta_[1];
  for (int j = 1; j < degree_; ++j)
    out[j + 1] = (val[j] + (x - alpha_[j]) * out[j] - sqrt_beta_[j] * out[j - 1]) /
                 sqrt_beta_[j + 1];
}

Eigen::VectorXd UnivariateBasis::eval(double x) const {
  Eigen::VectorXd v(degree_ + 1);
  eval_into(x, v.data());
  return v;
}

Eigen::VectorXd UnivariateBasis::eval_deriv(double x) const {
  Eigen::VectorXd v(degree_ + 1);
  eval_deriv_into(x, v.data());
  return v;
}

BasisBundle::BasisBundle(const ParameterSpace& space, int degree)
    : degree_(degree) {
  bases_.reserve(space.dim());
  for (int k = 0; k < space.dim(); ++k)
    bases_.push_back(build_basis(space.marginal(k), degree));
}

QuadratureRule gauss_rule(const Marginal& marginal, int n) {
  if (n < 1) throw DomainError("gauss_rule requires n >= 1");
  // Golub-Welsch on the Jacobi matrix of the same recurrence family.
  const double diag = marginal.kind == Marginal::Kind::Uniform
                          ? 0.5 * (marginal.a + marginal.b)
                          : marginal.a;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) J(j, j) = diag;
  for (int j = 1; j < n; ++j) {
    double sb;
    if (marginal.kind == Marginal::Kind::Uniform) {
      const double half = 0.5 * (marginal.b - marginal.a);
      sb = half * j / std::sqrt(4.0 * j * j - 1.0);
    } else {
      sb = marginal.b * std::sqrt(static_cast<double>(j));
    }
    J(j, j - 1) = sb;
    J(j - 1, j) = sb;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0; // density already normalized to unit mass
  }
  return rule;
}

} // namespace tenreg
