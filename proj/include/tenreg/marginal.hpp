#pragma once

#include <Eigen/Core>
#include <vector>

#include "tenreg/errors.hpp"

namespace tenreg {

/// One independent input distribution. Uniform and Gaussian cover the
/// supported experiments; extend the enum for further families.
struct Marginal {
  enum class Kind { Uniform, Gaussian };

  Kind kind = Kind::Uniform;
  // Uniform: a = lower bound, b = upper bound.
  // Gaussian: a = mean, b = standard deviation.
  double a = 0.0;
  double b = 1.0;

  static Marginal uniform(double lo, double hi);
  static Marginal gaussian(double mean, double stddev);

  /// Quantile (inverse CDF) at u in [0,1]. Throws DomainError for a Gaussian
  /// marginal at u = 0 or 1 (infinite quantile).
  double quantile(double u) const;

  /// CDF at x.
  double cdf(double x) const;

  double mean() const { return kind == Kind::Uniform ? 0.5 * (a + b) : a; }

  bool operator==(const Marginal&) const = default;
};

/// Inverse of the standard normal CDF. Acklam rational approximation
/// followed by one Halley refinement; absolute error well below 1e-9.
double standard_normal_quantile(double u);

/// Ordered list of independent marginals defining the parameter space.
class ParameterSpace {
public:
  ParameterSpace() = default;
  explicit ParameterSpace(std::vector<Marginal> marginals);

  int dim() const { return static_cast<int>(marginals_.size()); }
  const Marginal& marginal(int k) const { return marginals_.at(k); }
  const std::vector<Marginal>& marginals() const { return marginals_; }

  /// Maps a unit-cube point to physical coordinates, component-wise through
  /// the marginal quantile functions.
  Eigen::VectorXd inverse_transform(const Eigen::VectorXd& u) const;

  /// Row-wise inverse_transform of a whole design matrix.
  Eigen::MatrixXd inverse_transform_rows(const Eigen::MatrixXd& unit) const;

  /// Maps a physical point back to the unit cube through the marginal CDFs.
  Eigen::VectorXd forward_transform(const Eigen::VectorXd& x) const;

  bool operator==(const ParameterSpace&) const = default;

private:
  std::vector<Marginal> marginals_;
};

/// Latin Hypercube design: n points in [0,1)^d, one per stratum in every
/// coordinate, jittered uniformly inside each stratum. Deterministic given
/// the seed; column streams are independent.
Eigen::MatrixXd latin_hypercube(int n, int d, std::uint64_t seed);

/// Plain Monte Carlo design: m i.i.d. uniform points in [0,1)^d.
Eigen::MatrixXd mc_uniform(int m, int d, std::uint64_t seed);

} // namespace tenreg
