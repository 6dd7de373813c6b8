#include "tenreg/marginal.hpp"

#include <cmath>

#include "tenreg/rng.hpp"

namespace tenreg {

Marginal Marginal::uniform(double lo, double hi) {
  if (!(lo < hi)) throw DomainError("Uniform marginal requires lo < hi");
  Marginal m;
  m.kind = Kind::Uniform;
  m.a = lo;
  m.b = hi;
  return m;
}

Marginal Marginal::gaussian(double mean, double stddev) {
  if (!(stddev > 0.0)) throw DomainError("Gaussian marginal requires stddev > 0");
  Marginal m;
  m.kind = Kind::Gaussian;
  m.a = mean;
  m.b = stddev;
  return m;
}

double standard_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("standard normal quantile requires u in (0,1)");

  // Acklam's rational approximation, three branches.
  static const double pa[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
  static const double pb[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
  static const double pc[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
  static const double pd[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((pc[0] * q + pc[1]) * q + pc[2]) * q + pc[3]) * q + pc[4]) * q + pc[5]) /
        ((((pd[0] * q + pd[1]) * q + pd[2]) * q + pd[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((pa[0] * r + pa[1]) * r + pa[2]) * r + pa[3]) * r + pa[4]) * r + pa[5]) * q /
        (((((pb[0] * r + pb[1]) * r + pb[2]) * r + pb[3]) * r + pb[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((pc[0] * q + pc[1]) * q + pc[2]) * q + pc[3]) * q + pc[4]) * q + pc[5]) /
        ((((pd[0] * q + pd[1]) * q + pd[2]) * q + pd[3]) * q + 1.0);
  }

  // One Halley step against the exact CDF pushes the error to ~1e-15.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
  const double w = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= w / (1.0 + 0.5 * x * w);
  return x;
}

double Marginal::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("quantile argument must lie in [0,1]");
  if (kind == Kind::Uniform) return a + (b - a) * u;
  if (u == 0.0 || u == 1.0)
    throw DomainError("Gaussian quantile is infinite at u = 0 or 1");
  return a + b * standard_normal_quantile(u);
}

double Marginal::cdf(double x) const {
  if (kind == Kind::Uniform) {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    return (x - a) / (b - a);
  }
  return 0.5 * std::erfc(-(x - a) / (b * std::sqrt(2.0)));
}

ParameterSpace::ParameterSpace(std::vector<Marginal> marginals)
    : marginals_(std::move(marginals)) {
  if (marginals_.empty())
    throw DomainError("ParameterSpace requires at least one marginal");
}

Eigen::VectorXd ParameterSpace::inverse_transform(const Eigen::VectorXd& u) const {
  if (u.size() != dim())
    throw DomainError("inverse_transform: dimension mismatch");
  Eigen::VectorXd x(dim());
  for (int k = 0; k < dim(); ++k) x[k] = marginals_[k].quantile(u[k]);
  return x;
}

Eigen::MatrixXd ParameterSpace::inverse_transform_rows(const Eigen::MatrixXd& unit) const {
  if (unit.cols() != dim())
    throw DomainError("inverse_transform_rows: dimension mismatch");
  Eigen::MatrixXd phys(unit.rows(), unit.cols());
  for (Eigen::Index i = 0; i < unit.rows(); ++i)
    for (int k = 0; k < dim(); ++k)
      phys(i, k) = marginals_[k].quantile(unit(i, k));
  return phys;
}

Eigen::VectorXd ParameterSpace::forward_transform(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw DomainError("forward_transform: dimension mismatch");
  Eigen::VectorXd u(dim());
  for (int k = 0; k < dim(); ++k) u[k] = marginals_[k].cdf(x[k]);
  return u;
}

Eigen::MatrixXd latin_hypercube(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DomainError("latin_hypercube requires n >= 1, d >= 1");
  Eigen::MatrixXd pts(n, d);
  std::vector<int> perm(n);
  for (int k = 0; k < d; ++k) {
    Rng rng(derive_seed(seed, Stream::LatinHypercube, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < n; ++i) perm[i] = i;
    // Fisher-Yates with explicit bounded draws keeps the shuffle portable.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[i], perm[j]);
    }
    for (int i = 0; i < n; ++i)
      pts(i, k) = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
  }
  return pts;
}

Eigen::MatrixXd mc_uniform(int m, int d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw DomainError("mc_uniform requires m >= 1, d >= 1");
  Rng rng(derive_seed(seed, Stream::MonteCarlo));
  Eigen::MatrixXd pts(m, d);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < d; ++k) pts(i, k) = rng.uniform();
  return pts;
}

} // namespace tenreg
