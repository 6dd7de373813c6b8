#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "tenreg/cp_model.hpp"

namespace tenreg {

/// Variance-based sensitivity summary extracted from a fitted model.
struct SobolReport {
  Eigen::VectorXd main;  // S_j
  Eigen::VectorXd total; // T_j
  double mean = 0.0;
  double variance = 0.0;
};

/// Closed-form mean: the coefficient of the all-constant basis term,
/// sum_r prod_k u_r^(k)(1).
double mean(const CpModel& model);

/// Closed-form variance: <X,X> - mean^2 via factor Gram matrices,
/// O(R^2 d (p+1)).
double variance(const CpModel& model);

/// Main and total Sobol indices from the CP factors. Throws ZeroVariance
/// when the model variance is not positive.
SobolReport sobol(const CpModel& model);

/// Monte Carlo moments of the surrogate over the input distribution;
/// validation oracle for the closed forms.
std::pair<double, double> mc_moments(const CpModel& model, long n,
                                     std::uint64_t seed);

/// Gaussian-kernel density estimate with Silverman's bandwidth
/// 1.06 sigma n^(-1/5), evaluated on the given grid.
Eigen::VectorXd kde(const Eigen::VectorXd& values, const Eigen::VectorXd& grid);

/// Evenly spaced grid spanning mean +- span_sigmas sample standard deviations.
Eigen::VectorXd kde_grid(const Eigen::VectorXd& values, int points,
                         double span_sigmas = 5.0);

/// Sobol CSV: header index,S,T with 1-based parameter indices.
void write_sobol_csv(const SobolReport& report, const std::string& path);

} // namespace tenreg
