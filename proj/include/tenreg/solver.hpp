#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tenreg/cp_model.hpp"
#include "tenreg/sample_set.hpp"

namespace tenreg {

enum class SolverMode {
  GroupSparse,    // lq/l2 rank-shrinking regularizer, eta/lambda updates, pruning
  FixedRankRidge, // plain ridge on the factors, rank kept at R_init
};

struct SolverConfig {
  double q = 0.5;          // sparsity exponent in (0, 1]
  double lambda0 = 0.1;    // regularization base; scaled by max(eta) each iteration
  int rank_init = 4;
  double eta_floor = 1e-12; // relative floor in the eta update
  int max_iters = 100;
  double tol = 1e-4;        // relative factor-change stopping threshold
  double prune_tau = 1e-4;  // relative group-norm threshold for rank pruning
  SolverMode mode = SolverMode::GroupSparse;

  void validate() const;
};

struct SolverState {
  Eigen::VectorXd eta;
  double lambda = 0.0;
  std::vector<double> objective_trace; // one value per completed iteration
  std::vector<int> rank_trace;         // effective rank per iteration
  std::vector<double> lambda_trace;
  std::vector<double> max_eta_trace;
  int iters = 0;
  bool converged = false;
};

/// Full surrogate objective: 0.5 sum_n (y_n - yhat_n)^2
///   + lambda (0.5 sum_r v_r^2 / eta_r + 0.5 ||eta||_{q/(2-q)}).
double objective(const CpModel& model, const SampleSet& data,
                 const Eigen::VectorXd& eta, double lambda, double q);

/// Minimizer of the eta subproblem: eta_r = v_r^(2-q) ||v||_q^(q-1) + eps.
/// All-eps when v = 0.
Eigen::VectorXd update_eta(const Eigen::VectorXd& group_norms, double q, double eps);

/// lq quasi-norm ||v||_q = (sum v_r^q)^(1/q), valid for q in (0, 1].
double lq_norm(const Eigen::VectorXd& v, double q);

/// Regularizer value g_hat(v, eta) alone (without the data term).
double eta_surrogate(const Eigen::VectorXd& group_norms, const Eigen::VectorXd& eta,
                     double q);

/// lambda schedule: lambda0 * max(eta).
double update_lambda(double lambda0, const Eigen::VectorXd& eta);

/// Design matrix of the very first cold-start factor update: row n stacks R
/// copies of phi^(k)(xi_k^n), i.e. every other mode's row product replaced
/// by ones. k is 0-based.
Eigen::MatrixXd init_first_fit(const SampleSet& data, const BasisBundle& bases,
                               int k, int rank);

/// One analytic factor update (normal equations with the eta-weighted ridge);
/// exposed for tests. Returns the new (p+1) x R factor. Modes other than k
/// are taken from `model`.
Eigen::MatrixXd update_factor(const CpModel& model, const SampleSet& data, int k,
                              const Eigen::VectorXd& eta, double lambda);

/// Observation hook for the descent property tests: called with the
/// objective value after every block update (d factor updates, then eta),
/// all evaluated at the lambda in force for that iteration.
using BlockObjectiveHook =
    std::function<void(int iter, int block, double objective_value)>;

struct FitResult {
  CpModel model;
  SolverState state;
};

/// Block coordinate descent fit of the CP surrogate (the full loop:
/// factor sweeps, eta update, lambda schedule, convergence test, final
/// pruning). Deterministic given (data, config, seed).
FitResult fit(const SampleSet& data, const ParameterSpace& space,
              const SolverConfig& config, std::uint64_t seed,
              const std::optional<CpModel>& warm_start = std::nullopt,
              int degree = 2, const BlockObjectiveHook& hook = nullptr);

/// 5-fold cross-validation of lambda0 over a 7-point log grid in
/// [1e-4, 1e1], minimizing validation RMSE. Deterministic given the seed.
double cross_validate_lambda0(const SampleSet& data, const ParameterSpace& space,
                              const SolverConfig& config, std::uint64_t seed,
                              int degree = 2);

/// Fit-log CSV: header iter,objective,rank,lambda,max_eta.
void write_fit_log(const SolverState& state, const std::string& path);

} // namespace tenreg
