#pragma once

#include <Eigen/Core>
#include <vector>

#include "tenreg/cp_model.hpp"

namespace tenreg::kernels {

// Data-parallel inner loops, each in two variants: a plain serial reference
// (*_serial) and an OpenMP version (*_parallel). The parallel versions use a
// fixed block partition with an ordered merge, so results are bit-identical
// to each other regardless of thread count. Tests pin serial vs parallel
// agreement; tools/kernel_bench compares their throughput.

/// Fixed reduction block size. Independent of the thread count on purpose:
/// partial sums are formed per block and merged in block order.
inline constexpr int kReduceBlock = 512;

/// For each row of `points`, the index of the nearest row of `centers` in
/// Euclidean distance; ties resolve to the lowest center index.
void nearest_center_serial(const Eigen::MatrixXd& points,
                           const Eigen::MatrixXd& centers,
                           std::vector<int>& assignment);
void nearest_center_parallel(const Eigen::MatrixXd& points,
                             const Eigen::MatrixXd& centers,
                             std::vector<int>& assignment);

/// Surrogate evaluation over rows of a physical-space design matrix.
void evaluate_batch_serial(const CpModel& model, const Eigen::MatrixXd& phys,
                           Eigen::VectorXd& out);
void evaluate_batch_parallel(const CpModel& model, const Eigen::MatrixXd& phys,
                             Eigen::VectorXd& out);

/// Accumulates G = rows^T rows and b = rows^T y over samples (the normal
/// equations of one factor update). The parallel version reduces per-block
/// partials in block order.
void gram_accumulate_serial(const Eigen::MatrixXd& rows, const Eigen::VectorXd& y,
                            Eigen::MatrixXd& gram, Eigen::VectorXd& rhs);
void gram_accumulate_parallel(const Eigen::MatrixXd& rows, const Eigen::VectorXd& y,
                              Eigen::MatrixXd& gram, Eigen::VectorXd& rhs);

/// Sum and sum of squares of a vector with the same blocked ordered
/// reduction; backs the Monte Carlo moment estimates.
void sum_sumsq_serial(const Eigen::VectorXd& values, double& sum, double& sumsq);
void sum_sumsq_parallel(const Eigen::VectorXd& values, double& sum, double& sumsq);

} // namespace tenreg::kernels
