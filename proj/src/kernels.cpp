#include "tenreg/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tenreg::kernels {

namespace {

constexpr int kDistanceChunk = 2048;

// Nearest-center scan for one chunk of points. Distances via the expansion
// ||p - c||^2 = ||p||^2 - 2 p.c + ||c||^2; the ||p||^2 term is constant per
// row and dropped. The argmin scan uses strict < over ascending center
// index, which makes ties resolve to the lowest index.
void nearest_center_chunk(const Eigen::MatrixXd& points,
                          const Eigen::MatrixXd& centers,
                          const Eigen::VectorXd& center_sqnorm, int begin,
                          int end, std::vector<int>& assignment) {
  const auto block = points.middleRows(begin, end - begin);
  Eigen::MatrixXd score = block * centers.transpose(); // (end-begin) x N
  score *= -2.0;
  score.rowwise() += center_sqnorm.transpose();
  for (int i = 0; i < score.rows(); ++i) {
    int arg = 0;
    double best = score(i, 0);
    for (int c = 1; c < score.cols(); ++c) {
      if (score(i, c) < best) {
        best = score(i, c);
        arg = c;
      }
    }
    assignment[begin + i] = arg;
  }
}

void evaluate_rows(const CpModel& model, const Eigen::MatrixXd& phys, int begin,
                   int end, Eigen::VectorXd& out, Eigen::VectorXd& phi,
                   Eigen::VectorXd& prod) {
  const int d = model.dim();
  for (int i = begin; i < end; ++i) {
    prod.setOnes();
    for (int k = 0; k < d; ++k) {
      model.bases().basis(k).eval_into(phys(i, k), phi.data());
      prod.array() *= (phi.transpose() * model.factor(k)).array().transpose();
    }
    out[i] = prod.sum();
  }
}

} // namespace

void nearest_center_serial(const Eigen::MatrixXd& points,
                           const Eigen::MatrixXd& centers,
                           std::vector<int>& assignment) {
  const int m = static_cast<int>(points.rows());
  assignment.resize(m);
  const Eigen::VectorXd csq = centers.rowwise().squaredNorm();
  for (int begin = 0; begin < m; begin += kDistanceChunk)
    nearest_center_chunk(points, centers, csq, begin,
                         std::min(m, begin + kDistanceChunk), assignment);
}

void nearest_center_parallel(const Eigen::MatrixXd& points,
                             const Eigen::MatrixXd& centers,
                             std::vector<int>& assignment) {
  const int m = static_cast<int>(points.rows());
  assignment.resize(m);
  const Eigen::VectorXd csq = centers.rowwise().squaredNorm();
  const int nchunks = (m + kDistanceChunk - 1) / kDistanceChunk;
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < nchunks; ++c) {
    const int begin = c * kDistanceChunk;
    nearest_center_chunk(points, centers, csq, begin,
                         std::min(m, begin + kDistanceChunk), assignment);
  }
}

void evaluate_batch_serial(const CpModel& model, const Eigen::MatrixXd& phys,
                           Eigen::VectorXd& out) {
  const int m = static_cast<int>(phys.rows());
  out.resize(m);
  Eigen::VectorXd phi(model.degree() + 1), prod(model.rank());
  evaluate_rows(model, phys, 0, m, out, phi, prod);
}

void evaluate_batch_parallel(const CpModel& model, const Eigen::MatrixXd& phys,
                             Eigen::VectorXd& out) {
  const int m = static_cast<int>(phys.rows());
  out.resize(m);
  const int nblocks = (m + kReduceBlock - 1) / kReduceBlock;
#pragma omp parallel
  {
    Eigen::VectorXd phi(model.degree() + 1), prod(model.rank());
#pragma omp for schedule(dynamic)
    for (int b = 0; b < nblocks; ++b) {
      const int begin = b * kReduceBlock;
      evaluate_rows(model, phys, begin, std::min(m, begin + kReduceBlock), out,
                    phi, prod);
    }
  }
}

void gram_accumulate_serial(const Eigen::MatrixXd& rows, const Eigen::VectorXd& y,
                            Eigen::MatrixXd& gram, Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(rows.rows());
  const int m = static_cast<int>(rows.cols());
  gram = Eigen::MatrixXd::Zero(m, m);
  rhs = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) {
    gram.noalias() += rows.row(i).transpose() * rows.row(i);
    rhs.noalias() += y[i] * rows.row(i).transpose();
  }
}

void gram_accumulate_parallel(const Eigen::MatrixXd& rows, const Eigen::VectorXd& y,
                              Eigen::MatrixXd& gram, Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(rows.rows());
  const int m = static_cast<int>(rows.cols());
  const int nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<Eigen::MatrixXd> gpart(nblocks);
  std::vector<Eigen::VectorXd> bpart(nblocks);
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < nblocks; ++b) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
    const int end = std::min(n, (b + 1) * kReduceBlock);
    for (int i = b * kReduceBlock; i < end; ++i) {
      g.noalias() += rows.row(i).transpose() * rows.row(i);
      r.noalias() += y[i] * rows.row(i).transpose();
    }
    gpart[b] = std::move(g);
    bpart[b] = std::move(r);
  }
  gram = Eigen::MatrixXd::Zero(m, m);
  rhs = Eigen::VectorXd::Zero(m);
  for (int b = 0; b < nblocks; ++b) { // ordered merge: thread-count invariant
    gram += gpart[b];
    rhs += bpart[b];
  }
}

void sum_sumsq_serial(const Eigen::VectorXd& values, double& sum, double& sumsq) {
  sum = 0.0;
  sumsq = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    sum += values[i];
    sumsq += values[i] * values[i];
  }
}

void sum_sumsq_parallel(const Eigen::VectorXd& values, double& sum, double& sumsq) {
  const int n = static_cast<int>(values.size());
  const int nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> s(nblocks, 0.0), s2(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nblocks; ++b) {
    double bs = 0.0, bs2 = 0.0;
    const int end = std::min(n, (b + 1) * kReduceBlock);
    for (int i = b * kReduceBlock; i < end; ++i) {
      bs += values[i];
      bs2 += values[i] * values[i];
    }
    s[b] = bs;
    s2[b] = bs2;
  }
  sum = 0.0;
  sumsq = 0.0;
  for (int b = 0; b < nblocks; ++b) {
    sum += s[b];
    sumsq += s2[b];
  }
}

} // namespace tenreg::kernels
