#include "tenreg/solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tenreg/io_util.hpp"
#include "tenreg/kernels.hpp"
#include "tenreg/rng.hpp"

namespace tenreg {

void SolverConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("SolverConfig: q must be in (0,1]");
  if (!(lambda0 > 0.0)) throw DomainError("SolverConfig: lambda0 must be > 0");
  if (rank_init < 1) throw DomainError("SolverConfig: rank_init must be >= 1");
  if (!(eta_floor > 0.0)) throw DomainError("SolverConfig: eta_floor must be > 0");
  if (max_iters < 1) throw DomainError("SolverConfig: max_iters must be >= 1");
  if (!(tol > 0.0)) throw DomainError("SolverConfig: tol must be > 0");
  if (!(prune_tau >= 0.0 && prune_tau < 1.0))
    throw DomainError("SolverConfig: prune_tau must be in [0,1)");
}

double lq_norm(const Eigen::VectorXd& v, double q) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < v.size(); ++r) s += std::pow(std::abs(v[r]), q);
  return s == 0.0 ? 0.0 : std::pow(s, 1.0 / q);
}

Eigen::VectorXd update_eta(const Eigen::VectorXd& group_norms, double q, double eps) {
  const double norm = lq_norm(group_norms, q);
  Eigen::VectorXd eta(group_norms.size());
  if (norm == 0.0) {
    eta.setConstant(eps);
    return eta;
  }
  const double scale = std::pow(norm, q - 1.0);
  for (Eigen::Index r = 0; r < eta.size(); ++r)
    eta[r] = std::pow(group_norms[r], 2.0 - q) * scale + eps;
  return eta;
}

double eta_surrogate(const Eigen::VectorXd& group_norms, const Eigen::VectorXd& eta,
                     double q) {
  const double beta = q / (2.0 - q);
  double quad = 0.0;
  double norm_beta = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double v = group_norms[r];
    if (v != 0.0 || eta[r] != 0.0) quad += v * v / eta[r];
    norm_beta += std::pow(eta[r], beta);
  }
  norm_beta = norm_beta == 0.0 ? 0.0 : std::pow(norm_beta, 1.0 / beta);
  return 0.5 * quad + 0.5 * norm_beta;
}

double update_lambda(double lambda0, const Eigen::VectorXd& eta) {
  if (eta.size() == 0) throw DomainError("update_lambda: eta must be nonempty");
  return lambda0 * eta.maxCoeff();
}

double objective(const CpModel& model, const SampleSet& data,
                 const Eigen::VectorXd& eta, double lambda, double q) {
  double h = 0.0;
  for (int n = 0; n < data.size(); ++n) {
    const double r = data.outputs[n] - model.evaluate(data.phys_points.row(n));
    h += r * r;
  }
  return 0.5 * h + lambda * eta_surrogate(model.group_norms(), eta, q);
}

Eigen::MatrixXd init_first_fit(const SampleSet& data, const BasisBundle& bases,
                               int k, int rank) {
  const int p1 = bases.degree() + 1;
  Eigen::MatrixXd rows(data.size(), rank * p1);
  Eigen::VectorXd phi(p1);
  for (int n = 0; n < data.size(); ++n) {
    bases.basis(k).eval_into(data.phys_points(n, k), phi.data());
    for (int r = 0; r < rank; ++r) rows.row(n).segment(r * p1, p1) = phi;
  }
  return rows;
}

namespace {

// Solves (G + lambda * Ltilde) x = b by Cholesky with one jitter retry.
// Ltilde is diag(1/eta) (x) I for the group-sparse mode, the identity for
// fixed-rank ridge.
Eigen::VectorXd solve_penalized(Eigen::MatrixXd gram, const Eigen::VectorXd& rhs,
                                const Eigen::VectorXd& eta, double lambda,
                                SolverMode mode, int p1) {
  const int m = static_cast<int>(gram.rows());
  if (mode == SolverMode::FixedRankRidge) {
    gram.diagonal().array() += lambda;
  } else {
    for (int r = 0; r * p1 < m; ++r)
      gram.diagonal().segment(r * p1, p1).array() += lambda / eta[r];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = llt.solve(rhs);
    if (x.allFinite()) return x;
  }
  const double jitter = 1e-10 * gram.trace() / m;
  gram.diagonal().array() += jitter;
  llt.compute(gram);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = llt.solve(rhs);
    if (x.allFinite()) return x;
  }
  throw SolverError("factor update: normal equations not positive definite "
                    "after jitter retry");
}

// Cached per-sample quantities for the BCD sweeps.
struct FitCache {
  int n = 0, d = 0, p1 = 0, rank = 0;
  std::vector<double> phi; // n * d * p1, basis values per sample and mode
  std::vector<double> w;   // n * d * rank, row products phi^T U per mode

  const double* phi_at(int sample, int k) const {
    return phi.data() + (static_cast<std::ptrdiff_t>(sample) * d + k) * p1;
  }
  double* w_at(int sample, int k) {
    return w.data() + (static_cast<std::ptrdiff_t>(sample) * d + k) * rank;
  }
  const double* w_at(int sample, int k) const {
    return w.data() + (static_cast<std::ptrdiff_t>(sample) * d + k) * rank;
  }

  void build(const SampleSet& data, const BasisBundle& bases,
             const std::vector<Eigen::MatrixXd>& factors) {
    n = data.size();
    d = static_cast<int>(factors.size());
    p1 = bases.degree() + 1;
    rank = static_cast<int>(factors[0].cols());
    phi.resize(static_cast<std::size_t>(n) * d * p1);
    w.resize(static_cast<std::size_t>(n) * d * rank);
#pragma omp parallel for schedule(static)
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < d; ++k) {
        double* out = phi.data() + (static_cast<std::ptrdiff_t>(s) * d + k) * p1;
        bases.basis(k).eval_into(data.phys_points(s, k), out);
      }
    }
    for (int k = 0; k < d; ++k) refresh_mode(k, factors[k]);
  }

  void refresh_mode(int k, const Eigen::MatrixXd& factor) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < n; ++s) {
      Eigen::Map<const Eigen::VectorXd> phis(phi_at(s, k), p1);
      Eigen::Map<Eigen::RowVectorXd> ws(w_at(s, k), rank);
      ws = phis.transpose() * factor;
    }
  }

  // Hadamard product over all modes but k for one sample.
  void row_product_skip(int sample, int k, double* out) const {
    for (int r = 0; r < rank; ++r) out[r] = 1.0;
    for (int j = 0; j < d; ++j) {
      if (j == k) continue;
      const double* wj = w_at(sample, j);
      for (int r = 0; r < rank; ++r) out[r] *= wj[r];
    }
  }

  double predict(int sample) const {
    double sum = 0.0;
    for (int r = 0; r < rank; ++r) {
      double prod = 1.0;
      for (int j = 0; j < d; ++j) prod *= w_at(sample, j)[r];
      sum += prod;
    }
    return sum;
  }

  double residual_half_sq(const SampleSet& data) const {
    double h = 0.0;
    for (int s = 0; s < n; ++s) {
      const double r = data.outputs[s] - predict(s);
      h += r * r;
    }
    return 0.5 * h;
  }
};

Eigen::VectorXd group_norms_of(const std::vector<Eigen::MatrixXd>& factors) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(factors[0].cols());
  for (const auto& f : factors) v += f.colwise().squaredNorm().transpose();
  return v.array().sqrt();
}

double objective_from_cache(const FitCache& cache, const SampleSet& data,
                            const std::vector<Eigen::MatrixXd>& factors,
                            const Eigen::VectorXd& eta, double lambda, double q,
                            SolverMode mode) {
  const double h = cache.residual_half_sq(data);
  if (mode == SolverMode::FixedRankRidge) {
    double fro = 0.0;
    for (const auto& f : factors) fro += f.squaredNorm();
    return h + 0.5 * lambda * fro;
  }
  return h + lambda * eta_surrogate(group_norms_of(factors), eta, q);
}

} // namespace

Eigen::MatrixXd update_factor(const CpModel& model, const SampleSet& data, int k,
                              const Eigen::VectorXd& eta, double lambda) {
  if (data.size() < 1 || !data.fully_labeled())
    throw DomainError("update_factor requires labeled data");
  const int p1 = model.degree() + 1;
  const int R = model.rank();
  Eigen::MatrixXd rows(data.size(), R * p1);
  for (int n = 0; n < data.size(); ++n) {
    const Eigen::MatrixXd slab = model.khatri_rao_row(k, data.phys_points.row(n));
    rows.row(n) = Eigen::Map<const Eigen::VectorXd>(slab.data(), slab.size());
  }
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
  kernels::gram_accumulate_parallel(rows, data.outputs, gram, rhs);
  const Eigen::VectorXd sol =
      solve_penalized(std::move(gram), rhs, eta, lambda, SolverMode::GroupSparse, p1);
  return Eigen::Map<const Eigen::MatrixXd>(sol.data(), p1, R);
}

FitResult fit(const SampleSet& data, const ParameterSpace& space,
              const SolverConfig& config, std::uint64_t seed,
              const std::optional<CpModel>& warm_start, int degree,
              const BlockObjectiveHook& hook) {
  config.validate();
  if (data.size() < 1) throw DomainError("fit requires at least one sample");
  if (!data.fully_labeled()) {
    const auto missing = data.unlabeled_rows();
    throw DomainError("fit requires labeled data; " +
                      std::to_string(missing.size()) + " rows lack outputs");
  }
  if (data.dim() != space.dim()) throw DomainError("fit: dimension mismatch");

  const int d = space.dim();
  const int p1 = degree + 1;
  const bool group_sparse = config.mode == SolverMode::GroupSparse;
  BasisBundle bases(space, degree);

  std::vector<Eigen::MatrixXd> factors;
  int rank = 0;
  const bool cold = !warm_start.has_value();
  if (warm_start) {
    if (warm_start->dim() != d || warm_start->degree() != degree)
      throw DomainError("fit: warm start model shape mismatch");
    factors = warm_start->factors();
    rank = warm_start->rank();
  } else {
    rank = config.rank_init;
    // Ones in the constant row plus a small seeded perturbation. Without the
    // perturbation every column of every mode stays identical through all
    // updates and the group-sparsity term cannot differentiate the rank-1
    // components (the all-equal configuration is a fixed point of the sweep).
    Rng rng(derive_seed(seed, Stream::SolverInit));
    factors.assign(d, Eigen::MatrixXd::Zero(p1, rank));
    for (int k = 0; k < d; ++k) {
      factors[k].row(0).setOnes();
      for (int i = 0; i < p1; ++i)
        for (int r = 0; r < rank; ++r)
          factors[k](i, r) += 1e-2 * standard_normal_quantile(rng.uniform_open());
    }
  }

  FitCache cache;
  cache.build(data, bases, factors);

  Eigen::VectorXd eta;
  if (group_sparse) {
    if (cold) {
      eta = Eigen::VectorXd::Ones(rank);
    } else {
      const Eigen::VectorXd v = group_norms_of(factors);
      eta = update_eta(v, config.q, config.eta_floor * (1.0 + v.maxCoeff()));
    }
  } else {
    eta = Eigen::VectorXd::Ones(rank);
  }
  double lambda = group_sparse ? update_lambda(config.lambda0, eta) : config.lambda0;

  SolverState state;
  state.eta = eta;
  state.lambda = lambda;

  Eigen::MatrixXd rows(data.size(), rank * p1);
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;

  int iter = 0;
  for (iter = 1; iter <= config.max_iters; ++iter) {
    const std::vector<Eigen::MatrixXd> previous = factors;

    for (int k = 0; k < d; ++k) {
      if (cold && iter == 1 && k == 0) {
        rows = init_first_fit(data, bases, k, rank);
      } else {
#pragma omp parallel
        {
          std::vector<double> wtilde(rank);
#pragma omp for schedule(static)
          for (int s = 0; s < data.size(); ++s) {
            cache.row_product_skip(s, k, wtilde.data());
            const double* phis = cache.phi_at(s, k);
            for (int r = 0; r < rank; ++r)
              for (int i = 0; i < p1; ++i)
                rows(s, r * p1 + i) = phis[i] * wtilde[r];
          }
        }
      }
      kernels::gram_accumulate_parallel(rows, data.outputs, gram, rhs);
      const Eigen::VectorXd sol =
          solve_penalized(gram, rhs, eta, lambda, config.mode, p1);
      factors[k] = Eigen::Map<const Eigen::MatrixXd>(sol.data(), p1, rank);
      cache.refresh_mode(k, factors[k]);
      if (hook)
        hook(iter, k,
             objective_from_cache(cache, data, factors, eta, lambda, config.q,
                                  config.mode));
    }

    Eigen::VectorXd v = group_norms_of(factors);
    if (group_sparse) {
      eta = update_eta(v, config.q, config.eta_floor * (1.0 + v.maxCoeff()));
      if (hook)
        hook(iter, d,
             objective_from_cache(cache, data, factors, eta, lambda, config.q,
                                  config.mode));
    }

    state.objective_trace.push_back(objective_from_cache(
        cache, data, factors, eta, lambda, config.q, config.mode));
    const double vmax = v.maxCoeff();
    int effective = 0;
    for (int r = 0; r < rank; ++r)
      if (v[r] >= config.prune_tau * vmax) ++effective;
    state.rank_trace.push_back(effective);
    state.lambda_trace.push_back(lambda);
    state.max_eta_trace.push_back(eta.maxCoeff());

    if (group_sparse) lambda = update_lambda(config.lambda0, eta);

    double max_change = 0.0;
    for (int k = 0; k < d; ++k) {
      const double change = (factors[k] - previous[k]).norm() /
                            (1.0 + previous[k].norm());
      max_change = std::max(max_change, change);
    }
    if (max_change < config.tol) {
      state.converged = true;
      break;
    }
  }
  state.iters = std::min(iter, config.max_iters);
  state.eta = eta;
  state.lambda = lambda;

  CpModel model(space, degree, std::move(factors));
  model.fit_meta.seed = seed;
  model.fit_meta.q = config.q;
  model.fit_meta.lambda0 = config.lambda0;
  const std::size_t tail = std::min<std::size_t>(10, state.objective_trace.size());
  model.fit_meta.objective_trace_tail.assign(
      state.objective_trace.end() - tail, state.objective_trace.end());

  if (group_sparse && config.prune_tau > 0.0)
    model = model.prune_rank(config.prune_tau);

  return {std::move(model), std::move(state)};
}

namespace {

SampleSet take_rows(const SampleSet& data, const std::vector<int>& idx) {
  SampleSet out;
  out.unit_points.resize(idx.size(), data.dim());
  out.phys_points.resize(idx.size(), data.dim());
  out.outputs.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.unit_points.row(i) = data.unit_points.row(idx[i]);
    out.phys_points.row(i) = data.phys_points.row(idx[i]);
    out.outputs[i] = data.outputs[idx[i]];
  }
  return out;
}

} // namespace

double cross_validate_lambda0(const SampleSet& data, const ParameterSpace& space,
                              const SolverConfig& config, std::uint64_t seed,
                              int degree) {
  constexpr int kFolds = 5;
  constexpr int kGrid = 7;
  if (data.size() < 2 * kFolds)
    throw DomainError("cross_validate_lambda0 requires at least 10 samples");

  Rng rng(derive_seed(seed, Stream::CrossValidation));
  std::vector<int> perm(data.size());
  for (int i = 0; i < data.size(); ++i) perm[i] = i;
  for (int i = data.size() - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  double best_lambda0 = 0.0;
  double best_rmse = std::numeric_limits<double>::infinity();
  for (int g = 0; g < kGrid; ++g) {
    const double lambda0 = std::pow(10.0, -4.0 + 5.0 * g / (kGrid - 1));
    double sq_sum = 0.0;
    int count = 0;
    for (int fold = 0; fold < kFolds; ++fold) {
      std::vector<int> train, val;
      for (int i = 0; i < data.size(); ++i)
        (i % kFolds == fold ? val : train).push_back(perm[i]);
      SolverConfig fold_cfg = config;
      fold_cfg.lambda0 = lambda0;
      const SampleSet train_set = take_rows(data, train);
      const SampleSet val_set = take_rows(data, val);
      const FitResult res =
          fit(train_set, space, fold_cfg,
              derive_seed(seed, {static_cast<std::uint64_t>(Stream::CrossValidation),
                                 static_cast<std::uint64_t>(g * kFolds + fold)}),
              std::nullopt, degree);
      for (int i = 0; i < val_set.size(); ++i) {
        const double r =
            val_set.outputs[i] - res.model.evaluate(val_set.phys_points.row(i));
        sq_sum += r * r;
        ++count;
      }
    }
    const double rmse = std::sqrt(sq_sum / count);
    if (rmse < best_rmse) {
      best_rmse = rmse;
      best_lambda0 = lambda0;
    }
  }
  return best_lambda0;
}

void write_fit_log(const SolverState& state, const std::string& path) {
  std::ostringstream out;
  out << "iter,objective,rank,lambda,max_eta\n";
  for (std::size_t i = 0; i < state.objective_trace.size(); ++i) {
    out << (i + 1) << "," << format_double(state.objective_trace[i]) << ","
        << state.rank_trace[i] << "," << format_double(state.lambda_trace[i]) << ","
        << format_double(state.max_eta_trace[i]) << "\n";
  }
  write_file_atomic(path, out.str());
}

} // namespace tenreg
