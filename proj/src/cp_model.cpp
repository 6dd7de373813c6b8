#include "tenreg/cp_model.hpp"

#include <cmath>

#include "json.hpp"
#include "tenreg/io_util.hpp"

namespace tenreg {

using nlohmann::json;

CpModel::CpModel(ParameterSpace space, int degree,
                 std::vector<Eigen::MatrixXd> factors)
    : space_(std::move(space)),
      bases_(space_, degree),
      degree_(degree),
      factors_(std::move(factors)) {
  if (static_cast<int>(factors_.size()) != space_.dim())
    throw DomainError("CpModel: factor count must equal the space dimension");
  const int rows = degree_ + 1;
  const Eigen::Index R = factors_.empty() ? 0 : factors_[0].cols();
  if (R < 1) throw DomainError("CpModel: rank must be >= 1");
  for (const auto& f : factors_)
    if (f.rows() != rows || f.cols() != R)
      throw DomainError("CpModel: all factors must be (p+1) x R");
}

double CpModel::evaluate(const Eigen::VectorXd& xi) const {
  if (xi.size() != dim()) throw DomainError("evaluate: dimension mismatch");
  const int R = rank();
  Eigen::VectorXd prod = Eigen::VectorXd::Ones(R);
  Eigen::VectorXd phi(degree_ + 1);
  for (int k = 0; k < dim(); ++k) {
    bases_.basis(k).eval_into(xi[k], phi.data());
    prod.array() *= (phi.transpose() * factors_[k]).array().transpose();
  }
  return prod.sum();
}

Eigen::VectorXd CpModel::gradient(const Eigen::VectorXd& xi) const {
  if (xi.size() != dim()) throw DomainError("gradient: dimension mismatch");
  const int d = dim();
  const int R = rank();
  // W(k, r) = phi^(k)^T u_r^(k), D(k, r) the same with differentiated basis.
  Eigen::MatrixXd W(d, R), D(d, R);
  Eigen::VectorXd phi(degree_ + 1), dphi(degree_ + 1);
  for (int k = 0; k < d; ++k) {
    bases_.basis(k).eval_into(xi[k], phi.data());
    bases_.basis(k).eval_deriv_into(xi[k], dphi.data());
    W.row(k) = phi.transpose() * factors_[k];
    D.row(k) = dphi.transpose() * factors_[k];
  }
  // prefix(k, r) = prod_{j<k} W(j, r); suffix likewise for j>k.
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Ones(d + 1, R);
  Eigen::MatrixXd suffix = Eigen::MatrixXd::Ones(d + 1, R);
  for (int k = 0; k < d; ++k)
    prefix.row(k + 1) = prefix.row(k).cwiseProduct(W.row(k));
  for (int k = d - 1; k >= 0; --k)
    suffix.row(k) = suffix.row(k + 1).cwiseProduct(W.row(k));
  Eigen::VectorXd grad(d);
  for (int k = 0; k < d; ++k)
    grad[k] = D.row(k)
                  .cwiseProduct(prefix.row(k))
                  .cwiseProduct(suffix.row(k + 1))
                  .sum();
  return grad;
}

Eigen::MatrixXd CpModel::khatri_rao_row(int k, const Eigen::VectorXd& xi) const {
  if (k < 0 || k >= dim()) throw DomainError("khatri_rao_row: mode out of range");
  const int R = rank();
  Eigen::VectorXd phi(degree_ + 1);
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Ones(R);
  for (int j = 0; j < dim(); ++j) {
    if (j == k) continue;
    bases_.basis(j).eval_into(xi[j], phi.data());
    w.array() *= (phi.transpose() * factors_[j]).array();
  }
  bases_.basis(k).eval_into(xi[k], phi.data());
  return phi * w;
}

Eigen::VectorXd CpModel::group_norms() const {
  const int R = rank();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(R);
  for (const auto& f : factors_) v += f.colwise().squaredNorm().transpose();
  return v.array().sqrt();
}

CpModel CpModel::prune_rank(double tau) const {
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("prune_rank: tau must be in [0,1)");
  const Eigen::VectorXd v = group_norms();
  const double vmax = v.maxCoeff();
  std::vector<int> keep;
  for (int r = 0; r < rank(); ++r)
    if (v[r] >= tau * vmax) keep.push_back(r);
  if (keep.empty()) {
    int arg = 0;
    v.maxCoeff(&arg);
    keep.push_back(arg);
  }
  if (static_cast<int>(keep.size()) == rank()) return *this;
  std::vector<Eigen::MatrixXd> pruned(factors_.size());
  for (size_t k = 0; k < factors_.size(); ++k) {
    pruned[k].resize(degree_ + 1, keep.size());
    for (size_t c = 0; c < keep.size(); ++c)
      pruned[k].col(c) = factors_[k].col(keep[c]);
  }
  CpModel out(space_, degree_, std::move(pruned));
  out.fit_meta = fit_meta;
  return out;
}

DenseTensor CpModel::densify() const {
  const int d = dim();
  const int n = degree_ + 1;
  double logcount = d * std::log10(static_cast<double>(n));
  if (logcount > 7.0)
    throw SizeError("densify: (p+1)^d exceeds the 1e7 entry cap");
  DenseTensor t;
  t.dims.assign(d, n);
  std::ptrdiff_t total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  t.values = Eigen::VectorXd::Zero(total);
  std::vector<int> idx(d, 0);
  for (std::ptrdiff_t flat = 0; flat < total; ++flat) {
    std::ptrdiff_t rem = flat;
    for (int j = 0; j < d; ++j) {
      idx[j] = static_cast<int>(rem % n);
      rem /= n;
    }
    double sum = 0.0;
    for (int r = 0; r < rank(); ++r) {
      double prod = 1.0;
      for (int k = 0; k < d; ++k) prod *= factors_[k](idx[k], r);
      sum += prod;
    }
    t.values[flat] = sum;
  }
  return t;
}

void save_model(const CpModel& model, const std::string& path) {
  json j;
  j["version"] = 1;
  j["degree"] = model.degree();
  j["rank"] = model.rank();
  json marg = json::array();
  for (const auto& m : model.space().marginals()) {
    if (m.kind == Marginal::Kind::Uniform)
      marg.push_back({{"kind", "uniform"}, {"lo", m.a}, {"hi", m.b}});
    else
      marg.push_back({{"kind", "gaussian"}, {"mean", m.a}, {"stddev", m.b}});
  }
  j["marginals"] = marg;
  json factors = json::array();
  for (int k = 0; k < model.dim(); ++k) {
    json fk = json::array();
    for (int i = 0; i <= model.degree(); ++i) {
      json row = json::array();
      for (int r = 0; r < model.rank(); ++r) row.push_back(model.factor(k)(i, r));
      fk.push_back(row);
    }
    factors.push_back(fk);
  }
  j["factors"] = factors;
  j["fit_meta"] = {{"seed", model.fit_meta.seed},
                   {"q", model.fit_meta.q},
                   {"lambda0", model.fit_meta.lambda0},
                   {"objective_trace_tail", model.fit_meta.objective_trace_tail}};
  write_file_atomic(path, j.dump(2) + "\n");
}

CpModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  try {
    const int degree = j.at("degree").get<int>();
    const int rank = j.at("rank").get<int>();
    std::vector<Marginal> marginals;
    for (const auto& m : j.at("marginals")) {
      const std::string kind = m.at("kind").get<std::string>();
      if (kind == "uniform")
        marginals.push_back(Marginal::uniform(m.at("lo").get<double>(),
                                              m.at("hi").get<double>()));
      else if (kind == "gaussian")
        marginals.push_back(Marginal::gaussian(m.at("mean").get<double>(),
                                               m.at("stddev").get<double>()));
      else
        throw ConfigError(path + ": unknown marginal kind '" + kind + "'");
    }
    const auto& jf = j.at("factors");
    std::vector<Eigen::MatrixXd> factors;
    for (const auto& fk : jf) {
      Eigen::MatrixXd f(degree + 1, rank);
      if (static_cast<int>(fk.size()) != degree + 1)
        throw ConfigError(path + ": factor row count mismatch");
      for (int i = 0; i <= degree; ++i)
        for (int r = 0; r < rank; ++r) f(i, r) = fk[i][r].get<double>();
      factors.push_back(std::move(f));
    }
    CpModel model(ParameterSpace(std::move(marginals)), degree, std::move(factors));
    if (j.contains("fit_meta")) {
      const auto& fm = j["fit_meta"];
      model.fit_meta.seed = fm.value("seed", std::uint64_t{0});
      model.fit_meta.q = fm.value("q", 0.0);
      model.fit_meta.lambda0 = fm.value("lambda0", 0.0);
      if (fm.contains("objective_trace_tail"))
        model.fit_meta.objective_trace_tail =
            fm["objective_trace_tail"].get<std::vector<double>>();
    }
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": malformed model file: " + e.what());
  }
}

} // namespace tenreg
