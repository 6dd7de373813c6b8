#include "tenreg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tenreg/io_util.hpp"
#include "tenreg/kernels.hpp"
#include "tenreg/rng.hpp"

namespace tenreg {

long default_mc_count(int n_centers, int m_factor) {
  const long m = static_cast<long>(m_factor) * n_centers;
  return std::min<long>(m, 1000000L);
}

VoronoiEstimate estimate_voronoi(const Eigen::MatrixXd& centers_unit, long m,
                                 std::uint64_t seed) {
  const int n = static_cast<int>(centers_unit.rows());
  if (n < 1) throw SamplerError("estimate_voronoi requires at least one center");
  if (m < 1) throw SamplerError("estimate_voronoi requires m >= 1");

  VoronoiEstimate est;
  est.mc_points = mc_uniform(static_cast<int>(m),
                             static_cast<int>(centers_unit.cols()),
                             derive_seed(seed, Stream::Voronoi));
  kernels::nearest_center_parallel(est.mc_points, centers_unit, est.assignments);
  est.counts.assign(n, 0);
  for (int a : est.assignments) ++est.counts[a];
  return est;
}

double nonlinearity(const CpModel& model, const Eigen::VectorXd& xi,
                    const Eigen::VectorXd& a) {
  const double linearized =
      model.evaluate(a) + model.gradient(a).dot(xi - a);
  return std::abs(model.evaluate(xi) - linearized);
}

Eigen::MatrixXd select_next(const SampleSet& data, const CpModel& model,
                            const ParameterSpace& space, int k_batch, long m,
                            std::uint64_t seed,
                            std::vector<SelectionRecord>* log) {
  if (k_batch < 1) throw SamplerError("select_next requires a batch size >= 1");
  const int n = data.size();
  if (n < 1) throw SamplerError("select_next requires existing design points");
  if (k_batch > n)
    throw SamplerError("select_next: batch size exceeds the number of cells");

  const VoronoiEstimate est = estimate_voronoi(data.unit_points, m, seed);

  // Cells ordered by estimated volume, ties to the lower center index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return est.counts[a] > est.counts[b];
  });

  // Candidate lists per cell in MC generation order.
  std::vector<std::vector<int>> members(n);
  for (std::size_t i = 0; i < est.assignments.size(); ++i)
    members[est.assignments[i]].push_back(static_cast<int>(i));

  Eigen::MatrixXd chosen(k_batch, data.dim());
  if (log) log->clear();
  int picked = 0;
  for (int rank_pos = 0; rank_pos < n && picked < k_batch; ++rank_pos) {
    const int cell = order[rank_pos];
    if (members[cell].empty()) continue; // empty cell: fall through to next rank
    const Eigen::VectorXd center_phys = data.phys_points.row(cell);
    const double value_at_center = model.evaluate(center_phys);
    const Eigen::VectorXd grad_at_center = model.gradient(center_phys);

    double best_gamma = -1.0;
    int best_mc = -1;
    for (int mc_idx : members[cell]) {
      const Eigen::VectorXd unit = est.mc_points.row(mc_idx);
      // Skip exact duplicates of existing design points.
      bool duplicate = false;
      for (int i = 0; i < n && !duplicate; ++i)
        duplicate = (data.unit_points.row(i) == unit.transpose());
      if (duplicate) continue;
      const Eigen::VectorXd phys = space.inverse_transform(unit);
      const double gamma =
          std::abs(model.evaluate(phys) - value_at_center -
                   grad_at_center.dot(phys - center_phys));
      if (gamma > best_gamma) { // strict: ties keep the earliest candidate
        best_gamma = gamma;
        best_mc = mc_idx;
      }
    }
    if (best_mc < 0) continue;

    chosen.row(picked) = est.mc_points.row(best_mc);
    if (log)
      log->push_back({rank_pos, cell,
                      static_cast<double>(est.counts[cell]) /
                          static_cast<double>(est.total()),
                      best_gamma});
    ++picked;
  }
  if (picked < k_batch)
    throw SamplerError("select_next: only " + std::to_string(picked) +
                       " non-empty cells available for a batch of " +
                       std::to_string(k_batch));
  return chosen;
}

void append_sampling_log(const std::string& path, int round,
                         const std::vector<SelectionRecord>& records) {
  std::ostringstream out;
  std::ifstream existing(path);
  const bool fresh = !existing.good();
  if (fresh) out << "round,cell_rank,cell_center_index,est_volume,chosen_gamma\n";
  for (const auto& r : records)
    out << round << "," << r.cell_rank << "," << r.cell_center_index << ","
        << format_double(r.est_volume) << "," << format_double(r.chosen_gamma)
        << "\n";
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot append to " + path);
  f << out.str();
}

} // namespace tenreg
