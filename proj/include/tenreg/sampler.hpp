#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "tenreg/cp_model.hpp"
#include "tenreg/sample_set.hpp"

namespace tenreg {

/// Monte Carlo estimate of the Voronoi cell volumes of a set of centers in
/// the unit cube.
struct VoronoiEstimate {
  std::vector<long> counts;      // hits per cell; sums to M
  std::vector<int> assignments;  // MC sample index -> cell index
  Eigen::MatrixXd mc_points;     // the M x d uniform samples, generation order
  long total() const { return static_cast<long>(assignments.size()); }
};

/// A scored candidate produced by the exploitation stage.
struct CandidateScore {
  Eigen::VectorXd point_unit;
  Eigen::VectorXd point_phys;
  double gamma = 0.0;
};

/// Row of the per-round sampling log.
struct SelectionRecord {
  int cell_rank = 0;         // 0 = largest estimated cell
  int cell_center_index = 0; // row of the design point owning the cell
  double est_volume = 0.0;   // fraction of MC mass in the cell
  double chosen_gamma = 0.0;
};

/// Assigns M uniform samples to their nearest center (Euclidean distance in
/// the unit cube; ties to the lowest center index) and tallies per-cell hits.
VoronoiEstimate estimate_voronoi(const Eigen::MatrixXd& centers_unit, long m,
                                 std::uint64_t seed);

/// First-order Taylor remainder of the surrogate at xi around a:
/// |yhat(xi) - yhat(a) - grad yhat(a)^T (xi - a)|.
double nonlinearity(const CpModel& model, const Eigen::VectorXd& xi,
                    const Eigen::VectorXd& a);

/// Default Monte Carlo budget: 100 per existing design point, capped at 1e6.
long default_mc_count(int n_centers, int m_factor = 100);

/// Two-stage batch selection: ranks cells by estimated volume, then inside
/// each of the top-K cells picks the candidate with the largest nonlinearity
/// measure around that cell's center. Returns K new points (unit rows) and
/// fills `log` with one record per chosen cell.
Eigen::MatrixXd select_next(const SampleSet& data, const CpModel& model,
                            const ParameterSpace& space, int k_batch, long m,
                            std::uint64_t seed,
                            std::vector<SelectionRecord>* log = nullptr);

/// Sampling-log CSV: round,cell_rank,cell_center_index,est_volume,chosen_gamma.
void append_sampling_log(const std::string& path, int round,
                         const std::vector<SelectionRecord>& records);

} // namespace tenreg
