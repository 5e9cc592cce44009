#ifndef COMBUSTION1D_ORACLE_HPP
#define COMBUSTION1D_ORACLE_HPP

#include <array>
#include <vector>

#include "combustion1d/config.hpp"
#include "combustion1d/trajectory.hpp"

namespace combustion1d {

/// Forward Euler on n * refine cells with every term explicit and
/// dt <= 0.2 min(dx^2 min(u, u^2)/max(mu, kappa, d), dx/c, 1/(K sup phi)).
/// Snapshots land on the same times as the configured run. Throws SolverAbort
/// if u or theta leaves (0, inf).
[[nodiscard]] Trajectory explicit_reference_run(const RunConfig& config, int refine);

/// Errors of one snapshot; fields in the order u, v, theta, z.
struct ErrorRow {
  double t = 0.0;
  std::array<double, 4> l2{};
  std::array<double, 4> max{};
  [[nodiscard]] double l2_total() const noexcept;
};

struct ErrorTable {
  int cells = 0; ///< resolution the errors are measured on
  std::vector<ErrorRow> rows;
  [[nodiscard]] const ErrorRow& final() const { return rows.back(); }
};

/// Per-snapshot errors after restricting the finer trajectory to the coarser
/// grid (cell averages, every r-th node). Throws std::invalid_argument unless
/// domain, boundary and snapshot times agree and the cell ratio is an integer.
[[nodiscard]] ErrorTable compare(const Trajectory& a, const Trajectory& b);

/// log(e_i / e_{i+1}) / log(n_{i+1} / n_i) for consecutive entries.
[[nodiscard]] std::vector<double> observed_orders(const std::vector<int>& cells, const std::vector<double>& errors);

/// L2 distance of two states on the same mesh, all four fields.
[[nodiscard]] double l2_distance(const State& a, const State& b, const Mesh& mesh);

struct LadderResult {
  std::vector<int> cells;
  std::vector<ErrorTable> tables;
  std::vector<double> errors; ///< final-time combined L2 error against the reference
  std::vector<double> orders;
  int reference_cells = 0;
};

/// Runs the main solver at every rung and the explicit oracle at
/// refine * max(ladder), concurrently on up to `workers` threads. The step
/// ceiling of each rung scales with its dx: dt_max * ladder[0] / n.
[[nodiscard]] LadderResult convergence_ladder(const RunConfig& config, const std::vector<int>& ladder, int refine,
                                              unsigned workers = 1);

struct MollificationRow {
  double eta = 0.0;           ///< 0 for the raw rate
  double diff_next = 0.0;     ///< L2 distance to the next run in the sequence at T
  double diff_raw = 0.0;      ///< L2 distance to the raw-rate run at T
  double sup_theta = 0.0;
};

struct MollificationStudy {
  std::vector<MollificationRow> rows; ///< etas in order, then the raw run
  bool cauchy = false;                ///< successive eta differences strictly decrease
  bool approaches_raw = false;        ///< distance to the raw run strictly decreases
  double sup_theta_spread = 0.0;      ///< (max - min) / min of sup theta over all runs
};

/// Main solver with phi_eta for each eta (strictly decreasing, positive) and with
/// the raw rate. Throws std::invalid_argument on a bad eta list.
[[nodiscard]] MollificationStudy mollification_study(const RunConfig& config, const std::vector<double>& etas,
                                                     unsigned workers = 1);

} // namespace combustion1d

#endif // COMBUSTION1D_ORACLE_HPP
