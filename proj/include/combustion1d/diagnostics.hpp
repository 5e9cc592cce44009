#ifndef COMBUSTION1D_DIAGNOSTICS_HPP
#define COMBUSTION1D_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "combustion1d/grid.hpp"
#include "combustion1d/model.hpp"
#include "combustion1d/trajectory.hpp"

namespace combustion1d {

// ---------------------------------------------------------------------------
// Pointwise functionals of a single state.
// ---------------------------------------------------------------------------

/// psi(s) = s - 1 - log s, convex with its minimum 0 at s = 1.
[[nodiscard]] double psi(double s) noexcept;

/// int a psi(u) + psi(theta) + vbar^2/2 dx, vbar the cell average of v.
/// Throws std::domain_error on non-positive u or theta.
[[nodiscard]] double entropy(const State& state, const Mesh& mesh, const FluidParams& params);

/// int mu v_x^2/(u theta) + kappa theta_x^2/(u theta^2) dx. The conduction
/// part lives on nodes and uses the boundary ghosts of `bc`.
[[nodiscard]] double dissipation(const State& state, const Mesh& mesh, const FluidParams& params,
                                 const BoundaryCondition& bc = {});

/// int K phi(theta) Z dx.
[[nodiscard]] double reaction_integral(const State& state, const Mesh& mesh, const FluidParams& params,
                                       const ReactionRate& rate);

/// int Z^beta dx with Z clipped at zero.
[[nodiscard]] double z_power_integral(const State& state, const Mesh& mesh, double beta);

/// int (theta - 2)_+^2 + v^4 dx.
[[nodiscard]] double level_integral(const State& state, const Mesh& mesh);

/// int (1 + theta + v^2) v_x^2 + theta_x^2 dx.
[[nodiscard]] double crucial_integrand(const State& state, const Mesh& mesh, const BoundaryCondition& bc = {});

/// Net entropy flux entering through the two ends (right minus left value of
/// the flux (mu v v_x - a v theta)/u + (1 - 1/theta) kappa theta_x/u + a v).
[[nodiscard]] double entropy_inflow(const State& state, const Mesh& mesh, const FluidParams& params,
                                    const BoundaryCondition& bc);

/// Effective viscous flux (mu v_x - a theta)/u on nodes, with v_x, theta and u
/// averaged to nodes (boundary nodes take the adjacent cell).
[[nodiscard]] std::vector<double> effective_viscous_flux(const State& state, const Mesh& mesh,
                                                         const FluidParams& params);

// ---------------------------------------------------------------------------
// Verdicts over trajectories.
// ---------------------------------------------------------------------------

enum class Status { Pass, Fail, Inconclusive };
[[nodiscard]] std::string_view to_string(Status s) noexcept;

/// One audited inequality: passes when value <= bound + tolerance. `slack` is
/// bound - value, so a negative slack within the tolerance still passes.
struct Verdict {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  Status status = Status::Inconclusive;
  std::string note;
  std::vector<std::pair<std::string, double>> details;

  [[nodiscard]] bool ok() const noexcept { return status != Status::Fail; }
  [[nodiscard]] std::optional<double> detail(std::string_view key) const;
};

/// Standard comparison verdict: value <= bound + tolerance.
[[nodiscard]] Verdict compare_verdict(std::string name, double value, double bound, double tolerance);

/// Budget tolerance C_tol (dx + max dt) T of the run.
[[nodiscard]] double budget_tolerance(const Trajectory& traj);

/// max_m [E(t_m) + sum D dt - inflow] against E(0) + q E0 (running form).
/// details: literal (sup E + total D), consistency (max deviation from the
/// exact discrete balance), overshoot, e0.
[[nodiscard]] Verdict entropy_budget(const Trajectory& traj);

/// int Z(T) + sum int K phi Z dt against E0; the defect must match the
/// recorded species out-flux. details: defect, outflux, mismatch.
[[nodiscard]] Verdict reactant_budget(const Trajectory& traj);

/// Largest excursion of Z outside [0, 1] over all snapshots.
[[nodiscard]] Verdict z_bounds(const Trajectory& traj);

/// Largest increase of int Z^beta between consecutive snapshots.
[[nodiscard]] Verdict z_lbeta(const Trajectory& traj, double beta);

struct LocalisationResult {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double max_jensen_gap = 0.0; ///< max of psi(int u) - int psi(u) (same for theta)
  int intervals_checked = 0;
  int missing_points = 0;      ///< (t, k) pairs without a cell inside [gamma1, gamma2]
  Verdict verdict;
};
[[nodiscard]] LocalisationResult localisation(const Trajectory& traj);

struct RepresentationResult {
  int k = 0;
  std::vector<double> times;
  std::vector<double> residuals; ///< relative max-norm residual over I_{k-1}
  double max_residual = 0.0;
  Verdict verdict;
};
/// Rebuilds u on I_{k-1} from B, Y and the temperature history and compares
/// with the stored u. Throws std::out_of_range if I_{k-1} or I_k leaves the mesh.
[[nodiscard]] RepresentationResult representation_check(const Trajectory& traj, int k);
[[nodiscard]] int default_representation_interval(const RunConfig& config);

struct CrucialHistory {
  std::vector<double> times;
  std::vector<double> values; ///< F(t_m)
  Verdict verdict;            ///< saturation F(T) - F(T/2) <= saturation * F(T/2)
};
[[nodiscard]] CrucialHistory crucial_estimate(const Trajectory& traj);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

struct BandsResult {
  Band u_full, theta_full, u_half, theta_half;
  double zeta_max = 0.0;
  double zeta_growth = 0.0; ///< smallest C >= 1 with max zeta(s <= t) <= C e^{C t}
  std::vector<double> h1;
  Verdict band_stability;
  Verdict decay;
  Verdict theta_lower;
};
[[nodiscard]] BandsResult bands_and_decay(const Trajectory& traj);

/// Band of a field over all snapshots with t <= t_end.
[[nodiscard]] Band band(const Trajectory& traj, Field field, double t_end);

/// v = 0 at both ends and the wall temperature condition of a half line.
[[nodiscard]] Verdict endpoint_conditions(const Trajectory& traj);

struct SnapshotRecord {
  double t = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;
  double reactant_mass = 0.0;
  double cumulative_reaction = 0.0;
  double u_min = 0.0, u_max = 0.0;
  double theta_min = 0.0, theta_max = 0.0;
  double h1_dev = 0.0;
  double l2_dev = 0.0;
  double zeta_max = 0.0;
  double crucial = 0.0;
};

struct DiagnosticsReport {
  std::vector<SnapshotRecord> records;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;

  [[nodiscard]] bool passed() const noexcept;
  [[nodiscard]] const Verdict* find(std::string_view name) const noexcept;
};

/// Runs every diagnostic on the trajectory. Pure: the same trajectory yields
/// a bit-identical report.
[[nodiscard]] DiagnosticsReport diagnose(const Trajectory& traj);

} // namespace combustion1d

#endif // COMBUSTION1D_DIAGNOSTICS_HPP
