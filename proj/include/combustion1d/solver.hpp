#ifndef COMBUSTION1D_SOLVER_HPP
#define COMBUSTION1D_SOLVER_HPP

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "combustion1d/config.hpp"
#include "combustion1d/grid.hpp"
#include "combustion1d/model.hpp"
#include "combustion1d/trajectory.hpp"

namespace combustion1d {

/// Tridiagonal system; row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
  [[nodiscard]] bool strictly_dominant() const noexcept;
  /// Thomas algorithm. Throws std::domain_error on a zero pivot.
  [[nodiscard]] std::vector<double> solve(std::vector<double> rhs) const;
};

/// Raised when a step cannot be completed even after max_halvings halvings.
class SolverAbort : public std::runtime_error {
public:
  SolverAbort(const std::string& what, double time, Field field)
      : std::runtime_error(what), time_(time), field_(field) {}
  [[nodiscard]] double time() const noexcept { return time_; }
  [[nodiscard]] Field field() const noexcept { return field_; }

private:
  double time_;
  Field field_;
};

/// Sub-steps. Each returns the updated field and leaves its input untouched.

/// u + dt v_x with the velocity already in `state`.
[[nodiscard]] std::vector<double> step_mass(const State& state, double dt, const Mesh& mesh);

/// Backward Euler viscosity with mu/u frozen, explicit pressure gradient,
/// v = 0 on both boundary nodes.
[[nodiscard]] std::vector<double> step_momentum(const State& state, double dt, const Mesh& mesh,
                                                const FluidParams& params, const BoundaryCondition& bc);

/// (1 + dt K phi(theta)) z' - dt (d/u^2 z'_x)_x = z, solved as one M-matrix system.
[[nodiscard]] std::vector<double> step_reaction_diffusion(const State& state, double dt, const Mesh& mesh,
                                                          const FluidParams& params, const ReactionRate& rate,
                                                          const BoundaryCondition& bc);

/// Implicit conduction and compression, explicit viscous heating and reaction
/// heat q K phi(theta) z from the fields in `state`. Throws std::domain_error
/// if the system is not strictly diagonally dominant.
[[nodiscard]] std::vector<double> step_temperature(const State& state, double dt, const Mesh& mesh,
                                                   const FluidParams& params, const ReactionRate& rate,
                                                   const BoundaryCondition& bc = {});

/// Integrals of one step of length dt that ended in `next` (reaction uses
/// phi(theta) of `prev`).
[[nodiscard]] Integrals step_integrals(const State& prev, const State& next, double dt, const Mesh& mesh,
                                       const FluidParams& params, const ReactionRate& rate,
                                       const BoundaryCondition& bc);

enum class StepFailure { None, NonPositiveU, ThetaBelowFloor, NotDominant };

struct Attempt {
  State state;
  Integrals increment;
  StepFailure failure = StepFailure::None;
  [[nodiscard]] bool ok() const noexcept { return failure == StepFailure::None; }
};

/// One split step of fixed length dt; reports a failure instead of throwing.
[[nodiscard]] Attempt attempt_step(const State& state, double dt, const StepControl& ctrl, const Mesh& mesh,
                                   const FluidParams& params, const ReactionRate& rate,
                                   const BoundaryCondition& bc);

/// safety * min(dx / max(|v| + sqrt(a theta/u)), 1/(K sup phi), dt_max).
[[nodiscard]] double adaptive_dt(const State& state, const StepControl& ctrl, const Mesh& mesh,
                                 const FluidParams& params, const ReactionRate& rate);

struct StepOutcome {
  State state;
  double dt = 0.0;
  int halvings = 0;
  Integrals increment;
};

/// Adaptive step no longer than dt_limit, halving on retry signals.
/// Throws SolverAbort after ctrl.max_halvings failed halvings.
[[nodiscard]] StepOutcome advance(const State& state, const StepControl& ctrl, const Mesh& mesh,
                                  const FluidParams& params, const ReactionRate& rate, const BoundaryCondition& bc,
                                  double dt_limit = std::numeric_limits<double>::infinity());

/// Called after every accepted step.
using StepObserver = std::function<void(const StepOutcome&)>;

/// Integrates the configured initial data to final_time, snapshotting every
/// snapshot_every (and at final_time).
[[nodiscard]] Trajectory run(const RunConfig& config, const StepObserver& observer = {});
[[nodiscard]] Trajectory run(const RunConfig& config, State initial, const StepObserver& observer = {});

} // namespace combustion1d

#endif // COMBUSTION1D_SOLVER_HPP
