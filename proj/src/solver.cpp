#include "combustion1d/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "combustion1d/diagnostics.hpp"

namespace combustion1d {

namespace {

// Node diffusivities coef(u_node) for every node, with boundary nodes averaging
// against the u ghost.
template <class Coef>
std::vector<double> node_coefficients(const std::vector<double>& u, const BoundaryCondition& bc, Coef coef) {
  const auto un = cell_to_node(u, bc.left(Field::U), bc.right(Field::U));
  std::vector<double> k(un.size());
  std::transform(un.begin(), un.end(), k.begin(), coef);
  return k;
}

// Adds -dt (k f_x)_x for a cell field with ghosts gl, gr into the system.
void add_diffusion(Tridiagonal& m, std::vector<double>& rhs, const std::vector<double>& k, double dt, double dx,
                   Ghost gl, Ghost gr) {
  const std::size_t n = m.size();
  const double r = dt / (dx * dx);
  for (std::size_t j = 0; j < n; ++j) {
    const double kl = k[j] * r, kr = k[j + 1] * r;
    if (j > 0) {
      m.diag[j] += kl;
      m.lower[j] -= kl;
    } else {
      m.diag[j] += kl * (1.0 - gl.slope);
      rhs[j] += kl * gl.offset;
    }
    if (j + 1 < n) {
      m.diag[j] += kr;
      m.upper[j] -= kr;
    } else {
      m.diag[j] += kr * (1.0 - gr.slope);
      rhs[j] += kr * gr.offset;
    }
  }
}

Field failing_field(StepFailure f) noexcept { return f == StepFailure::NonPositiveU ? Field::U : Field::Theta; }

std::string_view describe(StepFailure f) noexcept {
  switch (f) {
  case StepFailure::NonPositiveU:
    return "non-positive specific volume";
  case StepFailure::ThetaBelowFloor:
    return "temperature below floor";
  case StepFailure::NotDominant:
    return "temperature system not diagonally dominant";
  case StepFailure::None:
    break;
  }
  return "none";
}

} // namespace

bool Tridiagonal::strictly_dominant() const noexcept {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::abs(lower[i]) : 0.0) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
    if (!(std::abs(diag[i]) > off)) {
      return false;
    }
  }
  return true;
}

std::vector<double> Tridiagonal::solve(std::vector<double> rhs) const {
  const std::size_t n = size();
  if (rhs.size() != n) {
    throw std::invalid_argument("tridiagonal right-hand side has the wrong size");
  }
  if (n == 0) {
    return rhs;
  }
  std::vector<double> c(n);
  double pivot = diag[0];
  if (pivot == 0.0) {
    throw std::domain_error("zero pivot in tridiagonal solve");
  }
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0) {
      throw std::domain_error("zero pivot in tridiagonal solve");
    }
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= c[i] * rhs[i + 1];
  }
  return rhs;
}

std::vector<double> step_mass(const State& state, double dt, const Mesh& mesh) {
  check_shape(state, mesh);
  std::vector<double> u = state.u;
  const double r = dt / mesh.dx();
  for (std::size_t j = 0; j < u.size(); ++j) {
    u[j] += r * (state.v[j + 1] - state.v[j]);
  }
  return u;
}

std::vector<double> step_momentum(const State& state, double dt, const Mesh& mesh, const FluidParams& params,
                                  const BoundaryCondition& /*bc*/) {
  check_shape(state, mesh);
  const std::size_t n = state.u.size();
  const double dx = mesh.dx();
  const double r = dt / (dx * dx);
  // Unknowns are the interior nodes 1..n-1; both boundary nodes stay at v = 0.
  const std::size_t m = n - 1;
  Tridiagonal sys(m);
  std::vector<double> rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    const double cl = params.mu / state.u[i - 1] * r;
    const double cr = params.mu / state.u[i] * r;
    sys.diag[k] = 1.0 + cl + cr;
    sys.lower[k] = -cl;
    sys.upper[k] = -cr;
    const double pressure_jump = params.a * (state.theta[i] / state.u[i] - state.theta[i - 1] / state.u[i - 1]);
    rhs[k] = state.v[i] - dt / dx * pressure_jump;
  }
  if (!sys.strictly_dominant()) {
    throw std::domain_error("momentum system not diagonally dominant");
  }
  const auto inner = sys.solve(std::move(rhs));
  std::vector<double> v(n + 1, 0.0);
  std::copy(inner.begin(), inner.end(), v.begin() + 1);
  return v;
}

std::vector<double> step_reaction_diffusion(const State& state, double dt, const Mesh& mesh,
                                            const FluidParams& params, const ReactionRate& rate,
                                            const BoundaryCondition& bc) {
  check_shape(state, mesh);
  const std::size_t n = state.z.size();
  Tridiagonal sys(n);
  std::vector<double> rhs = state.z;
  for (std::size_t j = 0; j < n; ++j) {
    sys.diag[j] = 1.0 + dt * params.big_k * rate(state.theta[j]);
  }
  const auto k = node_coefficients(state.u, bc, [&](double u) { return params.d / (u * u); });
  add_diffusion(sys, rhs, k, dt, mesh.dx(), bc.left(Field::Z), bc.right(Field::Z));
  if (!sys.strictly_dominant()) {
    throw std::domain_error("species system not diagonally dominant");
  }
  return sys.solve(std::move(rhs));
}

std::vector<double> step_temperature(const State& state, double dt, const Mesh& mesh, const FluidParams& params,
                                     const ReactionRate& rate, const BoundaryCondition& bc) {
  check_shape(state, mesh);
  const std::size_t n = state.theta.size();
  const auto vx = dnode_to_cell(state.v, mesh);
  Tridiagonal sys(n);
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = state.u[j];
    sys.diag[j] = 1.0 + dt * params.a * vx[j] / u;
    rhs[j] = state.theta[j] + dt * (params.mu * vx[j] * vx[j] / u +
                                    params.q * params.big_k * rate(state.theta[j]) * state.z[j]);
  }
  const auto k = node_coefficients(state.u, bc, [&](double u) { return params.kappa / u; });
  add_diffusion(sys, rhs, k, dt, mesh.dx(), bc.left(Field::Theta), bc.right(Field::Theta));
  if (!sys.strictly_dominant()) {
    throw std::domain_error("temperature system not diagonally dominant");
  }
  return sys.solve(std::move(rhs));
}

Integrals step_integrals(const State& prev, const State& next, double dt, const Mesh& mesh,
                         const FluidParams& params, const ReactionRate& rate, const BoundaryCondition& bc) {
  const std::size_t n = next.z.size();
  const double dx = mesh.dx();
  Integrals inc;
  double reaction = 0.0, source = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    reaction += rate(prev.theta[j]) * next.z[j];
    source += (1.0 - 1.0 / next.theta[j]) * rate(next.theta[j]) * next.z[j];
  }
  inc.reaction = dt * params.big_k * reaction * dx;
  inc.entropy_source = dt * params.q * params.big_k * source * dx;

  const auto d = node_coefficients(next.u, bc, [&](double u) { return params.d / (u * u); });
  const Ghost zl = bc.left(Field::Z), zr = bc.right(Field::Z);
  const double left_grad = (next.z[0] - zl(next.z[0])) / dx;
  const double right_grad = (zr(next.z[n - 1]) - next.z[n - 1]) / dx;
  inc.z_outflux = dt * (d.front() * left_grad - d.back() * right_grad);

  inc.dissipation = dt * dissipation(next, mesh, params, bc);
  inc.entropy_inflow = dt * entropy_inflow(next, mesh, params, bc);
  inc.crucial = dt * crucial_integrand(next, mesh, bc);
  return inc;
}

Attempt attempt_step(const State& state, double dt, const StepControl& ctrl, const Mesh& mesh,
                     const FluidParams& params, const ReactionRate& rate, const BoundaryCondition& bc) {
  Attempt out;
  State& next = out.state;
  next = state;
  next.t = state.t + dt;
  next.v = step_momentum(state, dt, mesh, params, bc);

  State mid = state;
  mid.v = next.v;
  mid.u = step_mass(mid, dt, mesh);
  if (!std::all_of(mid.u.begin(), mid.u.end(), [](double u) { return u > 0.0 && std::isfinite(u); })) {
    out.failure = StepFailure::NonPositiveU;
    return out;
  }
  next.u = mid.u;
  next.z = step_reaction_diffusion(mid, dt, mesh, params, rate, bc);
  try {
    next.theta = step_temperature(mid, dt, mesh, params, rate, bc);
  } catch (const std::domain_error&) {
    out.failure = StepFailure::NotDominant;
    return out;
  }
  if (!std::all_of(next.theta.begin(), next.theta.end(),
                   [&](double th) { return th > ctrl.theta_floor && std::isfinite(th); })) {
    out.failure = StepFailure::ThetaBelowFloor;
    return out;
  }
  out.increment = step_integrals(state, next, dt, mesh, params, rate, bc);
  return out;
}

double adaptive_dt(const State& state, const StepControl& ctrl, const Mesh& mesh, const FluidParams& params,
                   const ReactionRate& rate) {
  double speed = 0.0;
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    const double vmax = std::max(std::abs(state.v[j]), std::abs(state.v[j + 1]));
    speed = std::max(speed, vmax + std::sqrt(params.a * state.theta[j] / state.u[j]));
  }
  double dt = ctrl.dt_max;
  if (speed > 0.0) {
    dt = std::min(dt, mesh.dx() / speed);
  }
  const double reaction = params.big_k * rate.sup();
  if (reaction > 0.0) {
    dt = std::min(dt, 1.0 / reaction);
  }
  return ctrl.safety * dt;
}

StepOutcome advance(const State& state, const StepControl& ctrl, const Mesh& mesh, const FluidParams& params,
                    const ReactionRate& rate, const BoundaryCondition& bc, double dt_limit) {
  const double stable = adaptive_dt(state, ctrl, mesh, params, rate);
  double dt = stable;
  if (dt_limit <= stable) {
    dt = dt_limit;
  } else if (dt_limit < 2.0 * stable) {
    // Split the remainder evenly instead of leaving a sliver step.
    dt = 0.5 * dt_limit;
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("advance needs a positive step limit");
  }
  StepFailure last = StepFailure::None;
  for (int halvings = 0; halvings <= ctrl.max_halvings; ++halvings) {
    Attempt a = attempt_step(state, dt, ctrl, mesh, params, rate, bc);
    if (a.ok()) {
      return {std::move(a.state), dt, halvings, a.increment};
    }
    last = a.failure;
    dt *= 0.5;
  }
  throw SolverAbort(fmt::format("step from t = {} failed after {} halvings: {}", state.t, ctrl.max_halvings,
                                describe(last)),
                    state.t, failing_field(last));
}

Trajectory run(const RunConfig& config, const StepObserver& observer) {
  return run(config, initial_state(config), observer);
}

Trajectory run(const RunConfig& config, State initial, const StepObserver& observer) {
  const Mesh mesh = config.mesh();
  check_shape(initial, mesh);
  const ReactionRate rate = config.rate();
  Trajectory traj;
  traj.config = config;
  traj.snapshots.push_back({initial, 0.0, 0, {}});

  const double T = config.final_time;
  const double every = config.snapshot_every > 0.0 ? config.snapshot_every : T;
  State state = std::move(initial);
  Integrals cumulative;
  std::int64_t steps = 0;
  double max_dt = 0.0;
  for (long m = 1; state.t < T; ++m) {
    const double target = std::min(T, static_cast<double>(m) * every);
    if (target <= state.t) {
      continue;
    }
    while (state.t < target) {
      StepOutcome step = advance(state, config.control, mesh, config.fluid, rate, config.bc, target - state.t);
      if (target - step.state.t <= 1e-12 * std::max(1.0, target)) {
        step.state.t = target;
      }
      cumulative += step.increment;
      max_dt = std::max(max_dt, step.dt);
      ++steps;
      if (observer) {
        observer(step);
      }
      state = std::move(step.state);
    }
    traj.snapshots.push_back({state, max_dt, steps, cumulative});
    max_dt = 0.0;
  }
  return traj;
}

} // namespace combustion1d
