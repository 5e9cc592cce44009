#include "combustion1d/oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "combustion1d/grid.hpp"
#include "combustion1d/parallel.hpp"
#include "combustion1d/solver.hpp"

namespace combustion1d {

namespace {

// Everything below is written out cell by cell on purpose: none of it may
// call into the main solver's sub-steps.

struct ExplicitStepper {
  const Mesh& mesh;
  const FluidParams& p;
  const ReactionRate& rate;
  const BoundaryCondition& bc;

  double stable_dt(const State& s) const {
    const double dx = mesh.dx();
    double umin = std::numeric_limits<double>::infinity(), speed = 0.0;
    for (std::size_t j = 0; j < s.u.size(); ++j) {
      umin = std::min(umin, s.u[j]);
      speed = std::max(speed, std::max(std::abs(s.v[j]), std::abs(s.v[j + 1])) + std::sqrt(p.a * s.theta[j] / s.u[j]));
    }
    const double diffusivity = std::max({p.mu, p.kappa, p.d});
    double dt = 0.2 * dx * dx * std::min(umin, umin * umin) / diffusivity;
    if (speed > 0.0) {
      dt = std::min(dt, 0.2 * dx / speed);
    }
    if (rate.sup() > 0.0) {
      dt = std::min(dt, 0.2 / (p.big_k * rate.sup()));
    }
    return dt;
  }

  // Returns the increments of the reaction and species out-flux integrals.
  std::pair<double, double> step(State& s, double dt) const {
    const std::size_t n = s.u.size();
    const double dx = mesh.dx();
    std::vector<double> vx(n), sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
      vx[j] = (s.v[j + 1] - s.v[j]) / dx;
      sigma[j] = (p.mu * vx[j] - p.a * s.theta[j]) / s.u[j];
    }
    // Node fluxes kappa/u theta_x and d/u^2 z_x, boundary nodes through the ghosts.
    const Ghost ul = bc.left(Field::U), ur = bc.right(Field::U);
    const Ghost tl = bc.left(Field::Theta), tr = bc.right(Field::Theta);
    const Ghost zl = bc.left(Field::Z), zr = bc.right(Field::Z);
    std::vector<double> heat(n + 1), species(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      double u_lo, u_hi, t_lo, t_hi, z_lo, z_hi;
      if (i == 0) {
        u_lo = ul(s.u[0]);
        t_lo = tl(s.theta[0]);
        z_lo = zl(s.z[0]);
      } else {
        u_lo = s.u[i - 1];
        t_lo = s.theta[i - 1];
        z_lo = s.z[i - 1];
      }
      if (i == n) {
        u_hi = ur(s.u[n - 1]);
        t_hi = tr(s.theta[n - 1]);
        z_hi = zr(s.z[n - 1]);
      } else {
        u_hi = s.u[i];
        t_hi = s.theta[i];
        z_hi = s.z[i];
      }
      const double un = 0.5 * (u_lo + u_hi);
      heat[i] = p.kappa / un * (t_hi - t_lo) / dx;
      species[i] = p.d / (un * un) * (z_hi - z_lo) / dx;
    }

    double reaction = 0.0;
    std::vector<double> v = s.v;
    for (std::size_t i = 1; i < n; ++i) {
      v[i] += dt * (sigma[i] - sigma[i - 1]) / dx;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double r = p.big_k * rate(s.theta[j]) * s.z[j];
      reaction += r;
      const double theta_rate = -p.a * s.theta[j] * vx[j] / s.u[j] + (heat[j + 1] - heat[j]) / dx +
                                p.mu * vx[j] * vx[j] / s.u[j] + p.q * r;
      const double z_rate = -r + (species[j + 1] - species[j]) / dx;
      s.u[j] += dt * vx[j];
      s.theta[j] += dt * theta_rate;
      s.z[j] += dt * z_rate;
    }
    s.v = std::move(v);
    s.t += dt;
    return {dt * reaction * dx, dt * (species[0] - species[n])};
  }
};

std::vector<double> restrict_cells(std::span<const double> fine, std::size_t ratio) {
  std::vector<double> out(fine.size() / ratio, 0.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t k = 0; k < ratio; ++k) {
      out[j] += fine[j * ratio + k];
    }
    out[j] /= static_cast<double>(ratio);
  }
  return out;
}

std::vector<double> restrict_nodes(std::span<const double> fine, std::size_t ratio) {
  std::vector<double> out((fine.size() - 1) / ratio + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = fine[i * ratio];
  }
  return out;
}

} // namespace

Trajectory explicit_reference_run(const RunConfig& config, int refine) {
  if (refine < 2) {
    throw std::invalid_argument("refine must be at least 2");
  }
  RunConfig fine = config;
  fine.cells = config.cells * refine;
  const Mesh mesh = fine.mesh();
  const ReactionRate rate = fine.rate();
  const ExplicitStepper stepper{mesh, fine.fluid, rate, fine.bc};

  Trajectory traj;
  traj.config = fine;
  State s = initial_state(fine);
  traj.snapshots.push_back({s, 0.0, 0, {}});
  const double T = fine.final_time;
  const double every = fine.snapshot_every > 0.0 ? fine.snapshot_every : T;
  Integrals cumulative;
  std::int64_t steps = 0;
  double max_dt = 0.0;
  for (long m = 1; s.t < T; ++m) {
    const double target = std::min(T, static_cast<double>(m) * every);
    while (s.t < target) {
      double dt = stepper.stable_dt(s);
      if (target - s.t <= dt) {
        dt = target - s.t;
      }
      const auto [reaction, outflux] = stepper.step(s, dt);
      if (target - s.t <= 1e-12 * std::max(1.0, target)) {
        s.t = target;
      }
      cumulative.reaction += reaction;
      cumulative.z_outflux += outflux;
      max_dt = std::max(max_dt, dt);
      ++steps;
      for (std::size_t j = 0; j < s.u.size(); ++j) {
        if (!(s.u[j] > 0.0) || !std::isfinite(s.u[j])) {
          throw SolverAbort(fmt::format("explicit reference lost positivity of u at t = {}", s.t), s.t, Field::U);
        }
        if (!(s.theta[j] > 0.0) || !std::isfinite(s.theta[j])) {
          throw SolverAbort(fmt::format("explicit reference lost positivity of theta at t = {}", s.t), s.t,
                            Field::Theta);
        }
      }
    }
    traj.snapshots.push_back({s, max_dt, steps, cumulative});
    max_dt = 0.0;
  }
  return traj;
}

double ErrorRow::l2_total() const noexcept {
  double s = 0.0;
  for (double e : l2) {
    s += e * e;
  }
  return std::sqrt(s);
}

ErrorTable compare(const Trajectory& a, const Trajectory& b) {
  const Trajectory& coarse = a.config.cells <= b.config.cells ? a : b;
  const Trajectory& fine = a.config.cells <= b.config.cells ? b : a;
  const Mesh mc = coarse.mesh(), mf = fine.mesh();
  if (mc.kind() != mf.kind() || mc.half_length() != mf.half_length() || !(coarse.config.bc == fine.config.bc)) {
    throw std::invalid_argument("compare: trajectories use different domains or boundary conditions");
  }
  if (mf.cells() % mc.cells() != 0) {
    throw std::invalid_argument(fmt::format("compare: {} cells is not a multiple of {}", mf.cells(), mc.cells()));
  }
  if (coarse.snapshots.size() != fine.snapshots.size()) {
    throw std::invalid_argument("compare: snapshot counts differ");
  }
  const auto ratio = static_cast<std::size_t>(mf.cells() / mc.cells());
  const double dx = mc.dx();
  ErrorTable table;
  table.cells = mc.cells();
  for (std::size_t m = 0; m < coarse.snapshots.size(); ++m) {
    const State& c = coarse.snapshots[m].state;
    const State& f = fine.snapshots[m].state;
    if (std::abs(c.t - f.t) > 1e-9 * std::max(1.0, c.t)) {
      throw std::invalid_argument(fmt::format("compare: snapshot {} at t = {} vs t = {}", m, c.t, f.t));
    }
    const std::array<std::vector<double>, 4> restricted{restrict_cells(f.u, ratio), restrict_nodes(f.v, ratio),
                                                        restrict_cells(f.theta, ratio),
                                                        restrict_cells(f.z, ratio)};
    ErrorRow row;
    row.t = c.t;
    const std::array<Field, 4> fields{Field::U, Field::V, Field::Theta, Field::Z};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto cf = c.field(fields[k]);
      double sum = 0.0, mx = 0.0;
      for (std::size_t i = 0; i < cf.size(); ++i) {
        const double e = cf[i] - restricted[k][i];
        sum += e * e;
        mx = std::max(mx, std::abs(e));
      }
      row.l2[k] = std::sqrt(sum * dx);
      row.max[k] = mx;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<double> observed_orders(const std::vector<int>& cells, const std::vector<double>& errors) {
  if (cells.size() != errors.size()) {
    throw std::invalid_argument("observed_orders: size mismatch");
  }
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    orders.push_back(std::log(errors[i] / errors[i + 1]) /
                     std::log(static_cast<double>(cells[i + 1]) / static_cast<double>(cells[i])));
  }
  return orders;
}

double l2_distance(const State& a, const State& b, const Mesh& mesh) {
  check_shape(a, mesh);
  check_shape(b, mesh);
  double sum = 0.0;
  for (Field f : {Field::U, Field::V, Field::Theta, Field::Z}) {
    const auto fa = a.field(f), fb = b.field(f);
    for (std::size_t i = 0; i < fa.size(); ++i) {
      sum += (fa[i] - fb[i]) * (fa[i] - fb[i]);
    }
  }
  return std::sqrt(sum * mesh.dx());
}

LadderResult convergence_ladder(const RunConfig& config, const std::vector<int>& ladder, int refine,
                                unsigned workers) {
  if (ladder.size() < 2 || !std::is_sorted(ladder.begin(), ladder.end())) {
    throw std::invalid_argument("convergence ladder needs at least two increasing resolutions");
  }
  LadderResult out;
  out.cells = ladder;
  out.reference_cells = ladder.back() * refine;
  std::vector<Trajectory> runs(ladder.size() + 1);
  // The reference is the slowest job; start it first.
  parallel_for(runs.size(), workers, [&](std::size_t i) {
    if (i == 0) {
      RunConfig ref = config;
      ref.cells = ladder.back();
      runs.back() = explicit_reference_run(ref, refine);
      return;
    }
    RunConfig rung = config;
    rung.cells = ladder[i - 1];
    rung.control.dt_max = config.control.dt_max * ladder.front() / rung.cells;
    runs[i - 1] = run(rung);
  });
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    out.tables.push_back(compare(runs[i], runs.back()));
    out.errors.push_back(out.tables.back().final().l2_total());
  }
  out.orders = observed_orders(out.cells, out.errors);
  return out;
}

MollificationStudy mollification_study(const RunConfig& config, const std::vector<double>& etas, unsigned workers) {
  if (etas.empty()) {
    throw std::invalid_argument("mollification study needs at least one eta");
  }
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] > 0.0) || (i > 0 && !(etas[i] < etas[i - 1]))) {
      throw std::invalid_argument("mollification widths must be positive and strictly decreasing");
    }
  }
  std::vector<double> sequence = etas;
  sequence.push_back(0.0);
  // sup phi_eta <= sup phi, so capping dt_max at the raw reaction limit keeps
  // the eta-dependent limit from ever selecting the step.
  RunConfig base = config;
  base.eta = 0.0;
  const double raw_sup = base.rate().sup();
  if (raw_sup > 0.0) {
    base.control.dt_max = std::min(base.control.dt_max, 1.0 / (base.fluid.big_k * raw_sup));
  }
  std::vector<State> finals(sequence.size());
  std::vector<double> sup_theta(sequence.size(), 0.0);
  parallel_for(sequence.size(), workers, [&](std::size_t i) {
    RunConfig c = base;
    c.eta = sequence[i];
    const Trajectory traj = run(c);
    for (const auto& snap : traj.snapshots) {
      sup_theta[i] = std::max(sup_theta[i], *std::max_element(snap.state.theta.begin(), snap.state.theta.end()));
    }
    finals[i] = traj.final();
  });

  const Mesh mesh = config.mesh();
  MollificationStudy study;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    MollificationRow row;
    row.eta = sequence[i];
    row.diff_next = i + 1 < sequence.size() ? l2_distance(finals[i], finals[i + 1], mesh) : 0.0;
    row.diff_raw = l2_distance(finals[i], finals.back(), mesh);
    row.sup_theta = sup_theta[i];
    study.rows.push_back(row);
  }
  study.cauchy = true;
  study.approaches_raw = true;
  // Successive differences among the mollified runs, and their distances to the raw run.
  for (std::size_t i = 0; i + 2 < etas.size(); ++i) {
    study.cauchy = study.cauchy && study.rows[i + 1].diff_next < study.rows[i].diff_next;
  }
  for (std::size_t i = 0; i + 2 < sequence.size(); ++i) {
    study.approaches_raw = study.approaches_raw && study.rows[i + 1].diff_raw < study.rows[i].diff_raw;
  }
  const auto [lo, hi] = std::minmax_element(sup_theta.begin(), sup_theta.end());
  study.sup_theta_spread = (*hi - *lo) / *lo;
  return study;
}

} // namespace combustion1d
