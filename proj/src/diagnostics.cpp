#include "combustion1d/diagnostics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace combustion1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_fields(const State& state) {
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    if (!(state.u[j] > 0.0) || !(state.theta[j] > 0.0)) {
      throw std::domain_error("non-positive specific volume or temperature at cell " + std::to_string(j));
    }
  }
}

double sum_cells(const std::vector<double>& f) {
  double s = 0.0;
  for (double x : f) {
    s += x;
  }
  return s;
}

// Last snapshot index with t <= t_end (at least 0).
std::size_t last_before(const Trajectory& traj, double t_end) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    if (traj.snapshots[i].state.t <= t_end + 1e-12) {
      m = i;
    }
  }
  return m;
}

double cutoff(double x, int k) noexcept {
  if (x <= k) {
    return 1.0;
  }
  if (x >= k + 1.0) {
    return 0.0;
  }
  const double s = x - k;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

} // namespace

double psi(double s) noexcept { return s - 1.0 - std::log(s); }

double entropy(const State& state, const Mesh& mesh, const FluidParams& params) {
  check_shape(state, mesh);
  require_positive_fields(state);
  double sum = 0.0;
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    const double vbar = 0.5 * (state.v[j] + state.v[j + 1]);
    sum += params.a * psi(state.u[j]) + psi(state.theta[j]) + 0.5 * vbar * vbar;
  }
  return sum * mesh.dx();
}

double dissipation(const State& state, const Mesh& mesh, const FluidParams& params, const BoundaryCondition& bc) {
  check_shape(state, mesh);
  require_positive_fields(state);
  const auto vx = dnode_to_cell(state.v, mesh);
  const auto thx = dcell_to_node(state.theta, mesh, bc, Field::Theta);
  const auto u_n = cell_to_node(state.u, bc.left(Field::U), bc.right(Field::U));
  const auto th_n = cell_to_node(state.theta, bc.left(Field::Theta), bc.right(Field::Theta));
  double sum = 0.0;
  for (std::size_t j = 0; j < vx.size(); ++j) {
    sum += params.mu * vx[j] * vx[j] / (state.u[j] * state.theta[j]);
  }
  for (std::size_t i = 0; i < thx.size(); ++i) {
    sum += params.kappa * thx[i] * thx[i] / (u_n[i] * th_n[i] * th_n[i]);
  }
  return sum * mesh.dx();
}

double reaction_integral(const State& state, const Mesh& mesh, const FluidParams& params, const ReactionRate& rate) {
  double sum = 0.0;
  for (std::size_t j = 0; j < state.z.size(); ++j) {
    sum += rate(state.theta[j]) * state.z[j];
  }
  return params.big_k * sum * mesh.dx();
}

double z_power_integral(const State& state, const Mesh& mesh, double beta) {
  double sum = 0.0;
  for (double z : state.z) {
    sum += std::pow(std::max(z, 0.0), beta);
  }
  return sum * mesh.dx();
}

double level_integral(const State& state, const Mesh& mesh) {
  double sum = 0.0;
  for (double th : state.theta) {
    const double hot = std::max(th - 2.0, 0.0);
    sum += hot * hot;
  }
  for (double v : state.v) {
    sum += v * v * v * v;
  }
  return sum * mesh.dx();
}

double crucial_integrand(const State& state, const Mesh& mesh, const BoundaryCondition& bc) {
  const auto vx = dnode_to_cell(state.v, mesh);
  const auto thx = dcell_to_node(state.theta, mesh, bc, Field::Theta);
  double sum = 0.0;
  for (std::size_t j = 0; j < vx.size(); ++j) {
    const double vbar = 0.5 * (state.v[j] + state.v[j + 1]);
    sum += (1.0 + state.theta[j] + vbar * vbar) * vx[j] * vx[j];
  }
  for (double g : thx) {
    sum += g * g;
  }
  return sum * mesh.dx();
}

double entropy_inflow(const State& state, const Mesh& mesh, const FluidParams& params, const BoundaryCondition& bc) {
  const std::size_t n = state.u.size();
  const double dx = mesh.dx();
  auto flux = [&](double v, double vx, double th_face, double thx, double u_face) {
    return (params.mu * v * vx - params.a * v * th_face) / u_face +
           (1.0 - 1.0 / th_face) * params.kappa * thx / u_face + params.a * v;
  };
  const Ghost thl = bc.left(Field::Theta), thr = bc.right(Field::Theta);
  const Ghost ul = bc.left(Field::U), ur = bc.right(Field::U);
  const double th_left = 0.5 * (state.theta[0] + thl(state.theta[0]));
  const double th_right = 0.5 * (state.theta[n - 1] + thr(state.theta[n - 1]));
  const double u_left = 0.5 * (state.u[0] + ul(state.u[0]));
  const double u_right = 0.5 * (state.u[n - 1] + ur(state.u[n - 1]));
  const double left = flux(state.v[0], (state.v[1] - state.v[0]) / dx, th_left,
                           (state.theta[0] - thl(state.theta[0])) / dx, u_left);
  const double right = flux(state.v[n], (state.v[n] - state.v[n - 1]) / dx, th_right,
                            (thr(state.theta[n - 1]) - state.theta[n - 1]) / dx, u_right);
  return right - left;
}

std::vector<double> effective_viscous_flux(const State& state, const Mesh& mesh, const FluidParams& params) {
  check_shape(state, mesh);
  const auto vx = dnode_to_cell(state.v, mesh);
  const std::size_t n = vx.size();
  std::vector<double> sigma(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i == n ? n - 1 : i;
    const double vx_n = 0.5 * (vx[lo] + vx[hi]);
    const double th_n = 0.5 * (state.theta[lo] + state.theta[hi]);
    const double u_n = 0.5 * (state.u[lo] + state.u[hi]);
    sigma[i] = (params.mu * vx_n - params.a * th_n) / u_n;
  }
  return sigma;
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
  case Status::Pass:
    return "pass";
  case Status::Fail:
    return "fail";
  case Status::Inconclusive:
    return "inconclusive";
  }
  return "";
}

std::optional<double> Verdict::detail(std::string_view key) const {
  for (const auto& [name, value] : details) {
    if (name == key) {
      return value;
    }
  }
  return std::nullopt;
}

Verdict compare_verdict(std::string name, double value, double bound, double tolerance) {
  Verdict v;
  v.name = std::move(name);
  v.value = value;
  v.bound = bound;
  v.slack = bound - value;
  v.tolerance = tolerance;
  v.status = value <= bound + tolerance ? Status::Pass : Status::Fail;
  return v;
}

double budget_tolerance(const Trajectory& traj) {
  const double T = traj.snapshots.back().state.t;
  return traj.config.tol.c_tol * (traj.mesh().dx() + traj.max_dt()) * T;
}

Verdict entropy_budget(const Trajectory& traj) {
  if (traj.snapshots.size() < 2) {
    throw std::invalid_argument("entropy_budget needs at least two snapshots");
  }
  const Mesh mesh = traj.mesh();
  const FluidParams& p = traj.config.fluid;
  const double e0 = sum_cells(traj.initial().z) * mesh.dx();
  const double entropy0 = entropy(traj.initial(), mesh, p);
  double running = -kInf, sup_e = -kInf, consistency = 0.0;
  for (const auto& snap : traj.snapshots) {
    const double e = entropy(snap.state, mesh, p);
    const auto& c = snap.cumulative;
    running = std::max(running, e + c.dissipation - c.entropy_inflow);
    sup_e = std::max(sup_e, e);
    consistency = std::max(consistency, std::abs(e + c.dissipation - c.entropy_inflow - entropy0 - c.entropy_source));
  }
  const auto& last = traj.snapshots.back().cumulative;
  const double bound = entropy0 + p.q * e0;
  Verdict v = compare_verdict("entropy_budget", running, bound, budget_tolerance(traj));
  v.note = "max over snapshots of E(t) + int_0^t D - boundary inflow, against E(0) + q E0";
  v.details = {{"entropy0", entropy0},
               {"e0", e0},
               {"literal", sup_e + last.dissipation - last.entropy_inflow},
               {"consistency", consistency},
               {"overshoot", std::max(0.0, running - bound)},
               {"reaction_entropy", last.entropy_source}};
  return v;
}

Verdict reactant_budget(const Trajectory& traj) {
  if (traj.snapshots.size() < 2) {
    throw std::invalid_argument("reactant_budget needs at least two snapshots");
  }
  const Mesh mesh = traj.mesh();
  const double e0 = sum_cells(traj.initial().z) * mesh.dx();
  const auto& last = traj.snapshots.back();
  const double lhs = sum_cells(last.state.z) * mesh.dx() + last.cumulative.reaction;
  const double tol = budget_tolerance(traj);
  Verdict v = compare_verdict("reactant_budget", lhs, e0, tol);
  const double defect = e0 - lhs;
  const double mismatch = std::abs(defect - last.cumulative.z_outflux);
  if (mismatch > tol || defect < -tol) {
    v.status = Status::Fail;
  }
  v.note = "int Z(T) + int int K phi Z against E0; defect must equal the species out-flux";
  v.details = {{"defect", defect}, {"outflux", last.cumulative.z_outflux}, {"mismatch", mismatch}};
  return v;
}

Verdict z_bounds(const Trajectory& traj) {
  double lo = kInf, hi = -kInf;
  for (const auto& snap : traj.snapshots) {
    const auto [mn, mx] = std::minmax_element(snap.state.z.begin(), snap.state.z.end());
    lo = std::min(lo, *mn);
    hi = std::max(hi, *mx);
  }
  const double excursion = std::max(-lo, hi - 1.0);
  Verdict v = compare_verdict("z_bounds", excursion, 0.0, traj.config.tol.z_tol);
  v.note = "0 <= Z <= 1 on every snapshot";
  v.details = {{"z_min", lo}, {"z_max", hi}};
  return v;
}

Verdict z_lbeta(const Trajectory& traj, double beta) {
  const Mesh mesh = traj.mesh();
  const double per_step = traj.config.tol.lbeta_tol;
  double worst = 0.0, worst_ratio = -kInf;
  double prev = z_power_integral(traj.snapshots.front().state, mesh, beta);
  std::int64_t prev_steps = traj.snapshots.front().steps;
  for (std::size_t m = 1; m < traj.snapshots.size(); ++m) {
    const auto& snap = traj.snapshots[m];
    const double cur = z_power_integral(snap.state, mesh, beta);
    const double steps = static_cast<double>(std::max<std::int64_t>(1, snap.steps - prev_steps));
    const double increase = cur - prev;
    worst = std::max(worst, increase);
    worst_ratio = std::max(worst_ratio, increase / (per_step * steps));
    prev = cur;
    prev_steps = snap.steps;
  }
  // Normalized so that the tolerance is one unit per accepted step.
  Verdict v = compare_verdict(fmt::format("z_lbeta_{}", beta), std::max(worst_ratio, 0.0) * per_step, 0.0, per_step);
  v.note = fmt::format("int Z^{} dx non-increasing, {} per step", beta, per_step);
  v.details = {{"beta", beta}, {"max_increase", worst},
               {"final", z_power_integral(traj.final(), mesh, beta)},
               {"initial", z_power_integral(traj.initial(), mesh, beta)}};
  return v;
}

LocalisationResult localisation(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  const double tol = traj.config.tol.jensen_tol;
  const auto ks = unit_intervals(mesh);
  LocalisationResult r;
  r.gamma1 = kInf;
  r.gamma2 = -kInf;
  r.max_jensen_gap = -kInf;

  struct Averages {
    double u, theta;
  };
  std::vector<std::vector<Averages>> averages(traj.snapshots.size());
  for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
    const State& s = traj.snapshots[m].state;
    std::vector<double> psi_u(s.u.size()), psi_th(s.theta.size());
    std::transform(s.u.begin(), s.u.end(), psi_u.begin(), psi);
    std::transform(s.theta.begin(), s.theta.end(), psi_th.begin(), psi);
    for (int k : ks) {
      const double iu = interval_integral(s.u, k, mesh);
      const double ith = interval_integral(s.theta, k, mesh);
      r.max_jensen_gap = std::max({r.max_jensen_gap, psi(iu) - interval_integral(psi_u, k, mesh),
                                   psi(ith) - interval_integral(psi_th, k, mesh)});
      r.gamma1 = std::min({r.gamma1, iu, ith});
      r.gamma2 = std::max({r.gamma2, iu, ith});
      averages[m].push_back({iu, ith});
      ++r.intervals_checked;
    }
  }

  const double band_tol = 1e-12 * std::max(1.0, r.gamma2);
  for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
    const State& s = traj.snapshots[m].state;
    for (int k : ks) {
      bool found = false;
      for (int j = 0; j < mesh.cells() && !found; ++j) {
        if (mesh.node(j + 1) <= k || mesh.node(j) >= k + 1.0) {
          continue;
        }
        const auto i = static_cast<std::size_t>(j);
        found = s.u[i] >= r.gamma1 - band_tol && s.u[i] <= r.gamma2 + band_tol &&
                s.theta[i] >= r.gamma1 - band_tol && s.theta[i] <= r.gamma2 + band_tol;
      }
      if (!found) {
        ++r.missing_points;
      }
    }
  }

  if (ks.empty()) {
    r.verdict = compare_verdict("localisation", 0.0, 0.0, tol);
    r.verdict.status = Status::Inconclusive;
    r.verdict.note = "no unit interval fits in the domain";
    return r;
  }
  r.verdict = compare_verdict("localisation", std::max(r.max_jensen_gap, 0.0), 0.0, tol);
  if (!(r.gamma1 > 0.0 && r.gamma2 < kInf) || r.missing_points > 0) {
    r.verdict.status = Status::Fail;
  }
  r.verdict.note = fmt::format("Jensen on I_k for k in [{}, {}] (truncated domain), gamma band and b_k(t) points",
                               ks.front(), ks.back());
  r.verdict.details = {{"gamma1", r.gamma1},
                       {"gamma2", r.gamma2},
                       {"intervals", static_cast<double>(r.intervals_checked)},
                       {"missing_points", static_cast<double>(r.missing_points)}};
  return r;
}

int default_representation_interval(const RunConfig& config) {
  if (config.tol.rep_k) {
    return *config.tol.rep_k;
  }
  const Mesh mesh = config.mesh();
  const int k = static_cast<int>(std::lround(config.initial.center_or(mesh)));
  return std::clamp(k, static_cast<int>(std::ceil(mesh.left())) + 1,
                    static_cast<int>(std::floor(mesh.right())) - 1);
}

RepresentationResult representation_check(const Trajectory& traj, int k) {
  const Mesh mesh = traj.mesh();
  if (k - 1.0 < mesh.left() - 1e-12 || k + 1.0 > mesh.right() + 1e-12) {
    throw std::out_of_range(fmt::format("representation interval k = {} does not fit in the domain", k));
  }
  const FluidParams& p = traj.config.fluid;
  const double dx = mesh.dx();
  const int n = mesh.cells();

  std::vector<double> chi(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    chi[static_cast<std::size_t>(i)] = cutoff(mesh.node(i), k);
  }
  std::vector<int> cells;
  for (int j = 0; j < n; ++j) {
    const double x = mesh.cell_center(j);
    if (x >= k - 1.0 && x <= k) {
      cells.push_back(j);
    }
  }

  const State& s0 = traj.initial();
  // int chi_x sigma over I_k, with chi_x taken as node differences of chi so
  // that it integrates to exactly -1.
  auto flux_moment = [&](const State& s) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(j);
      const double dchi = chi[i + 1] - chi[i];
      if (dchi != 0.0) {
        const double sigma = (p.mu * (s.v[i + 1] - s.v[i]) / dx - p.a * s.theta[i]) / s.u[i];
        sum += sigma * dchi;
      }
    }
    return sum;
  };
  // int_{x_j}^infty (v0 - v) chi for each tested cell.
  auto velocity_moment = [&](const State& s) {
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = (s0.v[i] - s.v[i]) * chi[i];
    }
    std::vector<double> tail(w.size(), 0.0); // int from node i to the right end
    for (std::size_t i = w.size() - 1; i-- > 0;) {
      tail[i] = tail[i + 1] + 0.5 * (w[i] + w[i + 1]) * dx;
    }
    std::vector<double> out;
    out.reserve(cells.size());
    for (int j : cells) {
      const auto i = static_cast<std::size_t>(j);
      const double mid = 0.5 * (w[i] + w[i + 1]);
      out.push_back(0.25 * dx * (mid + w[i + 1]) + tail[i + 1]);
    }
    return out;
  };

  RepresentationResult r;
  r.k = k;
  // G = Lambda - W/mu with Lambda = (1/mu) int_0^t S; then Y B = u0 exp(-G) and
  // u = u0 exp(-G(t)) + (a/mu) int_0^t theta exp(G(tau) - G(t)) dtau.
  double lambda = 0.0;
  double prev_s = flux_moment(s0);
  double prev_t = s0.t;
  std::vector<double> prev_g(cells.size(), 0.0);
  std::vector<double> prev_theta(cells.size());
  std::vector<double> tail(cells.size(), 0.0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    prev_theta[c] = s0.theta[static_cast<std::size_t>(cells[c])];
  }
  for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
    const State& s = traj.snapshots[m].state;
    double residual = 0.0, scale = 0.0;
    if (m > 0) {
      const double dt = s.t - prev_t;
      const double cur_s = flux_moment(s);
      lambda += 0.5 * (prev_s + cur_s) * dt / p.mu;
      prev_s = cur_s;
      prev_t = s.t;
      const auto w = velocity_moment(s);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto i = static_cast<std::size_t>(cells[c]);
        const double g = lambda - w[c] / p.mu;
        const double delta = g - prev_g[c];
        // int_0^dt exp(delta (tau/dt - 1)) dtau, exact for linear G.
        const double weight = std::abs(delta) < 1e-8 ? dt * (1.0 - 0.5 * delta) : dt * (-std::expm1(-delta)) / delta;
        const double theta_mean = 0.5 * (prev_theta[c] + s.theta[i]);
        tail[c] = tail[c] * std::exp(-delta) + p.a / p.mu * theta_mean * weight;
        prev_g[c] = g;
        prev_theta[c] = s.theta[i];
      }
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto i = static_cast<std::size_t>(cells[c]);
      const double rebuilt = s0.u[i] * std::exp(-prev_g[c]) + tail[c];
      residual = std::max(residual, std::abs(rebuilt - s.u[i]));
      scale = std::max(scale, std::abs(s.u[i]));
    }
    r.times.push_back(s.t);
    r.residuals.push_back(scale > 0.0 ? residual / scale : 0.0);
  }
  r.max_residual = *std::max_element(r.residuals.begin(), r.residuals.end());
  r.verdict = compare_verdict("representation", r.max_residual, traj.config.tol.rep_tol, 0.0);
  r.verdict.note = fmt::format("relative residual of the specific-volume representation on [{}, {}]; "
                               "B uses the u0 prefactor",
                               k - 1, k);
  double gap = 0.0;
  for (std::size_t m = 1; m < r.times.size(); ++m) {
    gap = std::max(gap, r.times[m] - r.times[m - 1]);
  }
  r.verdict.details = {{"k", static_cast<double>(k)}, {"final_residual", r.residuals.back()}, {"max_gap", gap}};
  if (gap > traj.config.tol.rep_max_gap) {
    r.verdict.status = Status::Inconclusive;
    r.verdict.note += fmt::format(" (inconclusive: snapshot spacing {} exceeds {})", gap, traj.config.tol.rep_max_gap);
  }
  return r;
}

CrucialHistory crucial_estimate(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  CrucialHistory h;
  double sup_level = 0.0;
  std::vector<double> h1;
  for (const auto& snap : traj.snapshots) {
    sup_level = std::max(sup_level, level_integral(snap.state, mesh));
    h.times.push_back(snap.state.t);
    h.values.push_back(sup_level + snap.cumulative.crucial);
    h1.push_back(h1_dev(snap.state, mesh));
  }
  const double T = h.times.back();
  const std::size_t half = last_before(traj, 0.5 * T);
  const double f_half = h.values[half];
  const double f_full = h.values.back();
  // Equilibrium data leaves only roundoff in F; compare it with an absolute floor.
  const bool trivial = h1.front() <= 1e-12;
  h.verdict = compare_verdict("crucial_estimate", f_full - f_half, traj.config.tol.saturation * f_half,
                              trivial ? 1e-12 : 0.0);
  h.verdict.note = "F(T) - F(T/2) <= saturation * F(T/2)";
  h.verdict.details = {{"F_half", f_half}, {"F_final", f_full}, {"t_half", h.times[half]}};
  const bool decaying = std::any_of(h1.begin(), h1.begin() + static_cast<std::ptrdiff_t>(half) + 1,
                                    [&](double x) { return x < 0.5 * h1.front(); });
  if (!trivial && (!decaying || half == 0)) {
    h.verdict.status = Status::Inconclusive;
    h.verdict.note += " (inconclusive: decay has not begun by T/2)";
  }
  return h;
}

Band band(const Trajectory& traj, Field field, double t_end) {
  Band b{kInf, -kInf};
  for (const auto& snap : traj.snapshots) {
    if (snap.state.t > t_end + 1e-12) {
      break;
    }
    const auto f = snap.state.field(field);
    const auto [mn, mx] = std::minmax_element(f.begin(), f.end());
    b.lo = std::min(b.lo, *mn);
    b.hi = std::max(b.hi, *mx);
  }
  return b;
}

BandsResult bands_and_decay(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  const Tolerances& tol = traj.config.tol;
  BandsResult r;
  const double T = traj.snapshots.back().state.t;
  const double t_half = traj.snapshots[last_before(traj, 0.5 * T)].state.t;
  r.u_full = band(traj, Field::U, T);
  r.theta_full = band(traj, Field::Theta, T);
  r.u_half = band(traj, Field::U, t_half);
  r.theta_half = band(traj, Field::Theta, t_half);

  auto excess = [](const Band& half, const Band& full) {
    return std::max((full.hi - half.hi) / half.hi, (half.lo - full.lo) / half.lo);
  };
  const double growth = std::max(excess(r.u_half, r.u_full), excess(r.theta_half, r.theta_full));
  r.band_stability = compare_verdict("band_stability", growth, tol.band_tol, 0.0);
  r.band_stability.status = growth < tol.band_tol ? Status::Pass : Status::Fail;
  r.band_stability.note = "relative growth of the u and theta bands from [0, T/2] to [0, T]";
  r.band_stability.details = {{"u_lo", r.u_full.lo},       {"u_hi", r.u_full.hi},
                              {"theta_lo", r.theta_full.lo}, {"theta_hi", r.theta_full.hi},
                              {"u_half_lo", r.u_half.lo},    {"u_half_hi", r.u_half.hi},
                              {"theta_half_lo", r.theta_half.lo}, {"theta_half_hi", r.theta_half.hi},
                              {"t_half", t_half}};
  if (traj.snapshots.size() < 3 || t_half <= 0.0) {
    r.band_stability.status = Status::Inconclusive;
  }

  for (const auto& snap : traj.snapshots) {
    r.h1.push_back(h1_dev(snap.state, mesh));
  }
  const double h0 = r.h1.front();
  if (h0 <= 1e-12) {
    r.decay = compare_verdict("decay", r.h1.back(), tol.decay_fraction * h0, 1e-12);
    r.decay.note = "equilibrium data";
  } else {
    r.decay = compare_verdict("decay", r.h1.back() / h0, tol.decay_fraction, 0.0);
    r.decay.note = "h1_dev(T) / h1_dev(0)";
    const double lowest = *std::min_element(r.h1.begin(), r.h1.end());
    if (lowest >= 0.5 * h0) {
      r.decay.status = Status::Inconclusive;
      r.decay.note += " (inconclusive: h1_dev never fell below half its initial value)";
    }
  }
  r.decay.details = {{"h1_initial", h0}, {"h1_final", r.h1.back()}};

  // Running maximum of 1/theta and the smallest C >= 1 with zeta*(t) <= C e^{C t}.
  std::vector<std::pair<double, double>> zeta_star;
  double zmax = 0.0;
  for (const auto& snap : traj.snapshots) {
    const double th_min = *std::min_element(snap.state.theta.begin(), snap.state.theta.end());
    zmax = std::max(zmax, th_min > 0.0 ? 1.0 / th_min : kInf);
    zeta_star.emplace_back(snap.state.t, zmax);
  }
  r.zeta_max = zmax;
  auto fits = [&](double c) {
    return std::all_of(zeta_star.begin(), zeta_star.end(),
                       [&](const auto& tz) { return tz.second <= c * std::exp(c * tz.first); });
  };
  double lo = 1.0, hi = 1.0;
  if (std::isfinite(zmax)) {
    while (!fits(hi) && hi < 1e6) {
      hi *= 2.0;
    }
    if (!fits(lo)) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? hi : lo) = mid;
      }
    } else {
      hi = 1.0;
    }
  }
  r.zeta_growth = std::isfinite(zmax) ? hi : kInf;
  r.theta_lower = compare_verdict("theta_lower", zmax, kInf, 0.0);
  r.theta_lower.status = std::isfinite(zmax) ? Status::Pass : Status::Fail;
  r.theta_lower.note = "max 1/theta finite; zeta_growth is the fitted C in C exp(C t)";
  r.theta_lower.slack = std::isfinite(zmax) ? 1.0 / zmax : 0.0;
  r.theta_lower.details = {{"theta_min", std::isfinite(zmax) ? 1.0 / zmax : 0.0}, {"zeta_growth", r.zeta_growth}};
  return r;
}

Verdict endpoint_conditions(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  const BoundaryCondition& bc = traj.config.bc;
  double v_end = 0.0, theta_cond = 0.0;
  for (const auto& snap : traj.snapshots) {
    const State& s = snap.state;
    v_end = std::max({v_end, std::abs(s.v.front()), std::abs(s.v.back())});
    if (bc.has_wall()) {
      const double th0 = s.theta.front();
      const double ghost = bc.left(Field::Theta)(th0);
      const double measured = bc.kind == BoundaryKind::HalfLineInsulated ? (th0 - ghost) / mesh.dx()
                                                                          : 0.5 * (th0 + ghost) - 1.0;
      theta_cond = std::max(theta_cond, std::abs(measured));
    }
  }
  Verdict v = compare_verdict("endpoint_conditions", v_end, 0.0, 1e-12);
  if (theta_cond > traj.config.tol.endpoint_tol) {
    v.status = Status::Fail;
  }
  v.note = bc.has_wall() ? (bc.kind == BoundaryKind::HalfLineInsulated ? "v = 0 at both ends; theta_x(0) = 0"
                                                                        : "v = 0 at both ends; theta(0) = 1")
                         : "v = 0 at both ends";
  v.details = {{"max_abs_v_end", v_end}, {"theta_condition", theta_cond}};
  return v;
}

bool DiagnosticsReport::passed() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.ok(); });
}

const Verdict* DiagnosticsReport::find(std::string_view name) const noexcept {
  for (const auto& v : verdicts) {
    if (v.name == name) {
      return &v;
    }
  }
  return nullptr;
}

DiagnosticsReport diagnose(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  const RunConfig& cfg = traj.config;
  DiagnosticsReport report;
  const CrucialHistory crucial = crucial_estimate(traj);
  for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
    const auto& snap = traj.snapshots[m];
    const State& s = snap.state;
    SnapshotRecord rec;
    rec.t = s.t;
    rec.entropy = entropy(s, mesh, cfg.fluid);
    rec.dissipation = dissipation(s, mesh, cfg.fluid, cfg.bc);
    rec.reactant_mass = sum_cells(s.z) * mesh.dx();
    rec.cumulative_reaction = snap.cumulative.reaction;
    std::tie(rec.u_min, rec.u_max) = [&] {
      const auto [a, b] = std::minmax_element(s.u.begin(), s.u.end());
      return std::pair{*a, *b};
    }();
    std::tie(rec.theta_min, rec.theta_max) = [&] {
      const auto [a, b] = std::minmax_element(s.theta.begin(), s.theta.end());
      return std::pair{*a, *b};
    }();
    rec.h1_dev = h1_dev(s, mesh);
    rec.l2_dev = l2_dev(s, mesh);
    rec.zeta_max = 1.0 / rec.theta_min;
    rec.crucial = crucial.values[m];
    report.records.push_back(rec);
  }

  if (traj.snapshots.size() >= 2) {
    report.verdicts.push_back(entropy_budget(traj));
    report.verdicts.push_back(reactant_budget(traj));
  } else {
    for (const char* name : {"entropy_budget", "reactant_budget"}) {
      Verdict v;
      v.name = name;
      v.status = Status::Inconclusive;
      v.note = "needs at least two snapshots";
      report.verdicts.push_back(v);
    }
  }
  report.verdicts.push_back(z_bounds(traj));
  for (double beta : cfg.tol.betas) {
    report.verdicts.push_back(z_lbeta(traj, beta));
  }
  report.verdicts.push_back(localisation(traj).verdict);
  try {
    report.verdicts.push_back(representation_check(traj, default_representation_interval(cfg)).verdict);
  } catch (const std::out_of_range& e) {
    Verdict v;
    v.name = "representation";
    v.status = Status::Inconclusive;
    v.note = e.what();
    report.verdicts.push_back(v);
  }
  report.verdicts.push_back(crucial.verdict);
  BandsResult bands = bands_and_decay(traj);
  report.verdicts.push_back(std::move(bands.band_stability));
  report.verdicts.push_back(std::move(bands.decay));
  report.verdicts.push_back(std::move(bands.theta_lower));
  report.verdicts.push_back(endpoint_conditions(traj));

  report.notes.push_back("representation: B(t,x) is built with the u0(x) prefactor; "
                         "Y(t) carries 1/mu in its exponent");
  report.notes.push_back(fmt::format("localisation: only unit intervals inside [{}, {}] are checked",
                                     mesh.left(), mesh.right()));
  report.notes.push_back("time integrals are the stepper's running sums over every accepted step");
  return report;
}

} // namespace combustion1d
