// Acceptance suite: one pass/fail line per criterion, non-zero exit if any fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "combustion1d/diagnostics.hpp"
#include "combustion1d/oracle.hpp"
#include "combustion1d/solver.hpp"

using namespace combustion1d;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double reactant_mass(const State& s, const Mesh& mesh) {
  double m = 0.0;
  for (double z : s.z) {
    m += z * mesh.dx();
  }
  return m;
}

double max_h1(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  double worst = 0.0;
  for (const auto& snap : traj.snapshots) {
    worst = std::max(worst, h1_dev(snap.state, mesh));
  }
  return worst;
}

RunConfig with_bc(RunConfig c, BoundaryKind kind) {
  c.bc.kind = kind;
  if (kind != BoundaryKind::WholeLine) {
    // Keep dx fixed when the domain halves.
    c.cells /= 2;
  }
  return c;
}

// Large-time hot spot on [-40, 40] with dx = 0.1.
RunConfig long_hot(BoundaryKind kind = BoundaryKind::WholeLine, double T = 50.0) {
  RunConfig c;
  c.half_length = 40.0;
  c.cells = 800;
  c.initial.scenario = Scenario::HotSpot;
  c.final_time = T;
  c.snapshot_every = 0.25;
  return with_bc(c, kind);
}

// Criterion 1.
Outcome equilibrium_fixed_point(BoundaryKind kind) {
  RunConfig c;
  c.cells = 256;
  c.final_time = 10.0;
  c.snapshot_every = 0.5;
  c.bc.kind = kind;
  const double worst = max_h1(run(c));
  return {worst <= 1e-10, fmt::format("max h1_dev = {:.3g} (limit 1e-10)", worst)};
}

// Criterion 2.
Outcome z_maximum_principle(BoundaryKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double zmin = 0.0, zmax = 0.0;
  long steps = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RunConfig c;
    c.bc.kind = kind;
    c.bc.z_end = uniform(0.0, 1.0) < 0.5 ? SpeciesEnd::Dirichlet0 : SpeciesEnd::Neumann0;
    c.cells = std::uniform_int_distribution<int>(64, 128)(rng);
    c.half_length = uniform(6.0, 16.0);
    c.fluid.mu = uniform(0.2, 2.0);
    c.fluid.kappa = uniform(0.2, 2.0);
    c.fluid.q = uniform(0.2, 3.0);
    c.fluid.big_k = uniform(1.0, 30.0);
    c.fluid.d = uniform(0.01, 0.5);
    c.initial.scenario = Scenario::HotSpot;
    c.initial.theta_amp = uniform(0.3, 1.5);
    c.initial.theta_width = uniform(0.5, 2.0);
    c.initial.z_amp = uniform(0.2, 1.0);
    c.initial.z_width = uniform(0.2, 1.5);
    validate(c);
    const Mesh mesh = c.mesh();
    const ReactionRate rate = c.rate();
    State s = initial_state(c);
    for (int k = 0; k < 100; ++k) {
      s = advance(s, c.control, mesh, c.fluid, rate, c.bc).state;
      const auto [lo, hi] = std::minmax_element(s.z.begin(), s.z.end());
      zmin = std::min(zmin, *lo);
      zmax = std::max(zmax, *hi);
      ++steps;
    }
  }
  const bool ok = zmin >= -1e-10 && zmax <= 1.0 + 1e-10;
  return {ok, fmt::format("{} steps over 200 configs: min Z = {:.3g}, max Z = {:.15g}", steps, zmin, zmax)};
}

// Criterion 3.
Outcome lbeta_monotone(const Trajectory& traj) {
  bool ok = true;
  std::string detail;
  for (double beta : {1.0, 2.0, 4.0}) {
    const Verdict v = z_lbeta(traj, beta);
    ok = ok && v.status == Status::Pass;
    detail += fmt::format("beta={}: max increase {:.3g}; ", beta, *v.detail("max_increase"));
  }
  return {ok, detail + "(allowance 1e-9 per step)"};
}

// Criteria 4 and 5 share the two runs.
struct BudgetPair {
  Trajectory coarse, fine;
};

BudgetPair budget_runs() {
  RunConfig c;
  c.half_length = 20.0;
  c.cells = 400;
  c.initial.scenario = Scenario::HotSpot;
  c.final_time = 10.0;
  c.snapshot_every = 0.25;
  c.control.dt_max = 0.02;
  RunConfig f = c;
  f.cells = 800;
  f.control.dt_max = 0.01;
  return {run(c), run(f)};
}

Outcome entropy_budget_check(const BudgetPair& runs) {
  const Verdict a = entropy_budget(runs.coarse), b = entropy_budget(runs.fine);
  const double oa = *a.detail("overshoot"), ob = *b.detail("overshoot");
  const bool shrinks = oa == 0.0 ? ob == 0.0 : ob * 1.7 <= oa;
  const bool ok = a.status == Status::Pass && b.status == Status::Pass && shrinks;
  return {ok, fmt::format("n=400: {:.6g} <= {:.6g} + {:.3g}, overshoot {:.3g}; n=800: {:.6g} <= {:.6g} + {:.3g}, "
                          "overshoot {:.3g}",
                          a.value, a.bound, a.tolerance, oa, b.value, b.bound, b.tolerance, ob)};
}

Outcome reactant_budget_check(const BudgetPair& runs) {
  bool ok = true;
  std::string detail;
  for (const Trajectory* t : {&runs.coarse, &runs.fine}) {
    const Verdict v = reactant_budget(*t);
    const double mismatch = std::abs(*v.detail("mismatch"));
    ok = ok && v.status == Status::Pass && mismatch <= v.tolerance;
    detail += fmt::format("n={}: defect {:.3g}, out-flux {:.3g}, mismatch {:.3g} (tol {:.3g}); ", t->config.cells,
                          *v.detail("defect"), *v.detail("outflux"), mismatch, v.tolerance);
  }
  return {ok, detail};
}

// Criterion 6.
Outcome oracle_ladder() {
  bool ok = true;
  std::string detail;
  for (Scenario sc : {Scenario::ColdBump, Scenario::HotSpot}) {
    RunConfig c;
    c.half_length = 10.0;
    c.initial.scenario = sc;
    c.final_time = 1.0;
    c.snapshot_every = 0.25;
    c.control.dt_max = 0.004; // at n = 256, scaled with dx along the ladder
    const LadderResult r = convergence_ladder(c, {256, 512, 1024}, 4, workers());
    bool decreasing = true;
    for (std::size_t i = 1; i < r.errors.size(); ++i) {
      decreasing = decreasing && r.errors[i] < r.errors[i - 1];
    }
    const double min_order = *std::min_element(r.orders.begin(), r.orders.end());
    ok = ok && decreasing && min_order >= 0.9;
    detail += fmt::format("{}: errors {:.3g}, {:.3g}, {:.3g}; orders {:.3f}, {:.3f}; ", to_string(sc), r.errors[0],
                          r.errors[1], r.errors[2], r.orders[0], r.orders[1]);
  }
  return {ok, detail + "(oracle at 4096 cells)"};
}

// Criterion 7. Cells, step ceiling and snapshot spacing are refined together.
Outcome representation_refinement() {
  std::vector<double> residuals;
  for (auto [n, dt] : {std::pair{512, 0.004}, std::pair{1024, 0.002}}) {
    RunConfig c;
    c.half_length = 10.0;
    c.cells = n;
    c.initial.scenario = Scenario::Compression;
    c.final_time = 1.0;
    c.control.dt_max = dt;
    c.snapshot_every = dt;
    const Trajectory traj = run(c);
    residuals.push_back(representation_check(traj, default_representation_interval(c)).max_residual);
  }
  const double ratio = residuals[0] / residuals[1];
  return {residuals[0] <= 0.05 && ratio >= 1.5,
          fmt::format("residual n=512: {:.3g}, n=1024: {:.3g}, ratio {:.2f} (need <= 0.05 and >= 1.5)", residuals[0],
                      residuals[1], ratio)};
}

// Criterion 8.
Outcome uniform_bands(const Trajectory& full, BoundaryKind kind) {
  const Trajectory half = run(long_hot(kind, 25.0));
  const Band u25 = band(half, Field::U, 25.0), th25 = band(half, Field::Theta, 25.0);
  const Band u50 = band(full, Field::U, 50.0), th50 = band(full, Field::Theta, 50.0);
  auto excess = [](const Band& a, const Band& b) { return std::max((b.hi - a.hi) / a.hi, (a.lo - b.lo) / a.lo); };
  const double growth = std::max(excess(u25, u50), excess(th25, th50));
  const bool ok = growth < 0.05 && th50.lo > 0.0;
  return {ok, fmt::format("u [{:.4f}, {:.4f}] -> [{:.4f}, {:.4f}], theta [{:.4f}, {:.4f}] -> [{:.4f}, {:.4f}], "
                          "growth {:.3g} (< 0.05), min theta {:.4f}",
                          u25.lo, u25.hi, u50.lo, u50.hi, th25.lo, th25.hi, th50.lo, th50.hi, growth, th50.lo)};
}

// Criterion 9.
Outcome large_time_decay(const Trajectory& traj) {
  const Mesh mesh = traj.mesh();
  const double h0 = h1_dev(traj.initial(), mesh), h1 = h1_dev(traj.final(), mesh);
  const double e0 = reactant_mass(traj.initial(), mesh), zt = reactant_mass(traj.final(), mesh);
  const bool ok = h1 <= 0.2 * h0 && zt <= 0.05 * e0;
  return {ok, fmt::format("h1_dev {:.4g} -> {:.4g} (ratio {:.3f}, need <= 0.2); int Z {:.4g} -> {:.3g} (ratio {:.3g}, "
                          "need <= 0.05)",
                          h0, h1, h1 / h0, e0, zt, zt / e0)};
}

// Criterion 10.
Outcome mollification_limit() {
  RunConfig c;
  c.half_length = 20.0;
  c.cells = 400;
  c.initial.scenario = Scenario::HotSpot;
  c.final_time = 10.0;
  c.snapshot_every = 1.0;
  const MollificationStudy s = mollification_study(c, {0.1, 0.05, 0.025}, workers());
  const bool ok = s.cauchy && s.sup_theta_spread <= 0.02;
  return {ok, fmt::format("differences {:.3g} > {:.3g}; distance to raw {:.3g}, {:.3g}, {:.3g}; sup theta spread "
                          "{:.3g} (<= 0.02)",
                          s.rows[0].diff_next, s.rows[1].diff_next, s.rows[0].diff_raw, s.rows[1].diff_raw,
                          s.rows[2].diff_raw, s.sup_theta_spread)};
}

// Criterion 11.
Outcome crucial_saturation(const Trajectory& traj) {
  const CrucialHistory h = crucial_estimate(traj);
  const Verdict& v = h.verdict;
  return {v.status == Status::Pass, fmt::format("F(25) = {:.4g}, F(50) = {:.4g}, growth {:.3g} <= {:.3g}",
                                                *v.detail("F_half"), *v.detail("F_final"), v.value, v.bound)};
}

// Criterion 12: 1-3 and 8-9 under both walls, with the endpoint checks.
Outcome half_line_variants() {
  bool ok = true;
  std::string detail;
  for (auto kind : {BoundaryKind::HalfLineInsulated, BoundaryKind::HalfLineIsothermal}) {
    const Trajectory traj = run(long_hot(kind));
    const Verdict ends = endpoint_conditions(traj);
    const std::vector<std::pair<const char*, Outcome>> parts{
        {"1", equilibrium_fixed_point(kind)},
        {"2", z_maximum_principle(kind, 2024 + static_cast<int>(kind))},
        {"3", lbeta_monotone(traj)},
        {"8", uniform_bands(traj, kind)},
        {"9", large_time_decay(traj)},
    };
    std::string failed;
    for (const auto& [id, o] : parts) {
      if (!o.pass) {
        failed += fmt::format(" {} ({})", id, o.detail);
      }
    }
    const bool ends_ok = ends.status == Status::Pass;
    ok = ok && failed.empty() && ends_ok;
    detail += fmt::format("{}: {}; |v| at ends {:.3g}, wall theta condition {:.3g}; ", to_string(kind),
                          failed.empty() ? "1-3, 8-9 pass" : "failed" + failed, *ends.detail("max_abs_v_end"),
                          *ends.detail("theta_condition"));
  }
  return {ok, detail};
}

} // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    fmt::print("criterion {:>2} {} {}: {} [{:.1f}s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail, secs);
    std::fflush(stdout);
  };

  const Trajectory hot50 = run(long_hot());
  report(1, "equilibrium fixed point", [] { return equilibrium_fixed_point(BoundaryKind::WholeLine); });
  report(2, "reactant maximum principle", [] { return z_maximum_principle(BoundaryKind::WholeLine, 2024); });
  report(3, "reactant L^beta monotonicity", [&] { return lbeta_monotone(hot50); });
  const BudgetPair budgets = budget_runs();
  report(4, "entropy budget", [&] { return entropy_budget_check(budgets); });
  report(5, "reactant budget", [&] { return reactant_budget_check(budgets); });
  report(6, "oracle agreement and order", oracle_ladder);
  report(7, "specific-volume representation", representation_refinement);
  report(8, "uniform bands", [&] { return uniform_bands(hot50, BoundaryKind::WholeLine); });
  report(9, "large-time decay", [&] { return large_time_decay(hot50); });
  report(10, "mollification limit", mollification_limit);
  report(11, "crucial-estimate saturation", [&] { return crucial_saturation(hot50); });
  report(12, "half-line variants", half_line_variants);
  fmt::print("{} of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
