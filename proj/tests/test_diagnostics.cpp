#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "combustion1d/diagnostics.hpp"
#include "combustion1d/solver.hpp"

using namespace combustion1d;

namespace {

// 1 - log 2, 30 digits.
constexpr double kPsiTwo = 0.306852819440054690582767878542;

Trajectory equilibrium_run(double T = 2.0) {
  RunConfig c;
  c.half_length = 8.0;
  c.cells = 64;
  c.final_time = T;
  c.snapshot_every = 0.2;
  return run(c);
}

RunConfig hot_config() {
  RunConfig c;
  c.half_length = 8.0;
  c.cells = 128;
  c.initial.scenario = Scenario::HotSpot;
  c.final_time = 1.0;
  c.snapshot_every = 0.1;
  return c;
}

void mark_unit_region(State& s, const Mesh& mesh, std::vector<double> State::*field, double value) {
  for (int j = 0; j < mesh.cells(); ++j) {
    const double x = mesh.cell_center(j);
    if (x > 0.0 && x < 1.0) {
      (s.*field)[static_cast<std::size_t>(j)] = value;
    }
  }
}

bool same(const Verdict& a, const Verdict& b) {
  return a.name == b.name && a.value == b.value && a.bound == b.bound && a.slack == b.slack &&
         a.tolerance == b.tolerance && a.status == b.status && a.note == b.note && a.details == b.details;
}

} // namespace

TEST_CASE("psi") {
  CHECK(psi(1.0) == 0.0);
  CHECK(psi(2.0) == doctest::Approx(kPsiTwo).epsilon(1e-15));
  for (double s : {0.01, 0.5, 0.99, 1.01, 3.0, 100.0}) {
    CHECK(psi(s) > 0.0);
  }
}

TEST_CASE("entropy of a doubled specific volume on a unit region") {
  const Mesh mesh(4.0, 32);
  FluidParams p;
  p.a = 1.7;
  State s = State::equilibrium(mesh);
  CHECK(entropy(s, mesh, p) == 0.0);
  mark_unit_region(s, mesh, &State::u, 2.0);
  CHECK(entropy(s, mesh, p) == doctest::Approx(1.7 * kPsiTwo).epsilon(1e-14));
  s.u[3] = -1.0;
  CHECK_THROWS_AS((void)entropy(s, mesh, p), std::domain_error);
}

TEST_CASE("entropy is non-negative and vanishes only at rest") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Mesh mesh(4.0, 32);
  const FluidParams p;
  for (int trial = 0; trial < 100; ++trial) {
    State s = State::equilibrium(mesh);
    const auto j = static_cast<std::size_t>(trial % 32);
    s.u[j] = 0.2 + 2.0 * unit(rng);
    s.theta[(j + 5) % 32] = 0.2 + 2.0 * unit(rng);
    s.v[(j + 9) % 33] = unit(rng) - 0.5;
    CHECK(entropy(s, mesh, p) > 0.0);
    CHECK(dissipation(s, mesh, p) >= 0.0);
    CHECK(crucial_integrand(s, mesh) >= 0.0);
    CHECK(level_integral(s, mesh) >= 0.0);
  }
}

TEST_CASE("dissipation of a unit velocity ramp") {
  const Mesh mesh(4.0, 32);
  FluidParams p;
  p.mu = 2.5;
  State s = State::equilibrium(mesh);
  CHECK(dissipation(s, mesh, p) == 0.0);
  for (int i = 0; i <= 32; ++i) {
    s.v[static_cast<std::size_t>(i)] = std::clamp(mesh.node(i), 0.0, 1.0);
  }
  CHECK(dissipation(s, mesh, p) == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("effective viscous flux") {
  const Mesh mesh(4.0, 32);
  FluidParams p;
  p.a = 1.3;
  p.mu = 0.7;
  State s = State::equilibrium(mesh);
  for (double sigma : effective_viscous_flux(s, mesh, p)) {
    CHECK(sigma == doctest::Approx(-1.3).epsilon(1e-15));
  }
  for (int i = 0; i <= 32; ++i) {
    s.v[static_cast<std::size_t>(i)] = 0.4 * mesh.node(i);
  }
  for (double sigma : effective_viscous_flux(s, mesh, p)) {
    CHECK(sigma == doctest::Approx(0.7 * 0.4 - 1.3).epsilon(1e-13));
  }
}

TEST_CASE("level and reaction integrals") {
  const Mesh mesh(4.0, 32);
  State s = State::equilibrium(mesh);
  CHECK(level_integral(s, mesh) == 0.0);
  mark_unit_region(s, mesh, &State::theta, 3.0);
  CHECK(level_integral(s, mesh) == doctest::Approx(1.0).epsilon(1e-14));
  mark_unit_region(s, mesh, &State::z, 0.5);
  const FluidParams p;
  const ReactionRate rate;
  CHECK(reaction_integral(s, mesh, p, rate) == doctest::Approx(p.big_k * rate(3.0) * 0.5).epsilon(1e-14));
  CHECK(z_power_integral(s, mesh, 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  s.z[0] = -0.1;
  CHECK(z_power_integral(s, mesh, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("equilibrium run passes every verdict") {
  const Trajectory traj = equilibrium_run();
  const DiagnosticsReport report = diagnose(traj);
  CHECK(report.passed());
  const Verdict* e = report.find("entropy_budget");
  REQUIRE(e != nullptr);
  CHECK(e->status == Status::Pass);
  CHECK(std::abs(e->value) <= 1e-12);
  CHECK(e->bound == 0.0);
  CHECK(report.find("reactant_budget")->value == 0.0);
  for (const auto& rec : report.records) {
    CHECK(rec.h1_dev <= 1e-12);
    CHECK(rec.zeta_max == doctest::Approx(1.0));
    CHECK(rec.crucial <= 1e-20);
  }
  CHECK(report.notes.size() == 3);
}

TEST_CASE("localisation at rest") {
  const LocalisationResult r = localisation(equilibrium_run(0.4));
  CHECK(r.gamma1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.gamma2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.max_jensen_gap <= 1e-14);
  CHECK(r.missing_points == 0);
  CHECK(r.intervals_checked > 0);
  CHECK(r.verdict.status == Status::Pass);
}

TEST_CASE("representation at rest and at the initial time") {
  const Trajectory rest = equilibrium_run();
  const RepresentationResult r = representation_check(rest, 0);
  CHECK(r.max_residual <= 1e-8);
  CHECK(r.residuals.front() == 0.0);

  RunConfig c = hot_config();
  c.final_time = 0.0;
  const Trajectory initial = run(c);
  CHECK(representation_check(initial, 1).residuals.front() == 0.0);
  CHECK_THROWS_AS((void)representation_check(rest, 8), std::out_of_range);
  CHECK_THROWS_AS((void)representation_check(rest, -8), std::out_of_range);
}

TEST_CASE("coarse snapshots leave the representation check inconclusive") {
  RunConfig c = hot_config();
  c.snapshot_every = 0.5;
  const RepresentationResult r = representation_check(run(c), 0);
  CHECK(r.verdict.status == Status::Inconclusive);
  CHECK(*r.verdict.detail("max_gap") == doctest::Approx(0.5));
}

TEST_CASE("bands at rest") {
  const BandsResult b = bands_and_decay(equilibrium_run());
  CHECK(b.u_full.lo == 1.0);
  CHECK(b.u_full.hi == 1.0);
  CHECK(b.theta_full.lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.zeta_max == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.decay.ok());
  CHECK(b.band_stability.ok());
  CHECK(b.theta_lower.status == Status::Pass);
}

TEST_CASE("cold conduction keeps the temperature band") {
  RunConfig c;
  c.half_length = 10.0;
  c.cells = 200;
  c.initial.scenario = Scenario::ColdBump;
  c.final_time = 2.0;
  const Trajectory traj = run(c);
  const Band initial = band(traj, Field::Theta, 0.0);
  const Band all = band(traj, Field::Theta, c.final_time);
  CHECK(initial.hi == doctest::Approx(1.0 + 0.15).epsilon(1e-3));
  CHECK(all.hi <= initial.hi + 1e-12);
  // Expansion cooling lets theta dip slightly below its initial minimum.
  CHECK(all.lo >= initial.lo - 0.02);
}

TEST_CASE("corrupted reactant fails the bounds check") {
  Trajectory traj = run(hot_config());
  CHECK(z_bounds(traj).status == Status::Pass);
  traj.snapshots[3].state.z[40] = 1.5;
  const Verdict v = z_bounds(traj);
  CHECK(v.status == Status::Fail);
  CHECK(v.value == doctest::Approx(0.5));
  CHECK_FALSE(diagnose(traj).passed());
}

TEST_CASE("ignition run: reactant norms decrease and budgets close") {
  const Trajectory traj = run(hot_config());
  const Mesh mesh = traj.mesh();
  for (double beta : {1.0, 2.0, 4.0}) {
    CHECK(z_lbeta(traj, beta).status == Status::Pass);
  }
  for (std::size_t m = 1; m < traj.snapshots.size(); ++m) {
    CHECK(z_power_integral(traj.snapshots[m].state, mesh, 2.0) <
          z_power_integral(traj.snapshots[m - 1].state, mesh, 2.0));
  }
  const Verdict e = entropy_budget(traj);
  CHECK(e.status == Status::Pass);
  CHECK(std::abs(*e.detail("consistency")) <= e.tolerance);
  const Verdict r = reactant_budget(traj);
  CHECK(r.status == Status::Pass);
  CHECK(std::abs(*r.detail("mismatch")) <= 1e-12);
}

TEST_CASE("cold reactant is conserved under pure diffusion") {
  RunConfig c;
  c.bc = {BoundaryKind::HalfLineInsulated, SpeciesEnd::Neumann0};
  c.half_length = 20.0;
  c.cells = 200;
  c.arrhenius.theta_ign = 5.0;
  c.initial.scenario = Scenario::HotSpot;
  c.final_time = 1.0;
  const Trajectory traj = run(c);
  const Mesh mesh = traj.mesh();
  CHECK(z_power_integral(traj.final(), mesh, 1.0) ==
        doctest::Approx(z_power_integral(traj.initial(), mesh, 1.0)).epsilon(1e-10));
  CHECK(traj.snapshots.back().cumulative.reaction == 0.0);
  CHECK(z_lbeta(traj, 1.0).status == Status::Pass);
  CHECK(reactant_budget(traj).status == Status::Pass);
}

TEST_CASE("crucial functional at rest and after ignition") {
  CHECK(crucial_estimate(equilibrium_run()).values.back() <= 1e-20);
  const CrucialHistory h = crucial_estimate(run(hot_config()));
  CHECK(std::is_sorted(h.values.begin(), h.values.end()));
  CHECK(h.values.back() > 0.0);
}

TEST_CASE("endpoint conditions hold on every boundary kind") {
  for (auto kind : {BoundaryKind::WholeLine, BoundaryKind::HalfLineInsulated, BoundaryKind::HalfLineIsothermal}) {
    RunConfig c = hot_config();
    c.bc.kind = kind;
    c.final_time = 0.5;
    CHECK(endpoint_conditions(run(c)).status == Status::Pass);
  }
}

TEST_CASE("diagnostics are pure") {
  const Trajectory traj = run(hot_config());
  const DiagnosticsReport a = diagnose(traj), b = diagnose(traj);
  REQUIRE(a.verdicts.size() == b.verdicts.size());
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    CHECK(same(a.verdicts[i], b.verdicts[i]));
  }
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t m = 0; m < a.records.size(); ++m) {
    CHECK(a.records[m].entropy == b.records[m].entropy);
    CHECK(a.records[m].crucial == b.records[m].crucial);
  }
  CHECK(a.notes == b.notes);
}

TEST_CASE("verdict comparison keeps its slack") {
  const Verdict v = compare_verdict("x", 1.05, 1.0, 0.1);
  CHECK(v.status == Status::Pass);
  CHECK(v.slack == doctest::Approx(-0.05));
  CHECK(compare_verdict("x", 1.2, 1.0, 0.1).status == Status::Fail);
  CHECK(to_string(Status::Inconclusive) == "inconclusive");
}
