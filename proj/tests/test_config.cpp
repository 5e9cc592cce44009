#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "combustion1d/config.hpp"

using namespace combustion1d;

namespace {

bool any_issue_contains(const ConfigError& e, std::string_view needle) {
  return std::any_of(e.issues().begin(), e.issues().end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

ConfigError expect_error(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError({});
}

std::string fmt_text(std::string_view scenario, std::string_view kind, std::string_view domain) {
  return "[mesh]\nL = 10\nn = 64\ndomain = " + std::string(domain) + "\n[boundary]\nkind = " + std::string(kind) +
         "\n[initial]\nscenario = " + std::string(scenario) + "\n";
}

} // namespace

TEST_CASE("defaults survive a text round trip") {
  const RunConfig c;
  const std::string text = to_text(c);
  const RunConfig back = parse_config(text);
  CHECK(to_text(back) == text);
}

TEST_CASE("non-default values round trip exactly") {
  RunConfig c;
  c.fluid.mu = 0.1 + 0.2;
  c.fluid.big_k = 1.0 / 3.0;
  c.arrhenius.theta_ign = 1.1;
  c.eta = 0.025;
  c.half_length = 7.5;
  c.cells = 300;
  c.bc = {BoundaryKind::HalfLineIsothermal, SpeciesEnd::Neumann0};
  c.initial.scenario = Scenario::HotSpot;
  c.initial.center = 2.0;
  c.initial.theta_amp = 0.7;
  c.tol.betas = {1.0, 3.5};
  c.tol.rep_k = 2;
  c.seed = 12345678901234ULL;
  const RunConfig back = parse_config(to_text(c));
  CHECK(back.fluid.mu == c.fluid.mu);
  CHECK(back.fluid.big_k == c.fluid.big_k);
  CHECK(back.eta == c.eta);
  CHECK(back.cells == 300);
  CHECK(back.bc == c.bc);
  CHECK(back.initial.scenario == Scenario::HotSpot);
  CHECK(back.initial.center == 2.0);
  CHECK(back.tol.betas == c.tol.betas);
  CHECK(back.tol.rep_k == 2);
  CHECK(back.seed == c.seed);
  CHECK(to_text(back) == to_text(c));
}

TEST_CASE("comments and blank lines are ignored; unset keys keep defaults") {
  const RunConfig c = parse_config("# run\n\n[fluid]\nq = 2.5 \n; aside\n[mesh]\nn = 64\n");
  CHECK(c.fluid.q == 2.5);
  CHECK(c.cells == 64);
  CHECK(c.fluid.a == 1.0);
}

TEST_CASE("a negative reaction energy names the key") {
  const auto e = expect_error("[fluid]\nq = -1\n");
  CHECK(any_issue_contains(e, "fluid.q"));
  CHECK(std::string(e.what()).find("fluid.q") != std::string::npos);
}

TEST_CASE("reactant fraction above one is rejected") {
  const auto e = expect_error("[initial]\nscenario = hot-spot\nz_amp = 1.5\n");
  CHECK(any_issue_contains(e, "[0, 1]"));
}

TEST_CASE("unknown sections, unknown keys and duplicates are errors") {
  CHECK(any_issue_contains(expect_error("[fluids]\na = 1\n"), "unknown section"));
  CHECK(any_issue_contains(expect_error("[fluid]\nb = 1\n"), "fluid.b: unknown key"));
  CHECK(any_issue_contains(expect_error("[fluid]\na = 1\na = 2\n"), "duplicate"));
  CHECK(any_issue_contains(expect_error("a = 1\n"), "outside any section"));
  CHECK(any_issue_contains(expect_error("[mesh]\nn = many\n"), "mesh.n"));
}

TEST_CASE("every problem is reported at once") {
  const auto e = expect_error("[fluid]\nq = -1\nmu = 0\n[mesh]\nn = 4\n[nothing]\n");
  CHECK(e.issues().size() >= 3);
  CHECK(any_issue_contains(e, "unknown section"));
  CHECK(any_issue_contains(e, "fluid.mu"));
  CHECK(any_issue_contains(e, "mesh.n"));
}

TEST_CASE("domain must agree with the boundary kind") {
  CHECK(any_issue_contains(expect_error("[mesh]\ndomain = half-line\n"), "mesh.domain"));
  CHECK_NOTHROW((void)parse_config("[mesh]\ndomain = half-line\n[boundary]\nkind = insulated\n"));
}

TEST_CASE("overrides revalidate") {
  RunConfig c;
  apply_override(c, "mesh.n", "128");
  CHECK(c.cells == 128);
  apply_override(c, "initial.center", "auto");
  CHECK_FALSE(c.initial.center.has_value());
  CHECK_THROWS_AS(apply_override(c, "fluid.kappa", "-2"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "fluid.nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "cells", "1"), ConfigError);
}

TEST_CASE("cold bump must stay below ignition") {
  CHECK_NOTHROW((void)parse_config("[initial]\nscenario = cold-bump\n"));
  CHECK(any_issue_contains(expect_error("[initial]\nscenario = cold-bump\ntheta_amp = 0.5\n"), "theta_amp"));
}

TEST_CASE("every named scenario yields a valid initial state") {
  for (const auto& info : scenarios()) {
    if (info.name == "profile") {
      continue;
    }
    for (const char* kind : {"whole-line", "insulated", "isothermal"}) {
      const std::string domain = std::string(kind) == "whole-line" ? "whole-line" : "half-line";
      const RunConfig c = parse_config(fmt_text(info.name, kind, domain));
      const State s = initial_state(c);
      const Mesh mesh = c.mesh();
      CHECK_NOTHROW(check_shape(s, mesh));
      for (std::size_t j = 0; j < s.u.size(); ++j) {
        CHECK(s.u[j] > 0.0);
        CHECK(s.theta[j] > 0.0);
        CHECK(s.z[j] >= 0.0);
        CHECK(s.z[j] <= 1.0);
      }
      if (c.bc.has_wall()) {
        CHECK(s.v.front() == 0.0);
      }
      CHECK(s.v.back() == 0.0);
    }
  }
}

TEST_CASE("hot spot peaks above ignition and carries reactant") {
  const RunConfig c = parse_config("[initial]\nscenario = hot-spot\n");
  const State s = initial_state(c);
  CHECK(*std::max_element(s.theta.begin(), s.theta.end()) > c.arrhenius.theta_ign);
  CHECK(*std::max_element(s.z.begin(), s.z.end()) == doctest::Approx(1.0));
}

TEST_CASE("tabulated profile") {
  const auto path = std::filesystem::temp_directory_path() / "c1d_profile_test.txt";
  {
    std::ofstream out(path);
    out << "# x u v theta z\n-1 1 0 1 0\n0 1.2 0 1.5 0.5\n1 1 0 1 0\n";
  }
  const RunConfig c = parse_config("[mesh]\nL = 4\nn = 40\n[initial]\nscenario = profile\nprofile = " +
                                   path.string() + "\n");
  const State s = initial_state(c);
  CHECK(*std::max_element(s.theta.begin(), s.theta.end()) > 1.4);
  CHECK(s.theta.front() == 1.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)initial_state(c), ConfigError);
}

TEST_CASE("unit bump and plateau") {
  CHECK(unit_bump(0.0) == doctest::Approx(1.0));
  CHECK(unit_bump(1.0) == 0.0);
  CHECK(plateau(0.2, 0.5, 0.5) == 1.0);
  CHECK(plateau(1.0, 0.5, 0.5) == 0.0);
  const double mid = plateau(0.75, 0.5, 0.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
}
