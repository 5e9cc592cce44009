// combustion1d: run, verify and study reacting compressible flow in one dimension.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "combustion1d/config.hpp"
#include "combustion1d/diagnostics.hpp"
#include "combustion1d/io.hpp"
#include "combustion1d/oracle.hpp"
#include "combustion1d/parallel.hpp"
#include "combustion1d/solver.hpp"

namespace fs = std::filesystem;
using namespace combustion1d;
using nlohmann::json;

namespace {

enum Exit : int { kPass = 0, kVerdictFailure = 1, kConfigError = 2, kSolverAbort = 3 };

struct Common {
  std::string config_path;
  std::string out;
  std::optional<double> snapshot_every;
  unsigned workers = 1;
  bool quiet = false;
};

RunConfig load_config(const Common& opts) {
  RunConfig config = parse_config(read_text(opts.config_path));
  if (opts.snapshot_every) {
    apply_override(config, "time.snapshot_every", fmt::format("{}", *opts.snapshot_every));
  }
  return config;
}

fs::path output_dir(const Common& opts, const RunConfig& config) {
  fs::path dir;
  if (!opts.out.empty()) {
    dir = opts.out;
  } else if (const char* env = std::getenv("COMBUSTION1D_OUT"); env && *env) {
    dir = env;
  } else {
    dir = config.output_dir;
  }
  fs::create_directories(dir);
  return dir;
}

void print_verdicts(const DiagnosticsReport& report) {
  for (const auto& v : report.verdicts) {
    fmt::print("{:<20} {:<12} value={:<12.6g} bound={:<12.6g} tol={:.3g}\n", v.name, to_string(v.status), v.value,
               v.bound, v.tolerance);
  }
}

int report_failure(const fs::path& dir, const json& summary) {
  fmt::print("{}\n", summary.dump());
  write_text(dir / "failure.json", summary.dump(2) + "\n");
  return summary.value("status", "") == "abort" ? kSolverAbort : kVerdictFailure;
}

json abort_json(const SolverAbort& e) {
  return {{"status", "abort"},
          {"time", e.time()},
          {"field", e.field() == Field::U ? "u" : e.field() == Field::Theta ? "theta" : "other"},
          {"message", e.what()}};
}

int cmd_run(const Common& opts) {
  const RunConfig config = load_config(opts);
  const fs::path dir = output_dir(opts, config);
  write_text(dir / "config.txt", to_text(config));
  Trajectory traj;
  try {
    traj = run(config);
  } catch (const SolverAbort& e) {
    return report_failure(dir, abort_json(e));
  }
  const DiagnosticsReport report = diagnose(traj);
  write_trajectory(dir / "trajectory.c1d", traj);
  write_text(dir / "report.json", report_json(report).dump(2) + "\n");
  write_text(dir / "timeseries.csv", timeseries_csv(report));
  if (!opts.quiet) {
    fmt::print("{} snapshots, {} steps, output in {}\n", traj.snapshots.size(), traj.snapshots.back().steps,
               dir.string());
    print_verdicts(report);
  }
  if (!report.passed()) {
    return report_failure(dir, {{"status", "fail"}, {"failed", report_json(report).at("failed")}});
  }
  return kPass;
}

int cmd_verify(const Common& opts, const std::string& path, const std::string& report_path) {
  const Trajectory traj = read_trajectory(path);
  const DiagnosticsReport report = diagnose(traj);
  // Round trip so non-finite values compare the way they were stored (as null).
  const json fresh = json::parse(report_json(report).dump());
  if (!opts.quiet) {
    print_verdicts(report);
  }
  if (!opts.out.empty()) {
    fs::create_directories(opts.out);
    write_text(fs::path(opts.out) / "report.json", fresh.dump(2) + "\n");
  }
  const fs::path stored = report_path.empty() ? fs::path(path).parent_path() / "report.json" : fs::path(report_path);
  bool mismatch = false;
  if (fs::exists(stored)) {
    const json old = json::parse(read_text(stored));
    mismatch = old.at("verdicts") != fresh.at("verdicts");
    if (!opts.quiet) {
      fmt::print("embedded report {}: {}\n", stored.string(), mismatch ? "differs" : "reproduced");
    }
  }
  if (!report.passed() || mismatch) {
    json summary{{"status", "fail"}, {"failed", fresh.at("failed")}, {"report_mismatch", mismatch}};
    fmt::print("{}\n", summary.dump());
    return kVerdictFailure;
  }
  return kPass;
}

int cmd_convergence(const Common& opts, const std::vector<int>& ladder, int refine, double min_order) {
  const RunConfig config = load_config(opts);
  const fs::path dir = output_dir(opts, config);
  LadderResult result;
  try {
    result = convergence_ladder(config, ladder, refine, opts.workers);
  } catch (const SolverAbort& e) {
    return report_failure(dir, abort_json(e));
  }
  std::string csv = "cells,l2_error,l2_u,l2_v,l2_theta,l2_z,order\n";
  json rows = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& f = result.tables[i].final();
    const std::string order = i == 0 ? "" : fmt::format("{}", result.orders[i - 1]);
    csv += fmt::format("{},{},{},{},{},{},{}\n", result.cells[i], result.errors[i], f.l2[0], f.l2[1], f.l2[2],
                       f.l2[3], order);
    rows.push_back({{"cells", result.cells[i]}, {"l2_error", result.errors[i]}});
    if (i > 0) {
      rows.back()["order"] = result.orders[i - 1];
      ok = ok && result.orders[i - 1] >= min_order && result.errors[i] < result.errors[i - 1];
    }
  }
  write_text(dir / "convergence.csv", csv);
  write_text(dir / "convergence.json",
             json{{"reference_cells", result.reference_cells}, {"min_order", min_order}, {"rungs", rows}, {"passed", ok}}
                     .dump(2) +
                 "\n");
  if (!opts.quiet) {
    fmt::print("reference: explicit oracle on {} cells\n{}", result.reference_cells, csv);
  }
  if (!ok) {
    return report_failure(dir, {{"status", "fail"}, {"failed", json::array({"observed_order"})}});
  }
  return kPass;
}

// "section.key=v1,v2,v3"
std::pair<std::string, std::vector<std::string>> parse_axis(const std::string& axis) {
  const auto eq = axis.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError({fmt::format("--grid {}: expected section.key=v1,v2,...", axis)});
  }
  std::vector<std::string> values;
  std::string rest = axis.substr(eq + 1);
  for (std::size_t pos = 0;;) {
    const auto comma = rest.find(',', pos);
    values.push_back(rest.substr(pos, comma - pos));
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return {axis.substr(0, eq), values};
}

int cmd_sweep(const Common& opts, const std::vector<std::string>& grid) {
  const RunConfig base = load_config(opts);
  const fs::path dir = output_dir(opts, base);
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& g : grid) {
    axes.push_back(parse_axis(g));
  }
  // Cartesian product; every combination is validated before any run starts.
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const auto& [key, values] : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& c : combos) {
      for (const auto& v : values) {
        auto e = c;
        e.emplace_back(key, v);
        next.push_back(std::move(e));
      }
    }
    combos = std::move(next);
  }
  std::vector<RunConfig> configs;
  for (const auto& combo : combos) {
    RunConfig c = base;
    for (const auto& [key, value] : combo) {
      apply_override(c, key, value);
    }
    configs.push_back(c);
  }

  std::vector<json> results(configs.size());
  parallel_for(configs.size(), opts.workers, [&](std::size_t i) {
    json overrides = json::object();
    for (const auto& [key, value] : combos[i]) {
      overrides[key] = value;
    }
    try {
      const DiagnosticsReport report = diagnose(run(configs[i]));
      const json r = report_json(report);
      results[i] = {{"overrides", overrides},
                    {"status", report.passed() ? "pass" : "fail"},
                    {"failed", r.at("failed")},
                    {"verdicts", r.at("verdicts")}};
    } catch (const SolverAbort& e) {
      results[i] = {{"overrides", overrides}, {"status", "abort"}, {"abort", abort_json(e)}};
    }
  });

  std::string csv = "run,overrides,status,failed\n";
  bool any_fail = false, any_abort = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::string failed;
    if (r.contains("failed")) {
      for (const auto& f : r.at("failed")) {
        failed += (failed.empty() ? "" : ";") + f.get<std::string>();
      }
    }
    std::string over;
    for (const auto& [key, value] : combos[i]) {
      over += (over.empty() ? "" : ";") + key + "=" + value;
    }
    const auto status = r.at("status").get<std::string>();
    any_fail = any_fail || status == "fail";
    any_abort = any_abort || status == "abort";
    csv += fmt::format("{},{},{},{}\n", i, over, status, failed);
  }
  write_text(dir / "sweep.csv", csv);
  write_text(dir / "sweep.json", json(results).dump(2) + "\n");
  if (!opts.quiet) {
    fmt::print("{}", csv);
  }
  if (any_abort || any_fail) {
    fmt::print("{}\n", json{{"status", any_abort ? "abort" : "fail"}, {"runs", results.size()}}.dump());
    return any_abort ? kSolverAbort : kVerdictFailure;
  }
  return kPass;
}

int cmd_scenarios() {
  for (const auto& s : scenarios()) {
    fmt::print("{:<14} {}\n", s.name, s.description);
  }
  return kPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-dimensional reacting compressible flow: runs, verification and convergence studies"};
  app.require_subcommand(1);
  Common opts;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config_path, "Run configuration file");
    if (needs_config) {
      c->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--out", opts.out, "Output directory (default: $COMBUSTION1D_OUT, then output.dir)");
    sub->add_option("--workers", opts.workers, "Concurrent runs")->check(CLI::PositiveNumber);
    sub->add_option("--snapshot-every", opts.snapshot_every, "Snapshot interval override")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opts.quiet, "Only print failure summaries");
  };

  auto* run_cmd = app.add_subcommand("run", "Integrate a configuration, write trajectory and report");
  add_common(run_cmd, true);

  std::string traj_path, report_path;
  auto* verify_cmd = app.add_subcommand("verify", "Re-run all diagnostics on a stored trajectory");
  verify_cmd->add_option("trajectory", traj_path, "Trajectory file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--report", report_path, "Report to reproduce (default: report.json next to it)");
  add_common(verify_cmd, false);

  std::vector<int> ladder{256, 512, 1024};
  int refine = 4;
  double min_order = 0.9;
  auto* conv_cmd = app.add_subcommand("convergence", "Refinement ladder against the explicit reference");
  add_common(conv_cmd, true);
  conv_cmd->add_option("--ladder", ladder, "Cell counts, increasing")->delimiter(',');
  conv_cmd->add_option("--refine", refine, "Reference refinement over the finest rung")->check(CLI::Range(2, 64));
  conv_cmd->add_option("--min-order", min_order, "Smallest acceptable observed order");

  std::vector<std::string> grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "Runs over a parameter grid");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--grid", grid, "section.key=v1,v2,... (repeatable)")->required();

  app.add_subcommand("scenarios", "List built-in initial-data scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(opts);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(opts, traj_path, report_path);
    }
    if (conv_cmd->parsed()) {
      return cmd_convergence(opts, ladder, refine, min_order);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(opts, grid);
    }
    return cmd_scenarios();
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) {
      std::cerr << "config error: " << issue << '\n';
    }
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kSolverAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
