#ifndef COMBUSTION1D_CONFIG_HPP
#define COMBUSTION1D_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "combustion1d/grid.hpp"
#include "combustion1d/model.hpp"

namespace combustion1d {

/// Adaptive time-step controls.
struct StepControl {
  double dt_max = 0.05;
  double safety = 0.5;
  double theta_floor = 1e-6;
  int max_halvings = 20;

  void validate() const;
};

enum class Scenario { Equilibrium, ColdBump, HotSpot, Compression, Profile };

/// Named initial-data generator and its parameters.
///
/// Bumps are the compactly supported profile exp(1 - 1/(1 - s^2)) of unit
/// height; the reactant plateau equals z_amp on |x - center| <= z_width and
/// falls to zero smoothly across z_edge.
struct InitialData {
  Scenario scenario = Scenario::Equilibrium;
  std::optional<double> center;   // default: 0 on the whole line, L/4 on the half line
  std::optional<double> theta_amp; // bump height of theta - 1; default 0.5 hot, 0.15 cold
  double theta_width = 1.0;       // bump half-width
  double z_amp = 1.0;
  double z_width = 0.5;
  double z_edge = 0.5;
  double v_amp = 0.3;             // compression velocity amplitude
  double v_width = 2.0;
  std::string profile;            // tabulated profile path for Scenario::Profile
  std::optional<double> support_radius; // default: L/2

  [[nodiscard]] double center_or(const Mesh& mesh) const;
  [[nodiscard]] double support_or(const Mesh& mesh) const;
  [[nodiscard]] double theta_amp_or() const;
};

/// Thresholds used by the diagnostics verdicts.
struct Tolerances {
  double c_tol = 10.0;
  double z_tol = 1e-10;
  double lbeta_tol = 1e-9;
  std::vector<double> betas{1.0, 2.0, 4.0};
  double decay_fraction = 0.2;
  double band_tol = 0.05;
  double saturation = 0.1;
  double rep_tol = 0.05;
  double rep_max_gap = 0.25; // coarser snapshot spacing leaves the representation check inconclusive
  std::optional<int> rep_k; // default: round(center)
  double jensen_tol = 1e-12;
  double endpoint_tol = 1e-10;
};

struct RunConfig {
  FluidParams fluid;
  ArrheniusParams arrhenius;
  double eta = 0.0;
  double half_length = 20.0;
  int cells = 256;
  BoundaryCondition bc;
  InitialData initial;
  double final_time = 1.0;
  double snapshot_every = 0.1;
  StepControl control;
  Tolerances tol;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  [[nodiscard]] Mesh mesh() const { return Mesh(half_length, cells, domain_of(bc.kind)); }
  [[nodiscard]] ReactionRate rate() const;
};

/// Every violation found while parsing or validating, each prefixed with its key path.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> issues);
  [[nodiscard]] const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
  std::vector<std::string> issues_;
};

/// Strict parser for the sectioned `key = value` format. Unknown sections or
/// keys, malformed values and failed validation all raise ConfigError.
[[nodiscard]] RunConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(to_text(c)) reproduces c exactly.
[[nodiscard]] std::string to_text(const RunConfig& config);

/// Applies a single `section.key = value` override, then revalidates.
void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value);

/// Validation without parsing; throws ConfigError.
void validate(const RunConfig& config);

/// Discrete initial state of the configured scenario.
[[nodiscard]] State initial_state(const RunConfig& config);

/// Scenario names and one-line descriptions.
struct ScenarioInfo {
  std::string_view name;
  std::string_view description;
};
[[nodiscard]] std::vector<ScenarioInfo> scenarios();
[[nodiscard]] std::string_view to_string(Scenario s) noexcept;

/// C-infinity bump of unit height supported on |s| < 1.
[[nodiscard]] double unit_bump(double s) noexcept;
/// Smooth plateau: 1 on |r| <= width, 0 on |r| >= width + edge.
[[nodiscard]] double plateau(double r, double width, double edge) noexcept;

} // namespace combustion1d

#endif // COMBUSTION1D_CONFIG_HPP
