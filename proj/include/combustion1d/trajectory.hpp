#ifndef COMBUSTION1D_TRAJECTORY_HPP
#define COMBUSTION1D_TRAJECTORY_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "combustion1d/config.hpp"
#include "combustion1d/grid.hpp"

namespace combustion1d {

/// Running time integrals accumulated by the stepper over every accepted step
/// since t = 0. Each is a sum of (integrand at the new state) * dt.
struct Integrals {
  double reaction = 0.0;       ///< int int K phi(theta) Z
  double z_outflux = 0.0;      ///< species diffusive flux leaving through both ends
  double dissipation = 0.0;    ///< int int mu v_x^2/(u theta) + kappa theta_x^2/(u theta^2)
  double entropy_source = 0.0; ///< int int (1 - 1/theta) q K phi(theta) Z
  double entropy_inflow = 0.0; ///< entropy flux entering through the ends
  double crucial = 0.0;        ///< int int (1 + theta + v^2) v_x^2 + theta_x^2

  static constexpr std::size_t kCount = 6;
  static constexpr std::array<std::string_view, kCount> kNames{
      "reaction", "z_outflux", "dissipation", "entropy_source", "entropy_inflow", "crucial"};

  [[nodiscard]] std::array<double, kCount> values() const noexcept {
    return {reaction, z_outflux, dissipation, entropy_source, entropy_inflow, crucial};
  }
  static Integrals from(const std::array<double, kCount>& v) noexcept {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  Integrals& operator+=(const Integrals& o) noexcept {
    reaction += o.reaction;
    z_outflux += o.z_outflux;
    dissipation += o.dissipation;
    entropy_source += o.entropy_source;
    entropy_inflow += o.entropy_inflow;
    crucial += o.crucial;
    return *this;
  }
};

struct Snapshot {
  State state;
  double dt = 0.0;         ///< largest accepted step since the previous snapshot (0 initially)
  std::int64_t steps = 0;  ///< accepted steps since t = 0
  Integrals cumulative;
};

/// Ordered snapshots of one run together with the configuration that produced them.
struct Trajectory {
  RunConfig config;
  std::vector<Snapshot> snapshots;

  [[nodiscard]] Mesh mesh() const { return config.mesh(); }
  [[nodiscard]] const State& initial() const { return snapshots.front().state; }
  [[nodiscard]] const State& final() const { return snapshots.back().state; }
  [[nodiscard]] double max_dt() const noexcept {
    double m = 0.0;
    for (const auto& s : snapshots) {
      m = s.dt > m ? s.dt : m;
    }
    return m;
  }
};

} // namespace combustion1d

#endif // COMBUSTION1D_TRAJECTORY_HPP
