#ifndef COMBUSTION1D_IO_HPP
#define COMBUSTION1D_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "combustion1d/diagnostics.hpp"
#include "combustion1d/trajectory.hpp"

namespace combustion1d {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTrajectoryMagic = "C1DTRAJ1";
inline constexpr int kSchemaVersion = 1;

/// Trajectory file layout:
///   8 bytes   magic "C1DTRAJ1"
///   8 bytes   header length h (little-endian uint64)
///   h bytes   header JSON: schema_version, config (canonical text), layout,
///             cells, nodes, record_bytes, snapshots
///   records   one per snapshot, little-endian float64:
///             t, dt, steps, u[n], v[n+1], theta[n], z[n], then the integrals
[[nodiscard]] std::string encode_trajectory(const Trajectory& traj);
[[nodiscard]] Trajectory decode_trajectory(std::string_view bytes);

/// "offset t" per line, one line per snapshot record.
[[nodiscard]] std::string index_text(const Trajectory& traj);

/// Writes the trajectory and its sidecar index `path.idx`.
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
[[nodiscard]] Trajectory read_trajectory(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json verdict_json(const Verdict& v);
[[nodiscard]] nlohmann::json report_json(const DiagnosticsReport& report);
/// One row per snapshot record.
[[nodiscard]] std::string timeseries_csv(const DiagnosticsReport& report);

void write_text(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

} // namespace combustion1d

#endif // COMBUSTION1D_IO_HPP
