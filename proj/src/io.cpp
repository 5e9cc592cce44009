#include "combustion1d/io.hpp"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace combustion1d {

namespace {

using nlohmann::json;

void put_u64(std::string& out, std::uint64_t x) {
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>((x >> (8 * b)) & 0xffu));
  }
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t x = 0;
  for (int b = 0; b < 8; ++b) {
    x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(b)])) << (8 * b);
  }
  return x;
}

void put_f64(std::string& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::string_view in, std::size_t at) { return std::bit_cast<double>(get_u64(in, at)); }

std::size_t record_doubles(std::size_t cells) { return 3 + 4 * cells + 1 + Integrals::kCount; }

json header_json(const Trajectory& traj) {
  const auto n = static_cast<std::size_t>(traj.config.cells);
  json layout = json::array();
  layout.push_back({{"name", "t"}, {"count", 1}});
  layout.push_back({{"name", "dt"}, {"count", 1}});
  layout.push_back({{"name", "steps"}, {"count", 1}});
  layout.push_back({{"name", "u"}, {"count", n}});
  layout.push_back({{"name", "v"}, {"count", n + 1}});
  layout.push_back({{"name", "theta"}, {"count", n}});
  layout.push_back({{"name", "z"}, {"count", n}});
  for (auto name : Integrals::kNames) {
    layout.push_back({{"name", std::string(name)}, {"count", 1}});
  }
  return {{"schema_version", kSchemaVersion},
          {"config", to_text(traj.config)},
          {"encoding", "float64-le"},
          {"layout", layout},
          {"cells", n},
          {"nodes", n + 1},
          {"record_bytes", 8 * record_doubles(n)},
          {"snapshots", traj.snapshots.size()}};
}

std::size_t records_offset(const Trajectory& traj) { return 16 + header_json(traj).dump().size(); }

} // namespace

std::string encode_trajectory(const Trajectory& traj) {
  const std::string header = header_json(traj).dump();
  const auto n = static_cast<std::size_t>(traj.config.cells);
  std::string out(kTrajectoryMagic);
  put_u64(out, header.size());
  out += header;
  out.reserve(out.size() + traj.snapshots.size() * 8 * record_doubles(n));
  for (const auto& snap : traj.snapshots) {
    const State& s = snap.state;
    if (s.u.size() != n || s.v.size() != n + 1 || s.theta.size() != n || s.z.size() != n) {
      throw IoError("snapshot field sizes do not match the configured mesh");
    }
    put_f64(out, s.t);
    put_f64(out, snap.dt);
    put_f64(out, static_cast<double>(snap.steps));
    for (const auto* f : {&s.u, &s.v, &s.theta, &s.z}) {
      for (double x : *f) {
        put_f64(out, x);
      }
    }
    for (double x : snap.cumulative.values()) {
      put_f64(out, x);
    }
  }
  return out;
}

Trajectory decode_trajectory(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 8) != kTrajectoryMagic) {
    throw IoError("not a trajectory file (bad magic)");
  }
  const std::uint64_t hlen = get_u64(bytes, 8);
  if (hlen > bytes.size() - 16) {
    throw IoError("truncated trajectory header");
  }
  json header;
  try {
    header = json::parse(bytes.substr(16, hlen));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed trajectory header: ") + e.what());
  }
  if (header.value("schema_version", 0) != kSchemaVersion) {
    throw IoError(fmt::format("unsupported trajectory schema version {}", header.value("schema_version", 0)));
  }
  Trajectory traj;
  std::size_t n = 0, count = 0, record_bytes = 0;
  try {
    traj.config = parse_config(header.at("config").get<std::string>());
    n = header.at("cells").get<std::size_t>();
    count = header.at("snapshots").get<std::size_t>();
    record_bytes = header.at("record_bytes").get<std::size_t>();
  } catch (const json::exception& e) {
    throw IoError(std::string("incomplete trajectory header: ") + e.what());
  }
  const std::size_t record = 8 * record_doubles(n);
  if (n != static_cast<std::size_t>(traj.config.cells) || record_bytes != record) {
    throw IoError("trajectory header disagrees with its configuration");
  }
  std::size_t at = 16 + hlen;
  if (bytes.size() != at + count * record) {
    throw IoError(fmt::format("trajectory body holds {} bytes, expected {}", bytes.size() - at, count * record));
  }
  for (std::size_t m = 0; m < count; ++m) {
    Snapshot snap;
    auto next = [&] {
      const double x = get_f64(bytes, at);
      at += 8;
      return x;
    };
    snap.state.t = next();
    snap.dt = next();
    snap.steps = static_cast<std::int64_t>(next());
    snap.state.u.resize(n);
    snap.state.v.resize(n + 1);
    snap.state.theta.resize(n);
    snap.state.z.resize(n);
    for (auto* f : {&snap.state.u, &snap.state.v, &snap.state.theta, &snap.state.z}) {
      for (double& x : *f) {
        x = next();
      }
    }
    std::array<double, Integrals::kCount> values{};
    for (double& x : values) {
      x = next();
    }
    snap.cumulative = Integrals::from(values);
    traj.snapshots.push_back(std::move(snap));
  }
  return traj;
}

std::string index_text(const Trajectory& traj) {
  const std::size_t base = records_offset(traj);
  const std::size_t record = 8 * record_doubles(static_cast<std::size_t>(traj.config.cells));
  std::string out;
  for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
    out += fmt::format("{} {}\n", base + m * record, traj.snapshots[m].state.t);
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  write_text(path, encode_trajectory(traj));
  write_text(path.string() + ".idx", index_text(traj));
}

Trajectory read_trajectory(const std::filesystem::path& path) { return decode_trajectory(read_text(path)); }

json verdict_json(const Verdict& v) {
  json details = json::object();
  for (const auto& [key, value] : v.details) {
    details[key] = value;
  }
  return {{"name", v.name},          {"value", v.value}, {"bound", v.bound},
          {"slack", v.slack},        {"tolerance", v.tolerance},
          {"verdict", std::string(to_string(v.status))},
          {"note", v.note},          {"details", details}};
}

json report_json(const DiagnosticsReport& report) {
  json verdicts = json::array();
  json failed = json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back(verdict_json(v));
    if (!v.ok()) {
      failed.push_back(v.name);
    }
  }
  json snapshots = json::array();
  for (const auto& r : report.records) {
    snapshots.push_back({{"t", r.t},
                         {"entropy", r.entropy},
                         {"dissipation", r.dissipation},
                         {"reactant_mass", r.reactant_mass},
                         {"cumulative_reaction", r.cumulative_reaction},
                         {"u_min", r.u_min},
                         {"u_max", r.u_max},
                         {"theta_min", r.theta_min},
                         {"theta_max", r.theta_max},
                         {"h1_dev", r.h1_dev},
                         {"l2_dev", r.l2_dev},
                         {"zeta_max", r.zeta_max},
                         {"crucial", r.crucial}});
  }
  return {{"passed", report.passed()},
          {"failed", failed},
          {"verdicts", verdicts},
          {"notes", report.notes},
          {"snapshots", snapshots}};
}

std::string timeseries_csv(const DiagnosticsReport& report) {
  std::string out = "t,entropy,dissipation,reactant_mass,cumulative_reaction,u_min,u_max,theta_min,theta_max,"
                    "h1_dev,l2_dev,zeta_max,crucial\n";
  for (const auto& r : report.records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.t, r.entropy, r.dissipation, r.reactant_mass,
                       r.cumulative_reaction, r.u_min, r.u_max, r.theta_min, r.theta_max, r.h1_dev, r.l2_dev,
                       r.zeta_max, r.crucial);
  }
  return out;
}

} // namespace combustion1d
