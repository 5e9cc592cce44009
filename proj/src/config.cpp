#include "combustion1d/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace combustion1d {

namespace {

struct BadValue {
  std::string message;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw BadValue{"expected a finite number, got '" + std::string(s) + "'"};
  }
  return value;
}

template <typename Int>
Int to_integer(std::string_view s) {
  Int value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw BadValue{"expected an integer, got '" + std::string(s) + "'"};
  }
  return value;
}

std::optional<double> to_optional_double(std::string_view s) {
  if (s == "auto") {
    return std::nullopt;
  }
  return to_double(s);
}

std::string format_double(double x) { return fmt::format("{}", x); }

std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : "auto"; }

template <typename Enum>
Enum to_enum(std::string_view s, std::initializer_list<std::pair<std::string_view, Enum>> choices) {
  std::string names;
  for (const auto& [name, value] : choices) {
    if (s == name) {
      return value;
    }
    names += names.empty() ? "" : "|";
    names += name;
  }
  throw BadValue{"expected one of " + names + ", got '" + std::string(s) + "'"};
}

const std::initializer_list<std::pair<std::string_view, Scenario>> kScenarioNames = {
    {"equilibrium", Scenario::Equilibrium}, {"cold-bump", Scenario::ColdBump},
    {"hot-spot", Scenario::HotSpot},         {"compression", Scenario::Compression},
    {"profile", Scenario::Profile}};

const std::initializer_list<std::pair<std::string_view, BoundaryKind>> kBoundaryNames = {
    {"whole-line", BoundaryKind::WholeLine},
    {"insulated", BoundaryKind::HalfLineInsulated},
    {"isothermal", BoundaryKind::HalfLineIsothermal}};

const std::initializer_list<std::pair<std::string_view, SpeciesEnd>> kSpeciesEndNames = {
    {"dirichlet", SpeciesEnd::Dirichlet0}, {"neumann", SpeciesEnd::Neumann0}};

const std::initializer_list<std::pair<std::string_view, DomainKind>> kDomainNames = {
    {"whole-line", DomainKind::WholeLine}, {"half-line", DomainKind::HalfLine}};

// Parse-time scratch that is not part of RunConfig proper.
struct Scratch {
  std::optional<DomainKind> domain;
};

struct Key {
  std::string section;
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, Scratch&, std::string_view)> set;
};

template <typename Getter>
Key real_key(std::string section, std::string name, Getter ref) {
  return {std::move(section), std::move(name),
          [ref](const RunConfig& c) { return format_double(ref(c)); },
          [ref](RunConfig& c, Scratch&, std::string_view v) { ref(c) = to_double(v); }};
}

template <typename Getter>
Key optional_key(std::string section, std::string name, Getter ref) {
  return {std::move(section), std::move(name),
          [ref](const RunConfig& c) { return format_optional(ref(c)); },
          [ref](RunConfig& c, Scratch&, std::string_view v) { ref(c) = to_optional_double(v); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(real_key("fluid", "a", [](auto& c) -> auto& { return c.fluid.a; }));
    k.push_back(real_key("fluid", "mu", [](auto& c) -> auto& { return c.fluid.mu; }));
    k.push_back(real_key("fluid", "kappa", [](auto& c) -> auto& { return c.fluid.kappa; }));
    k.push_back(real_key("fluid", "q", [](auto& c) -> auto& { return c.fluid.q; }));
    k.push_back(real_key("fluid", "K", [](auto& c) -> auto& { return c.fluid.big_k; }));
    k.push_back(real_key("fluid", "d", [](auto& c) -> auto& { return c.fluid.d; }));

    k.push_back(real_key("reaction", "alpha", [](auto& c) -> auto& { return c.arrhenius.alpha; }));
    k.push_back(real_key("reaction", "A", [](auto& c) -> auto& { return c.arrhenius.act; }));
    k.push_back(real_key("reaction", "theta_ign", [](auto& c) -> auto& { return c.arrhenius.theta_ign; }));
    k.push_back(real_key("reaction", "theta_cap", [](auto& c) -> auto& { return c.arrhenius.theta_cap; }));
    k.push_back(real_key("reaction", "eta", [](auto& c) -> auto& { return c.eta; }));

    k.push_back(real_key("mesh", "L", [](auto& c) -> auto& { return c.half_length; }));
    k.push_back({"mesh", "n", [](const RunConfig& c) { return std::to_string(c.cells); },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.cells = to_integer<int>(v); }});
    k.push_back({"mesh", "domain",
                 [](const RunConfig& c) { return std::string(to_string(domain_of(c.bc.kind))); },
                 [](RunConfig&, Scratch& s, std::string_view v) { s.domain = to_enum(v, kDomainNames); }});

    k.push_back({"boundary", "kind", [](const RunConfig& c) { return std::string(to_string(c.bc.kind)); },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.bc.kind = to_enum(v, kBoundaryNames); }});
    k.push_back({"boundary", "z_end", [](const RunConfig& c) { return std::string(to_string(c.bc.z_end)); },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.bc.z_end = to_enum(v, kSpeciesEndNames); }});

    k.push_back({"initial", "scenario",
                 [](const RunConfig& c) { return std::string(to_string(c.initial.scenario)); },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.initial.scenario = to_enum(v, kScenarioNames); }});
    k.push_back(optional_key("initial", "center", [](auto& c) -> auto& { return c.initial.center; }));
    k.push_back(optional_key("initial", "theta_amp", [](auto& c) -> auto& { return c.initial.theta_amp; }));
    k.push_back(real_key("initial", "theta_width", [](auto& c) -> auto& { return c.initial.theta_width; }));
    k.push_back(real_key("initial", "z_amp", [](auto& c) -> auto& { return c.initial.z_amp; }));
    k.push_back(real_key("initial", "z_width", [](auto& c) -> auto& { return c.initial.z_width; }));
    k.push_back(real_key("initial", "z_edge", [](auto& c) -> auto& { return c.initial.z_edge; }));
    k.push_back(real_key("initial", "v_amp", [](auto& c) -> auto& { return c.initial.v_amp; }));
    k.push_back(real_key("initial", "v_width", [](auto& c) -> auto& { return c.initial.v_width; }));
    k.push_back({"initial", "profile", [](const RunConfig& c) { return c.initial.profile; },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.initial.profile = std::string(v); }});
    k.push_back(optional_key("initial", "support_radius",
                             [](auto& c) -> auto& { return c.initial.support_radius; }));

    k.push_back(real_key("time", "T", [](auto& c) -> auto& { return c.final_time; }));
    k.push_back(real_key("time", "snapshot_every", [](auto& c) -> auto& { return c.snapshot_every; }));

    k.push_back(real_key("control", "dt_max", [](auto& c) -> auto& { return c.control.dt_max; }));
    k.push_back(real_key("control", "safety", [](auto& c) -> auto& { return c.control.safety; }));
    k.push_back(real_key("control", "theta_floor", [](auto& c) -> auto& { return c.control.theta_floor; }));
    k.push_back({"control", "max_halvings", [](const RunConfig& c) { return std::to_string(c.control.max_halvings); },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.control.max_halvings = to_integer<int>(v); }});

    k.push_back(real_key("tolerance", "c_tol", [](auto& c) -> auto& { return c.tol.c_tol; }));
    k.push_back(real_key("tolerance", "z_tol", [](auto& c) -> auto& { return c.tol.z_tol; }));
    k.push_back(real_key("tolerance", "lbeta_tol", [](auto& c) -> auto& { return c.tol.lbeta_tol; }));
    k.push_back({"tolerance", "betas",
                 [](const RunConfig& c) {
                   std::string out;
                   for (double b : c.tol.betas) {
                     out += (out.empty() ? "" : ", ") + format_double(b);
                   }
                   return out;
                 },
                 [](RunConfig& c, Scratch&, std::string_view v) {
                   c.tol.betas.clear();
                   while (!v.empty()) {
                     const auto comma = v.find(',');
                     c.tol.betas.push_back(to_double(trim(v.substr(0, comma))));
                     v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
                   }
                 }});
    k.push_back(real_key("tolerance", "decay_fraction", [](auto& c) -> auto& { return c.tol.decay_fraction; }));
    k.push_back(real_key("tolerance", "band_tol", [](auto& c) -> auto& { return c.tol.band_tol; }));
    k.push_back(real_key("tolerance", "saturation", [](auto& c) -> auto& { return c.tol.saturation; }));
    k.push_back(real_key("tolerance", "rep_tol", [](auto& c) -> auto& { return c.tol.rep_tol; }));
    k.push_back(real_key("tolerance", "rep_max_gap", [](auto& c) -> auto& { return c.tol.rep_max_gap; }));
    k.push_back({"tolerance", "rep_k",
                 [](const RunConfig& c) { return c.tol.rep_k ? std::to_string(*c.tol.rep_k) : std::string("auto"); },
                 [](RunConfig& c, Scratch&, std::string_view v) {
                   c.tol.rep_k = v == "auto" ? std::nullopt : std::optional<int>(to_integer<int>(v));
                 }});
    k.push_back(real_key("tolerance", "jensen_tol", [](auto& c) -> auto& { return c.tol.jensen_tol; }));
    k.push_back(real_key("tolerance", "endpoint_tol", [](auto& c) -> auto& { return c.tol.endpoint_tol; }));

    k.push_back({"output", "dir", [](const RunConfig& c) { return c.output_dir; },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.output_dir = std::string(v); }});
    k.push_back({"output", "seed", [](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, Scratch&, std::string_view v) { c.seed = to_integer<std::uint64_t>(v); }});
    return k;
  }();
  return table;
}

const Key* find_key(std::string_view section, std::string_view name) {
  for (const auto& key : keys()) {
    if (key.section == section && key.name == name) {
      return &key;
    }
  }
  return nullptr;
}

bool known_section(std::string_view section) {
  return std::any_of(keys().begin(), keys().end(), [&](const Key& k) { return k.section == section; });
}

void check_positive(std::vector<std::string>& issues, std::string_view path, double value) {
  if (!(value > 0.0)) {
    issues.push_back(fmt::format("{}: must be positive, got {}", path, value));
  }
}

// Tabulated profile: columns x u v theta z; outside the table the far field applies.
struct Profile {
  std::vector<double> x, u, v, theta, z;

  [[nodiscard]] double at(const std::vector<double>& col, double xi, double far) const {
    if (x.empty() || xi < x.front() || xi > x.back()) {
      return far;
    }
    const auto it = std::upper_bound(x.begin(), x.end(), xi);
    if (it == x.end()) {
      return col.back();
    }
    const auto i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) {
      return col.front();
    }
    const double w = (xi - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - w) * col[i - 1] + w * col[i];
  }
};

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"initial.profile: cannot open '" + path + "'"});
  }
  Profile p;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') {
      continue;
    }
    std::istringstream row{std::string(body)};
    double cols[5];
    for (double& c : cols) {
      if (!(row >> c)) {
        throw ConfigError({fmt::format("initial.profile: line {} needs 5 columns (x u v theta z)", line_no)});
      }
    }
    if (!p.x.empty() && !(cols[0] > p.x.back())) {
      throw ConfigError({fmt::format("initial.profile: line {}: x must increase", line_no)});
    }
    p.x.push_back(cols[0]);
    p.u.push_back(cols[1]);
    p.v.push_back(cols[2]);
    p.theta.push_back(cols[3]);
    p.z.push_back(cols[4]);
  }
  if (p.x.size() < 2) {
    throw ConfigError({"initial.profile: need at least two rows"});
  }
  return p;
}

std::vector<std::string> validation_issues(const RunConfig& c) {
  std::vector<std::string> issues;
  check_positive(issues, "fluid.a", c.fluid.a);
  check_positive(issues, "fluid.mu", c.fluid.mu);
  check_positive(issues, "fluid.kappa", c.fluid.kappa);
  check_positive(issues, "fluid.q", c.fluid.q);
  check_positive(issues, "fluid.K", c.fluid.big_k);
  check_positive(issues, "fluid.d", c.fluid.d);

  if (!(c.arrhenius.alpha >= 0.0)) {
    issues.push_back("reaction.alpha: must be non-negative");
  }
  check_positive(issues, "reaction.A", c.arrhenius.act);
  check_positive(issues, "reaction.theta_ign", c.arrhenius.theta_ign);
  if (!(c.arrhenius.theta_cap >= c.arrhenius.theta_ign)) {
    issues.push_back("reaction.theta_cap: must not be below theta_ign");
  }
  if (!(c.eta >= 0.0)) {
    issues.push_back("reaction.eta: must be non-negative");
  }

  check_positive(issues, "mesh.L", c.half_length);
  if (c.cells < 8) {
    issues.push_back(fmt::format("mesh.n: need at least 8 cells, got {}", c.cells));
  }

  if (!(c.final_time >= 0.0)) {
    issues.push_back("time.T: must be non-negative");
  }
  check_positive(issues, "time.snapshot_every", c.snapshot_every);

  check_positive(issues, "control.dt_max", c.control.dt_max);
  if (!(c.control.safety > 0.0 && c.control.safety <= 1.0)) {
    issues.push_back("control.safety: must lie in (0, 1]");
  }
  check_positive(issues, "control.theta_floor", c.control.theta_floor);
  if (c.control.max_halvings < 0) {
    issues.push_back("control.max_halvings: must be non-negative");
  }

  check_positive(issues, "tolerance.c_tol", c.tol.c_tol);
  check_positive(issues, "tolerance.z_tol", c.tol.z_tol);
  check_positive(issues, "tolerance.lbeta_tol", c.tol.lbeta_tol);
  if (c.tol.betas.empty()) {
    issues.push_back("tolerance.betas: need at least one exponent");
  }
  for (double b : c.tol.betas) {
    if (!(b >= 1.0)) {
      issues.push_back(fmt::format("tolerance.betas: exponent {} is below 1", b));
    }
  }
  check_positive(issues, "tolerance.decay_fraction", c.tol.decay_fraction);
  check_positive(issues, "tolerance.band_tol", c.tol.band_tol);
  check_positive(issues, "tolerance.saturation", c.tol.saturation);
  check_positive(issues, "tolerance.rep_tol", c.tol.rep_tol);
  check_positive(issues, "tolerance.rep_max_gap", c.tol.rep_max_gap);
  check_positive(issues, "tolerance.jensen_tol", c.tol.jensen_tol);
  check_positive(issues, "tolerance.endpoint_tol", c.tol.endpoint_tol);

  const InitialData& init = c.initial;
  check_positive(issues, "initial.theta_width", init.theta_width);
  check_positive(issues, "initial.z_width", init.z_width);
  check_positive(issues, "initial.z_edge", init.z_edge);
  check_positive(issues, "initial.v_width", init.v_width);
  if (!(init.z_amp >= 0.0 && init.z_amp <= 1.0)) {
    issues.push_back(fmt::format("initial.z_amp: reactant fraction must lie in [0, 1], got {}", init.z_amp));
  }
  if (init.theta_amp && !(*init.theta_amp > -1.0)) {
    issues.push_back("initial.theta_amp: temperature must stay positive (theta_amp > -1)");
  }
  if (init.scenario == Scenario::ColdBump && !(1.0 + std::max(0.0, init.theta_amp_or()) < c.arrhenius.theta_ign)) {
    issues.push_back("initial.theta_amp: cold-bump peak must stay below reaction.theta_ign");
  }
  if (init.scenario == Scenario::Profile && init.profile.empty()) {
    issues.push_back("initial.profile: the profile scenario needs a file path");
  }
  if (init.support_radius && !(*init.support_radius > 0.0)) {
    issues.push_back("initial.support_radius: must be positive");
  }
  return issues;
}

// Checks (1.8)-type bounds and the support radius on the discrete initial data.
void check_initial_state(const RunConfig& c, const State& s, std::vector<std::string>& issues) {
  const Mesh mesh = c.mesh();
  const double center = c.initial.center_or(mesh);
  const double radius = c.initial.support_or(mesh);
  if (center < mesh.left() || center > mesh.right()) {
    issues.push_back("initial.center: outside the domain");
  }
  double u_min = INFINITY, th_min = INFINITY, z_min = INFINITY, z_max = -INFINITY, outside = 0.0;
  for (int j = 0; j < mesh.cells(); ++j) {
    const auto i = static_cast<std::size_t>(j);
    u_min = std::min(u_min, s.u[i]);
    th_min = std::min(th_min, s.theta[i]);
    z_min = std::min(z_min, s.z[i]);
    z_max = std::max(z_max, s.z[i]);
    if (std::abs(mesh.cell_center(j) - center) > radius) {
      outside = std::max({outside, std::abs(s.u[i] - 1.0), std::abs(s.theta[i] - 1.0), std::abs(s.z[i])});
    }
  }
  for (int i = 0; i < mesh.nodes(); ++i) {
    if (std::abs(mesh.node(i) - center) > radius) {
      outside = std::max(outside, std::abs(s.v[static_cast<std::size_t>(i)]));
    }
  }
  if (!(u_min > 0.0)) {
    issues.push_back(fmt::format("initial: specific volume must be positive (min u0 = {})", u_min));
  }
  if (!(th_min > 0.0)) {
    issues.push_back(fmt::format("initial: temperature must be positive (min theta0 = {})", th_min));
  }
  if (!(z_min >= 0.0 && z_max <= 1.0)) {
    issues.push_back(fmt::format("initial: reactant fraction must lie in [0, 1] (range [{}, {}])", z_min, z_max));
  }
  if (outside > 1e-12) {
    issues.push_back(fmt::format("initial.support_radius: deviation {} outside radius {} of the center", outside,
                                 radius));
  }
}

State generate(const RunConfig& c) {
  const Mesh mesh = c.mesh();
  State s = State::equilibrium(mesh);
  const InitialData& init = c.initial;
  const double center = init.center_or(mesh);
  switch (init.scenario) {
  case Scenario::Equilibrium:
    break;
  case Scenario::ColdBump:
  case Scenario::HotSpot:
    for (int j = 0; j < mesh.cells(); ++j) {
      const double x = mesh.cell_center(j) - center;
      const auto i = static_cast<std::size_t>(j);
      s.theta[i] = 1.0 + init.theta_amp_or() * unit_bump(x / init.theta_width);
      if (init.scenario == Scenario::HotSpot) {
        s.z[i] = init.z_amp * plateau(x, init.z_width, init.z_edge);
      }
    }
    break;
  case Scenario::Compression:
    for (int i = 1; i < mesh.cells(); ++i) {
      const double sx = (mesh.node(i) - center) / init.v_width;
      s.v[static_cast<std::size_t>(i)] = -init.v_amp * sx * unit_bump(sx);
    }
    break;
  case Scenario::Profile: {
    const Profile p = load_profile(init.profile);
    for (int j = 0; j < mesh.cells(); ++j) {
      const double x = mesh.cell_center(j);
      const auto i = static_cast<std::size_t>(j);
      s.u[i] = p.at(p.u, x, 1.0);
      s.theta[i] = p.at(p.theta, x, 1.0);
      s.z[i] = p.at(p.z, x, 0.0);
    }
    for (int i = 1; i < mesh.cells(); ++i) {
      s.v[static_cast<std::size_t>(i)] = p.at(p.v, mesh.node(i), 0.0);
    }
    break;
  }
  }
  return s;
}

} // namespace

void StepControl::validate() const {
  if (!(dt_max > 0.0) || !(safety > 0.0 && safety <= 1.0) || !(theta_floor > 0.0) || max_halvings < 0) {
    throw std::invalid_argument("invalid step control");
  }
}

double InitialData::center_or(const Mesh& mesh) const {
  if (center) {
    return *center;
  }
  return mesh.kind() == DomainKind::WholeLine ? 0.0 : 0.25 * mesh.half_length();
}

double InitialData::support_or(const Mesh& mesh) const {
  return support_radius ? *support_radius : 0.5 * mesh.half_length();
}

double InitialData::theta_amp_or() const {
  if (theta_amp) {
    return *theta_amp;
  }
  return scenario == Scenario::ColdBump ? 0.15 : 0.5;
}

ReactionRate RunConfig::rate() const {
  ReactionRate raw(arrhenius);
  return eta > 0.0 ? raw.mollified(eta) : raw;
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string what = "invalid configuration";
        for (const auto& issue : issues) {
          what += "\n  " + issue;
        }
        return what;
      }()),
      issues_(std::move(issues)) {}

void validate(const RunConfig& config) {
  auto issues = validation_issues(config);
  if (issues.empty()) {
    if (domain_of(config.bc.kind) == DomainKind::HalfLine && config.half_length < 1.0) {
      issues.push_back("mesh.L: half line needs L >= 1");
    }
  }
  if (issues.empty()) {
    try {
      check_initial_state(config, generate(config), issues);
    } catch (const ConfigError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
  }
  if (!issues.empty()) {
    throw ConfigError(std::move(issues));
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  Scratch scratch;
  std::vector<std::string> issues;
  std::map<std::string, int> seen;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    const auto line = trim(text.substr(0, newline));
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back(fmt::format("line {}: unterminated section header", line_no));
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) {
        issues.push_back(fmt::format("line {}: unknown section [{}]", line_no, section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back(fmt::format("line {}: expected 'key = value'", line_no));
      continue;
    }
    const auto name = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const std::string path = section + "." + std::string(name);
    if (section.empty()) {
      issues.push_back(fmt::format("line {}: key '{}' outside any section", line_no, name));
      continue;
    }
    const Key* key = find_key(section, name);
    if (key == nullptr) {
      if (known_section(section)) {
        issues.push_back(fmt::format("{}: unknown key (line {})", path, line_no));
      }
      continue;
    }
    if (seen[path]++ > 0) {
      issues.push_back(fmt::format("{}: duplicate key (line {})", path, line_no));
      continue;
    }
    try {
      key->set(config, scratch, value);
    } catch (const BadValue& bad) {
      issues.push_back(fmt::format("{}: {} (line {})", path, bad.message, line_no));
    }
  }
  if (scratch.domain && *scratch.domain != domain_of(config.bc.kind)) {
    issues.push_back("mesh.domain: does not match boundary.kind");
  }
  if (!issues.empty()) {
    auto more = validation_issues(config);
    issues.insert(issues.end(), more.begin(), more.end());
    throw ConfigError(std::move(issues));
  }
  validate(config);
  return config;
}

std::string to_text(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& key : keys()) {
    if (key.section != section) {
      out += (section.empty() ? "" : "\n") + ("[" + key.section + "]\n");
      section = key.section;
    }
    out += key.name + " = " + key.get(config) + "\n";
  }
  return out;
}

void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) {
    throw ConfigError({"override '" + std::string(dotted_key) + "': expected section.key"});
  }
  const Key* key = find_key(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (key == nullptr) {
    throw ConfigError({std::string(dotted_key) + ": unknown key"});
  }
  Scratch scratch;
  try {
    key->set(config, scratch, trim(value));
  } catch (const BadValue& bad) {
    throw ConfigError({std::string(dotted_key) + ": " + bad.message});
  }
  validate(config);
}

State initial_state(const RunConfig& config) { return generate(config); }

std::vector<ScenarioInfo> scenarios() {
  return {
      {"equilibrium", "far-field rest state (u, v, theta, Z) = (1, 0, 1, 0)"},
      {"cold-bump", "temperature bump below ignition, no reactant"},
      {"hot-spot", "temperature bump above ignition over a reactant plateau"},
      {"compression", "compressive velocity pulse on the rest state"},
      {"profile", "tabulated x u v theta z columns from initial.profile"},
  };
}

std::string_view to_string(Scenario s) noexcept {
  for (const auto& [name, value] : kScenarioNames) {
    if (value == s) {
      return name;
    }
  }
  return "";
}

double unit_bump(double s) noexcept {
  if (s <= -1.0 || s >= 1.0) {
    return 0.0;
  }
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double plateau(double r, double width, double edge) noexcept {
  const double s = std::abs(r);
  if (s <= width) {
    return 1.0;
  }
  if (s >= width + edge) {
    return 0.0;
  }
  // Smooth transition f(t) / (f(t) + f(1 - t)) with f(t) = exp(-1/t).
  const double t = (width + edge - s) / edge;
  const double f0 = std::exp(-1.0 / t);
  const double f1 = std::exp(-1.0 / (1.0 - t));
  return f0 / (f0 + f1);
}

} // namespace combustion1d
