#include "combustion1d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace combustion1d {

Mesh::Mesh(double half_length, int cells, DomainKind kind)
    : half_length_(half_length), cells_(cells), kind_(kind) {
  if (!(half_length > 0.0)) {
    throw std::invalid_argument("mesh half length must be positive");
  }
  if (cells < 8) {
    throw std::invalid_argument("mesh needs at least 8 cells, got " + std::to_string(cells));
  }
  left_ = kind == DomainKind::WholeLine ? -half_length : 0.0;
  dx_ = (half_length_ - left_) / cells_;
}

Ghost BoundaryCondition::left(Field field) const noexcept {
  if (!has_wall()) {
    return right(field);
  }
  switch (field) {
  case Field::U:
    return Ghost::reflective();
  case Field::V:
    return Ghost::pinned(0.0);
  case Field::Theta:
    return kind == BoundaryKind::HalfLineInsulated ? Ghost::reflective() : Ghost::face(1.0);
  case Field::Z:
    return z_end == SpeciesEnd::Neumann0 ? Ghost::reflective() : Ghost::face(0.0);
  }
  return {};
}

Ghost BoundaryCondition::right(Field field) const noexcept {
  switch (field) {
  case Field::U:
  case Field::Theta:
    return Ghost::pinned(1.0);
  case Field::V:
  case Field::Z:
    return Ghost::pinned(0.0);
  }
  return {};
}

DomainKind domain_of(BoundaryKind kind) noexcept {
  return kind == BoundaryKind::WholeLine ? DomainKind::WholeLine : DomainKind::HalfLine;
}

State State::equilibrium(const Mesh& mesh) {
  const auto n = static_cast<std::size_t>(mesh.cells());
  return State{0.0, std::vector<double>(n, 1.0), std::vector<double>(n + 1, 0.0),
               std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)};
}

std::span<const double> State::field(Field f) const noexcept {
  switch (f) {
  case Field::U:
    return u;
  case Field::V:
    return v;
  case Field::Theta:
    return theta;
  case Field::Z:
    return z;
  }
  return {};
}

void check_shape(const State& state, const Mesh& mesh) {
  const auto n = static_cast<std::size_t>(mesh.cells());
  if (state.u.size() != n || state.theta.size() != n || state.z.size() != n || state.v.size() != n + 1) {
    throw std::invalid_argument("state fields do not match the mesh");
  }
}

std::vector<double> dnode_to_cell(std::span<const double> f, const Mesh& mesh) {
  if (f.size() != static_cast<std::size_t>(mesh.nodes())) {
    throw std::invalid_argument("dnode_to_cell: expected one value per node");
  }
  std::vector<double> out(static_cast<std::size_t>(mesh.cells()));
  const double inv_dx = 1.0 / mesh.dx();
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (f[j + 1] - f[j]) * inv_dx;
  }
  return out;
}

std::vector<double> dcell_to_node(std::span<const double> g, const Mesh& mesh, Ghost left, Ghost right) {
  if (g.size() != static_cast<std::size_t>(mesh.cells())) {
    throw std::invalid_argument("dcell_to_node: expected one value per cell");
  }
  const std::size_t n = g.size();
  std::vector<double> out(n + 1);
  const double inv_dx = 1.0 / mesh.dx();
  out[0] = (g[0] - left(g[0])) * inv_dx;
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = (g[i] - g[i - 1]) * inv_dx;
  }
  out[n] = (right(g[n - 1]) - g[n - 1]) * inv_dx;
  return out;
}

std::vector<double> dcell_to_node(std::span<const double> g, const Mesh& mesh, const BoundaryCondition& bc,
                                  Field field) {
  return dcell_to_node(g, mesh, bc.left(field), bc.right(field));
}

std::vector<double> cell_to_node(std::span<const double> g, Ghost left, Ghost right) {
  const std::size_t n = g.size();
  std::vector<double> out(n + 1);
  out[0] = 0.5 * (left(g[0]) + g[0]);
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = 0.5 * (g[i - 1] + g[i]);
  }
  out[n] = 0.5 * (g[n - 1] + right(g[n - 1]));
  return out;
}

std::vector<double> node_to_cell(std::span<const double> f) {
  std::vector<double> out(f.size() - 1);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = 0.5 * (f[j] + f[j + 1]);
  }
  return out;
}

double l2_dev(const State& state, const Mesh& mesh) {
  check_shape(state, mesh);
  double sum = 0.0;
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    const double du = state.u[j] - 1.0;
    const double dth = state.theta[j] - 1.0;
    sum += du * du + dth * dth + state.z[j] * state.z[j];
  }
  for (double vi : state.v) {
    sum += vi * vi;
  }
  return std::sqrt(sum * mesh.dx());
}

double h1_dev(const State& state, const Mesh& mesh) {
  const double l2 = l2_dev(state, mesh);
  const double dx = mesh.dx();
  double sum = 0.0;
  auto add_differences = [&](std::span<const double> f) {
    for (std::size_t i = 1; i < f.size(); ++i) {
      const double g = (f[i] - f[i - 1]) / dx;
      sum += g * g;
    }
  };
  add_differences(state.u);
  add_differences(state.v);
  add_differences(state.theta);
  add_differences(state.z);
  return std::sqrt(l2 * l2 + sum * dx);
}

double interval_integral(std::span<const double> cells, int k, const Mesh& mesh) {
  if (cells.size() != static_cast<std::size_t>(mesh.cells())) {
    throw std::invalid_argument("interval_integral: expected one value per cell");
  }
  const double lo = k;
  const double hi = k + 1.0;
  const double eps = 1e-12 * std::max(1.0, mesh.half_length());
  if (lo < mesh.left() - eps || hi > mesh.right() + eps) {
    throw std::out_of_range("interval [" + std::to_string(k) + ", " + std::to_string(k + 1) +
                            "] leaves the truncated domain");
  }
  const double dx = mesh.dx();
  const int first = std::max(0, static_cast<int>(std::floor((lo - mesh.left()) / dx)));
  const int last = std::min(mesh.cells() - 1, static_cast<int>(std::floor((hi - mesh.left()) / dx)));
  double sum = 0.0;
  for (int j = first; j <= last; ++j) {
    const double a = std::max(lo, mesh.node(j));
    const double b = std::min(hi, mesh.node(j + 1));
    if (b > a) {
      sum += cells[static_cast<std::size_t>(j)] * (b - a);
    }
  }
  return sum;
}

double interval_integral(const State& state, Field field, int k, const Mesh& mesh) {
  if (field == Field::V) {
    return interval_integral(node_to_cell(state.v), k, mesh);
  }
  return interval_integral(state.field(field), k, mesh);
}

std::vector<int> unit_intervals(const Mesh& mesh) {
  std::vector<int> out;
  const double eps = 1e-12 * std::max(1.0, mesh.half_length());
  for (int k = static_cast<int>(std::ceil(mesh.left() - eps)); k + 1.0 <= mesh.right() + eps; ++k) {
    out.push_back(k);
  }
  return out;
}

std::string_view to_string(DomainKind kind) noexcept {
  return kind == DomainKind::WholeLine ? "whole-line" : "half-line";
}

std::string_view to_string(BoundaryKind kind) noexcept {
  switch (kind) {
  case BoundaryKind::WholeLine:
    return "whole-line";
  case BoundaryKind::HalfLineInsulated:
    return "insulated";
  case BoundaryKind::HalfLineIsothermal:
    return "isothermal";
  }
  return "";
}

std::string_view to_string(SpeciesEnd end) noexcept {
  return end == SpeciesEnd::Dirichlet0 ? "dirichlet" : "neumann";
}

} // namespace combustion1d
