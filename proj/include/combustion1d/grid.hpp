#ifndef COMBUSTION1D_GRID_HPP
#define COMBUSTION1D_GRID_HPP

#include <span>
#include <string_view>
#include <vector>

namespace combustion1d {

enum class DomainKind { WholeLine, HalfLine };

/// Uniform staggered mesh in the Lagrangian mass coordinate.
///
/// Whole line: [-L, L] with dx = 2L/n. Half line: [0, L] with dx = L/n.
/// Cells j = 0..n-1 carry u, theta, z; nodes i = 0..n carry v. Node i sits
/// between cells i-1 and i.
class Mesh {
public:
  Mesh(double half_length, int cells, DomainKind kind = DomainKind::WholeLine);

  [[nodiscard]] double half_length() const noexcept { return half_length_; }
  [[nodiscard]] int cells() const noexcept { return cells_; }
  [[nodiscard]] int nodes() const noexcept { return cells_ + 1; }
  [[nodiscard]] DomainKind kind() const noexcept { return kind_; }
  [[nodiscard]] double dx() const noexcept { return dx_; }
  [[nodiscard]] double left() const noexcept { return left_; }
  [[nodiscard]] double right() const noexcept { return half_length_; }
  [[nodiscard]] double cell_center(int j) const noexcept { return left_ + (j + 0.5) * dx_; }
  [[nodiscard]] double node(int i) const noexcept { return left_ + i * dx_; }

  friend bool operator==(const Mesh&, const Mesh&) = default;

private:
  double half_length_;
  int cells_;
  DomainKind kind_;
  double left_;
  double dx_;
};

enum class Field { U, V, Theta, Z };

/// Ghost-cell rule: ghost = offset + slope * (adjacent interior value).
struct Ghost {
  double offset = 0.0;
  double slope = 0.0;

  [[nodiscard]] double operator()(double interior) const noexcept { return offset + slope * interior; }

  /// Ghost cell pinned to a fixed value.
  static Ghost pinned(double value) noexcept { return {value, 0.0}; }
  /// Zero gradient across the boundary face.
  static Ghost reflective() noexcept { return {0.0, 1.0}; }
  /// Boundary face value fixed to `value`.
  static Ghost face(double value) noexcept { return {2.0 * value, -1.0}; }
};

enum class BoundaryKind { WholeLine, HalfLineInsulated, HalfLineIsothermal };
enum class SpeciesEnd { Dirichlet0, Neumann0 };

/// Boundary conditions. Far ends always pin (u, v, theta, Z) = (1, 0, 1, 0)
/// through the ghost cells. The wall at x = 0 of a half line carries v = 0
/// and either theta_x = 0 (insulated) or theta = 1 (isothermal) on the face.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::WholeLine;
  SpeciesEnd z_end = SpeciesEnd::Dirichlet0;

  [[nodiscard]] bool has_wall() const noexcept { return kind != BoundaryKind::WholeLine; }
  [[nodiscard]] Ghost left(Field field) const noexcept;
  [[nodiscard]] Ghost right(Field field) const noexcept;

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

[[nodiscard]] DomainKind domain_of(BoundaryKind kind) noexcept;

/// Discrete fields at one time instant.
struct State {
  double t = 0.0;
  std::vector<double> u;     // n cells
  std::vector<double> v;     // n + 1 nodes
  std::vector<double> theta; // n cells
  std::vector<double> z;     // n cells

  /// Far-field equilibrium (1, 0, 1, 0).
  static State equilibrium(const Mesh& mesh);

  [[nodiscard]] std::span<const double> field(Field f) const noexcept;
};

/// Throws std::invalid_argument unless field sizes match the mesh.
void check_shape(const State& state, const Mesh& mesh);

/// (f_{j+1/2} - f_{j-1/2}) / dx for every cell.
[[nodiscard]] std::vector<double> dnode_to_cell(std::span<const double> f, const Mesh& mesh);

/// Differences of a cell field at every node; boundary nodes use the ghosts.
[[nodiscard]] std::vector<double> dcell_to_node(std::span<const double> g, const Mesh& mesh,
                                                Ghost left, Ghost right);
[[nodiscard]] std::vector<double> dcell_to_node(std::span<const double> g, const Mesh& mesh,
                                                const BoundaryCondition& bc, Field field);

/// Arithmetic average of a cell field onto nodes; boundary nodes use the ghosts.
[[nodiscard]] std::vector<double> cell_to_node(std::span<const double> g, Ghost left, Ghost right);

/// Average of node values onto cells.
[[nodiscard]] std::vector<double> node_to_cell(std::span<const double> f);

/// Discrete L2 norm of (u-1, v, theta-1, Z).
[[nodiscard]] double l2_dev(const State& state, const Mesh& mesh);
/// l2_dev plus the L2 norms of the first differences of all four deviation fields.
[[nodiscard]] double h1_dev(const State& state, const Mesh& mesh);

/// Integral of a field over [k, k+1]; cells straddling the endpoints count
/// pro rata. The velocity is integrated through its cell averages.
/// Throws std::out_of_range if [k, k+1] leaves the mesh.
[[nodiscard]] double interval_integral(const State& state, Field field, int k, const Mesh& mesh);
[[nodiscard]] double interval_integral(std::span<const double> cells, int k, const Mesh& mesh);

/// Integers k with [k, k+1] inside the mesh.
[[nodiscard]] std::vector<int> unit_intervals(const Mesh& mesh);

[[nodiscard]] std::string_view to_string(DomainKind kind) noexcept;
[[nodiscard]] std::string_view to_string(BoundaryKind kind) noexcept;
[[nodiscard]] std::string_view to_string(SpeciesEnd end) noexcept;

} // namespace combustion1d

#endif // COMBUSTION1D_GRID_HPP
