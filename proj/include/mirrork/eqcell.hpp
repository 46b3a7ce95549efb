#pragma once

// Regular G-CW structures on the torus R^n / Z^n with the linear action of a
// lattice. Every complex is a Delta-complex whose cells are simplices of a
// Z^n-periodic triangulation of R^n, stored by one lifted vertex list.

#include "mirrork/glattice.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mirrork {

enum class Backend { automatic, cubical, delone, freudenthal };

std::string to_string(Backend b);
/// "auto", "cubical", "delone", "freudenthal"; throws ValidationError otherwise.
Backend parse_backend(const std::string& name);

struct BuildOptions {
  Backend backend = Backend::automatic;
  /// Barycentric subdivisions; defaults to 1, or 0 for the freudenthal backend.
  /// 0 is accepted only when the raw complex is already simplicial.
  std::optional<int> subdivisions;
  /// Lets the delone backend run at rank 4 (slow; a warning is recorded).
  bool allow_rank4_delone = false;
};

/// Lifted point: numerators over the complex-wide denominator.
using LiftedPoint = std::vector<long long>;

struct Cell {
  /// Canonical lift: lexicographically smallest vertex in [0,1)^n, vertices
  /// in orientation order (torus vertex id, then lifted coordinates).
  std::vector<LiftedPoint> vertices;
  std::vector<std::size_t> torus_vertices;
  std::size_t dimension() const { return vertices.size() - 1; }
};

struct SignedIndex {
  std::size_t index = 0;
  int sign = 1;
  friend bool operator==(const SignedIndex&, const SignedIndex&) = default;
};

class EquivariantCellComplex {
 public:
  std::size_t dimension = 0;
  GLattice lattice;
  Backend backend = Backend::cubical;
  int subdivisions = 0;
  long long denominator = 1;
  /// Torus vertices: reduced numerators in [0, denominator)^n, sorted.
  std::vector<LiftedPoint> vertices;
  std::vector<std::vector<Cell>> cells;
  /// boundary[p] : C_p -> C_{p-1}; boundary[0] has no columns' entries.
  std::vector<SparseMatrix> boundary;
  /// action[g][p][i]: image of cell i of degree p under element g, with sign.
  std::vector<std::vector<std::vector<SignedIndex>>> action;
  std::vector<std::vector<Subgroup>> stabilizers;
  std::vector<std::string> warnings;

  std::size_t cell_count(std::size_t p) const { return cells[p].size(); }
  std::size_t total_cells() const;
  long long euler_characteristic() const;
  /// Index of the cell with the given canonical vertex list, if present.
  std::optional<std::size_t> find(const std::vector<LiftedPoint>& canonical) const;
  /// Rational vertex coordinates of a torus vertex.
  std::vector<Rational> vertex_coordinates(std::size_t v) const;

  // Filled by the builder.
  std::vector<std::map<std::vector<LiftedPoint>, std::size_t>> index;
};

EquivariantCellComplex build_complex(const GLattice& lattice, const BuildOptions& options = {});

/// Result of each structural check; empty string when it holds.
struct ComplexCheck {
  std::string boundary_squared;
  std::string equivariance;
  std::string regularity;
  std::string euler_characteristic;
  std::string face_closure;
  bool ok() const;
  std::string summary() const;
};
ComplexCheck check_complex(const EquivariantCellComplex& x);

struct FixedSubcomplex {
  std::vector<std::vector<std::size_t>> cells;  // per degree, indices of H-fixed cells
  std::size_t component_count = 0;
  /// Component (0..count-1) of each fixed vertex, aligned with cells[0].
  std::vector<std::size_t> vertex_component;
  /// Largest fixed-cell dimension in each component.
  std::vector<std::size_t> component_dimension;
};
FixedSubcomplex fixed_subcomplex(const EquivariantCellComplex& x, const Subgroup& h);

/// Cellular homology of the underlying space, forgetting the action.
std::vector<AbGroup> underlying_homology(const EquivariantCellComplex& x);

}  // namespace mirrork
