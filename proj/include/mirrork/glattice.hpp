#pragma once

// Finite groups given by Cayley tables, their subgroups, and integral
// lattices with group action (character lattices of tori).

#include "mirrork/exactalg.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mirrork {

/// Subgroups are stored as element bitmasks, which bounds group orders by 64.
inline constexpr std::size_t kHardGroupOrderLimit = 64;

/// Subgroup-enumeration cap: MIRRORK_MAX_GROUP_ORDER if set (clamped to 64), else 64.
std::size_t group_order_cap();

class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(std::vector<std::vector<std::size_t>>{{0}}) {}
  /// Validates the table: index 0 is a two-sided identity, every row and column
  /// is a permutation, and the product is associative.
  explicit FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::string> labels = {});

  /// Closure of permutation generators. Identity gets index 0, the distinct
  /// non-identity generators indices 1..k in input order, the rest BFS order.
  static FiniteGroup from_permutations(const std::vector<std::vector<std::size_t>>& generators);
  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup trivial() { return FiniteGroup(); }

  std::size_t order() const { return table_.size(); }
  std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  /// g h g^{-1}
  std::size_t conjugate(std::size_t g, std::size_t h) const { return multiply(multiply(g, h), inverse(g)); }
  std::size_t power(std::size_t a, std::size_t k) const;
  std::size_t element_order(std::size_t a) const;
  bool is_abelian() const;
  /// Smallest-index generator when the group is cyclic.
  std::optional<std::size_t> cyclic_generator() const;

  const std::vector<std::vector<std::size_t>>& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(std::size_t a) const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

 private:
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::string> labels_;
};

using ElementMask = std::uint64_t;

/// A subgroup as the set of its element indices in the parent group.
class Subgroup {
 public:
  Subgroup() = default;
  explicit Subgroup(ElementMask mask) : mask_(mask) {}

  static Subgroup trivial() { return Subgroup(1); }
  static Subgroup whole(const FiniteGroup& g);

  ElementMask mask() const { return mask_; }
  std::size_t order() const;
  bool contains(std::size_t element) const { return (mask_ >> element) & 1U; }
  bool is_contained_in(const Subgroup& other) const { return (mask_ & ~other.mask_) == 0; }
  std::vector<std::size_t> elements() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.mask_ == b.mask_; }
  /// Order by size, then lexicographically by sorted element list.
  friend std::strong_ordering operator<=>(const Subgroup& a, const Subgroup& b);

  std::string to_string() const;

 private:
  ElementMask mask_ = 1;
};

/// Subgroup generated by a set of elements.
Subgroup generated_subgroup(const FiniteGroup& g, ElementMask generators);
/// Throws ValidationError when the mask is not closed under products/inverses.
Subgroup make_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& elements);
bool is_subgroup(const FiniteGroup& g, ElementMask mask);
Subgroup conjugate(const FiniteGroup& g, std::size_t x, const Subgroup& h);
Subgroup normalizer(const FiniteGroup& g, const Subgroup& h);
/// Smallest-index x with x K x^{-1} = H, if K and H are conjugate.
std::optional<std::size_t> transporter(const FiniteGroup& g, const Subgroup& k, const Subgroup& h);
/// Left cosets xH, ordered by their smallest element; each given as its smallest element.
std::vector<std::size_t> coset_representatives(const FiniteGroup& g, const Subgroup& h);
/// Index of the left coset containing x, w.r.t. coset_representatives order.
std::size_t coset_index(const FiniteGroup& g, const Subgroup& h, const std::vector<std::size_t>& reps, std::size_t x);

struct SubgroupClass {
  Subgroup representative;  // minimum of the class
  std::vector<Subgroup> conjugates;  // sorted
  Subgroup normalizer;
};

/// One class per conjugacy class of subgroups, sorted by representative.
/// Throws UnsupportedError when |G| exceeds group_order_cap().
std::vector<SubgroupClass> enumerate_subgroups(const FiniteGroup& g);
/// Every subgroup, sorted.
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

class GLattice {
 public:
  GLattice() = default;
  /// action[g] is the matrix of element g. Validates identity, homomorphism
  /// property and unimodularity.
  GLattice(FiniteGroup group, std::size_t rank, std::vector<IntMatrix> action);

  /// Extends generator images to the whole group by the homomorphism property.
  static GLattice from_generator_images(FiniteGroup group, std::size_t rank,
                                        const std::map<std::size_t, IntMatrix>& images);
  static GLattice trivial(FiniteGroup group, std::size_t rank);

  std::size_t rank() const { return rank_; }
  const FiniteGroup& group() const { return group_; }
  const IntMatrix& action(std::size_t g) const { return action_[g]; }
  const std::vector<IntMatrix>& actions() const { return action_; }

  /// Elements acting as the identity.
  Subgroup kernel() const;
  /// Every action matrix has exactly one nonzero entry (+-1) per row and column.
  bool is_signed_permutation() const;
  bool is_permutation() const;
  /// Same action viewed over a bigger group acting trivially; requires a trivial group.
  GLattice inflate_trivial(const FiniteGroup& group) const;

 private:
  FiniteGroup group_;
  std::size_t rank_ = 0;
  std::vector<IntMatrix> action_ = {IntMatrix(0, 0)};
};

GLattice direct_sum(const GLattice& a, const GLattice& b);
/// Z[G/H] with G permuting the left cosets.
GLattice induced_lattice(const FiniteGroup& g, const Subgroup& h);
/// Z[G] / (sum of all group elements), in the basis given by the Smith change of coordinates.
GLattice norm_one_lattice(const FiniteGroup& g);

struct WeilResolutionData {
  IntMatrix inclusion;  // (r * |Gbar|) x r
  GLattice big;         // Z[Gbar] (x) Z^r, Gbar permuting the first factor
  GLattice quotient;
  IntMatrix projection;  // rank(quotient) x (r * |Gbar|)
  Subgroup action_kernel;
  std::vector<std::size_t> cosets;  // smallest element of each coset of the kernel
};

/// 0 -> L -> Ind_{N}^{G} Res L -> K -> 0 with N the kernel of the action, via
/// lambda -> sum_c c (x) rho(c)^{-1} lambda. All invariants are checked.
WeilResolutionData weil_resolution(const GLattice& lattice);

struct CharacterOrbit {
  IntVector representative;           // lexicographically smallest member inside the box
  Subgroup stabilizer;
  std::size_t orbit_size = 0;         // size of the full orbit
  std::vector<IntVector> members_in_box;  // sorted
};

/// Partition of the vectors with max-norm <= norm_bound into orbits.
std::vector<CharacterOrbit> character_orbits(const GLattice& lattice, std::size_t norm_bound);

/// Saturated basis (columns) of the H-fixed vectors.
IntMatrix fixed_sublattice(const GLattice& lattice, const Subgroup& h);

bool lex_less(const IntVector& a, const IntVector& b);

}  // namespace mirrork
