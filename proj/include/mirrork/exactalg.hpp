#pragma once

// Exact integer linear algebra: dense integer matrices, Smith normal form,
// kernels and images, finitely generated abelian groups in invariant-factor
// form, and homology of chain complexes built from cyclic summands.

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mirrork {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  /// Row-major literal. All rows must have the same length.
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);
  static IntMatrix diagonal(const IntVector& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  IntMatrix transpose() const;
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
  IntMatrix select_columns(const std::vector<std::size_t>& cols) const;
  IntMatrix select_rows(const std::vector<std::size_t>& rows) const;

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  void swap_rows(std::size_t i, std::size_t j);
  void swap_columns(std::size_t i, std::size_t j);
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  /// col[dst] += factor * col[src]
  void add_column_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t i);
  void negate_column(std::size_t i);

  friend bool operator==(const IntMatrix& a, const IntMatrix& b);
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const Integer& s, const IntMatrix& a);

/// [a | b]; row counts must agree.
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
/// [a ; b]; column counts must agree.
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& m);

/// D = left * M * right with left, right unimodular and D diagonal with
/// d_1 | d_2 | ... | d_rank, all nonnegative. The inverses of the transforms
/// are carried along so callers never need to invert a unimodular matrix.
struct SmithForm {
  IntMatrix left;
  IntMatrix diagonal;
  IntMatrix right;
  IntMatrix left_inverse;
  IntMatrix right_inverse;
  std::size_t rank = 0;

  IntVector diagonal_entries() const;
};

/// Pivot rule: smallest nonzero absolute value, ties broken by lowest
/// (row, col) in the remaining submatrix.
SmithForm smith_normal_form(const IntMatrix& m);

/// The nonzero diagonal of the Smith form, without tracking transforms.
IntVector invariant_factors(const IntMatrix& m);
std::size_t rank(const IntMatrix& m);

/// Finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_k in
/// invariant-factor form (d_i >= 2, d_i | d_{i+1}).
class AbGroup {
 public:
  AbGroup() = default;
  AbGroup(std::size_t free_rank, IntVector torsion);

  static AbGroup free(std::size_t rank) { return AbGroup(rank, {}); }
  /// Z/n; n = 0 gives Z and n = 1 the trivial group.
  static AbGroup cyclic(const Integer& n);

  std::size_t free_rank() const { return free_rank_; }
  const IntVector& torsion() const { return torsion_; }

  /// Generators of the normal form: torsion generators first, then free ones.
  std::size_t generator_count() const { return torsion_.size() + free_rank_; }
  /// Order of each normal-form generator; 0 marks a free generator.
  IntVector generator_orders() const;

  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  /// Cardinality; requires is_finite().
  Integer order() const;
  bool annihilated_by(const Integer& n) const;

  friend bool operator==(const AbGroup& a, const AbGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
  }
  friend bool operator!=(const AbGroup& a, const AbGroup& b) { return !(a == b); }

  /// "0", "Z", "Z^2 + Z/2 + Z/4".
  std::string to_string() const;

 private:
  std::size_t free_rank_ = 0;
  IntVector torsion_;
};

AbGroup direct_sum(const AbGroup& a, const AbGroup& b);
AbGroup direct_sum(const std::vector<AbGroup>& groups);
AbGroup power(const AbGroup& a, std::size_t copies);

/// Cokernel of the relation matrix: Z^generators modulo the row span.
AbGroup group_from_presentation(std::size_t generators, const IntMatrix& relations);

/// Z^n modulo the row span of a relation matrix, together with the change of
/// coordinates to the invariant-factor generators of the quotient.
class QuotientCoordinates {
 public:
  QuotientCoordinates() = default;
  QuotientCoordinates(std::size_t generators, const IntMatrix& relations);

  const AbGroup& group() const { return group_; }
  std::size_t ambient_rank() const { return ambient_; }

  /// Normal-form coordinates of x in Z^n; torsion entries reduced into [0, d).
  IntVector coordinates(const IntVector& x) const;
  /// A preimage in Z^n of the i-th normal-form generator.
  IntVector generator_lift(std::size_t i) const;
  /// Columns are generator lifts (n x generator_count).
  IntMatrix lift_matrix() const;
  /// Unreduced coordinate map (generator_count x n).
  const IntMatrix& coordinate_matrix() const { return coordinate_map_; }

 private:
  std::size_t ambient_ = 0;
  AbGroup group_;
  IntMatrix coordinate_map_;
  IntMatrix lifts_;
};

/// Saturated basis of the integer kernel, as columns.
IntMatrix kernel_basis(const IntMatrix& m);
/// Basis (full column rank) of the lattice spanned by the columns.
IntMatrix image_basis(const IntMatrix& m);
/// Integer solution of a * x = b, if one exists.
std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b);
/// Column-wise solve; throws ConsistencyError if some column has no solution.
IntMatrix solve_columns(const IntMatrix& a, const IntMatrix& b);

/// {x in Z^n : cycle_map * x in colspan(target_relations)} / colspan(boundaries).
/// boundaries must lie in the cycle lattice.
struct Subquotient {
  IntMatrix cycle_basis;  // n x s, basis of the cycle lattice
  QuotientCoordinates quotient;  // on Z^s
  const AbGroup& group() const { return quotient.group(); }
};
Subquotient subquotient(std::size_t n, const IntMatrix& cycle_map, const IntMatrix& target_relations,
                        const IntMatrix& boundaries);

/// Relations of an invariant-factor group as columns (one per torsion generator).
IntMatrix relation_columns(const AbGroup& g);
/// True when the integer matrix induces a homomorphism src -> dst on
/// normal-form coordinates.
bool is_homomorphism(const AbGroup& src, const AbGroup& dst, const IntMatrix& map);
AbGroup hom_kernel(const AbGroup& src, const AbGroup& dst, const IntMatrix& map);
AbGroup hom_cokernel(const AbGroup& src, const AbGroup& dst, const IntMatrix& map);
AbGroup hom_image(const AbGroup& src, const AbGroup& dst, const IntMatrix& map);

/// Sparse column-major matrix used for large boundary maps.
struct SparseMatrix {
  std::size_t rows = 0;
  std::vector<std::vector<std::pair<std::size_t, Integer>>> columns;

  std::size_t cols() const { return columns.size(); }
  IntMatrix dense() const;
  static SparseMatrix from_dense(const IntMatrix& m);
};

/// Chain complex whose p-th group is a direct sum of cyclic groups; orders[p][j]
/// is the order of generator j (0 = infinite cyclic, otherwise >= 2).
/// boundary[p] : C_p -> C_{p-1} for p >= 1; boundary[0] is unused.
struct CyclicChainComplex {
  std::vector<IntVector> orders;
  std::vector<SparseMatrix> boundary;

  std::size_t length() const { return orders.size(); }
  std::size_t rank(std::size_t p) const { return orders[p].size(); }
};

/// Homology in every degree. Unit components of the differential between
/// equal-order summands are cancelled first; the remaining core is handled by
/// dense Smith normal form.
std::vector<AbGroup> homology(const CyclicChainComplex& complex);
/// Same result without the cancellation pre-pass (reference route for tests).
std::vector<AbGroup> homology_dense(const CyclicChainComplex& complex);

std::string to_string(const Integer& n);

}  // namespace mirrork
