#include "mirrork/exactalg.hpp"

#include "mirrork/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mirrork {

std::string to_string(const Integer& n) { return n.str(); }

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ValidationError("IntMatrix literal: ragged rows");
    for (long long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ValidationError("IntMatrix::from_rows: wrong row length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw ValidationError("IntMatrix::from_columns: wrong column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::diagonal(const IntVector& entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
  IntMatrix b(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

IntMatrix IntMatrix::select_columns(const std::vector<std::size_t>& cols) const {
  IntMatrix b(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) b(i, j) = (*this)(i, cols[j]);
  return b;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  IntMatrix b(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) b(i, j) = (*this)(rows[i], j);
  return b;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_columns(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) {
    const Integer& s = (*this)(src, c);
    if (s != 0) (*this)(dst, c) += factor * s;
  }
}

void IntMatrix::add_column_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    const Integer& s = (*this)(r, src);
    if (s != 0) (*this)(r, dst) += factor * s;
  }
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
}

void IntMatrix::negate_column(std::size_t i) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) = -(*this)(r, i);
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product: dimension mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Integer& y = b(k, j);
        if (y != 0) c(i, j) += x * y;
      }
    }
  return c;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.cols() != v.size()) throw ValidationError("matrix-vector product: dimension mismatch");
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && v[j] != 0) out[i] += a(i, j) * v[j];
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("matrix sum: dimension mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("matrix difference: dimension mismatch");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

IntMatrix operator*(const Integer& s, const IntMatrix& a) {
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw ValidationError("hstack: row mismatch");
  IntMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw ValidationError("vstack: column mismatch");
  IntMatrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) c(a.rows() + i, j) = b(i, j);
  }
  return c;
}

IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
  return c;
}

Integer determinant(const IntMatrix& m) {
  if (!m.is_square()) throw ValidationError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      a.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

class SmithEngine {
 public:
  SmithEngine(const IntMatrix& m, bool track) : a_(m), track_(track) {
    if (track_) {
      u_ = IntMatrix::identity(m.rows());
      uinv_ = u_;
      v_ = IntMatrix::identity(m.cols());
      vinv_ = v_;
    }
  }

  void run() {
    const std::size_t m = a_.rows(), n = a_.cols();
    const std::size_t limit = std::min(m, n);
    for (std::size_t t = 0; t < limit; ++t) {
      if (!reduce_step(t)) {
        rank_ = t;
        return;
      }
    }
    rank_ = limit;
  }

  SmithForm result() && {
    SmithForm f;
    f.diagonal = std::move(a_);
    f.rank = rank_;
    if (track_) {
      f.left = std::move(u_);
      f.left_inverse = std::move(uinv_);
      f.right = std::move(v_);
      f.right_inverse = std::move(vinv_);
    }
    return f;
  }

 private:
  // Returns false when the remaining submatrix is zero.
  bool reduce_step(std::size_t t) {
    while (true) {
      std::size_t pr = 0, pc = 0;
      if (!find_pivot(t, pr, pc)) return false;
      swap_rows(t, pr);
      swap_cols(t, pc);
      bool clean = true;
      const Integer pivot = a_(t, t);
      for (std::size_t i = t + 1; i < a_.rows(); ++i) {
        if (a_(i, t) == 0) continue;
        Integer q = a_(i, t) / pivot;  // truncating
        add_row(i, t, -q);
        if (a_(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a_.cols(); ++j) {
        if (a_(t, j) == 0) continue;
        Integer q = a_(t, j) / pivot;
        add_col(j, t, -q);
        if (a_(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (std::size_t i = t + 1; i < a_.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < a_.cols(); ++j)
          if (a_(i, j) != 0 && a_(i, j) % pivot != 0) {
            add_row(t, i, Integer(1));
            divisible = false;
            break;
          }
      if (!divisible) continue;
      if (a_(t, t) < 0) negate_row(t);
      return true;
    }
  }

  bool find_pivot(std::size_t t, std::size_t& pr, std::size_t& pc) const {
    bool found = false;
    Integer best;
    for (std::size_t i = t; i < a_.rows(); ++i)
      for (std::size_t j = t; j < a_.cols(); ++j) {
        const Integer& x = a_(i, j);
        if (x == 0) continue;
        Integer ax = abs(x);
        if (!found || ax < best) {
          best = ax;
          pr = i;
          pc = j;
          found = true;
          if (best == 1) return true;
        }
      }
    return found;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    a_.swap_rows(i, j);
    if (track_) {
      u_.swap_rows(i, j);
      uinv_.swap_columns(i, j);
    }
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    a_.swap_columns(i, j);
    if (track_) {
      v_.swap_columns(i, j);
      vinv_.swap_rows(i, j);
    }
  }
  void add_row(std::size_t dst, std::size_t src, const Integer& q) {
    a_.add_row_multiple(dst, src, q);
    if (track_) {
      u_.add_row_multiple(dst, src, q);
      uinv_.add_column_multiple(src, dst, -q);
    }
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& q) {
    a_.add_column_multiple(dst, src, q);
    if (track_) {
      v_.add_column_multiple(dst, src, q);
      vinv_.add_row_multiple(src, dst, -q);
    }
  }
  void negate_row(std::size_t i) {
    a_.negate_row(i);
    if (track_) {
      u_.negate_row(i);
      uinv_.negate_column(i);
    }
  }

  IntMatrix a_;
  bool track_;
  IntMatrix u_, uinv_, v_, vinv_;
  std::size_t rank_ = 0;
};

}  // namespace

IntVector SmithForm::diagonal_entries() const {
  IntVector d;
  for (std::size_t i = 0; i < rank; ++i) d.push_back(diagonal(i, i));
  return d;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithEngine e(m, true);
  e.run();
  return std::move(e).result();
}

IntVector invariant_factors(const IntMatrix& m) {
  SmithEngine e(m, false);
  e.run();
  return std::move(e).result().diagonal_entries();
}

std::size_t rank(const IntMatrix& m) { return invariant_factors(m).size(); }

// ---------------------------------------------------------------------------
// AbGroup

AbGroup::AbGroup(std::size_t free_rank, IntVector torsion) : free_rank_(free_rank), torsion_(std::move(torsion)) {
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) throw ValidationError("AbGroup: invariant factors must be >= 2");
    if (i + 1 < torsion_.size() && torsion_[i + 1] % torsion_[i] != 0)
      throw ValidationError("AbGroup: invariant factors must form a divisibility chain");
  }
}

AbGroup AbGroup::cyclic(const Integer& n) {
  Integer a = abs(n);
  if (a == 0) return free(1);
  if (a == 1) return {};
  return AbGroup(0, {a});
}

IntVector AbGroup::generator_orders() const {
  IntVector o = torsion_;
  o.resize(torsion_.size() + free_rank_, Integer(0));
  return o;
}

Integer AbGroup::order() const {
  if (!is_finite()) throw ValidationError("AbGroup::order of an infinite group");
  Integer n = 1;
  for (const auto& d : torsion_) n *= d;
  return n;
}

bool AbGroup::annihilated_by(const Integer& n) const {
  if (free_rank_ > 0) return n == 0;
  return std::all_of(torsion_.begin(), torsion_.end(), [&](const Integer& d) { return n % d == 0; });
}

std::string AbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank_ > 0) {
    os << 'Z';
    if (free_rank_ > 1) os << '^' << free_rank_;
    first = false;
  }
  for (const auto& d : torsion_) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

AbGroup direct_sum(const std::vector<AbGroup>& groups) {
  std::size_t free = 0;
  IntVector orders;
  for (const auto& g : groups) {
    free += g.free_rank();
    orders.insert(orders.end(), g.torsion().begin(), g.torsion().end());
  }
  AbGroup t = group_from_presentation(orders.size(), IntMatrix::diagonal(orders));
  return AbGroup(free, t.torsion());
}

AbGroup direct_sum(const AbGroup& a, const AbGroup& b) { return direct_sum(std::vector<AbGroup>{a, b}); }

AbGroup power(const AbGroup& a, std::size_t copies) { return direct_sum(std::vector<AbGroup>(copies, a)); }

AbGroup group_from_presentation(std::size_t generators, const IntMatrix& relations) {
  if (relations.rows() > 0 && relations.cols() != generators)
    throw ValidationError("group_from_presentation: relation length differs from generator count");
  if (relations.rows() == 0) return AbGroup::free(generators);
  IntVector d = invariant_factors(relations);
  IntVector torsion;
  for (const auto& x : d)
    if (x > 1) torsion.push_back(x);
  return AbGroup(generators - d.size(), torsion);
}

// ---------------------------------------------------------------------------
// QuotientCoordinates

QuotientCoordinates::QuotientCoordinates(std::size_t generators, const IntMatrix& relations) : ambient_(generators) {
  if (relations.rows() > 0 && relations.cols() != generators)
    throw ValidationError("QuotientCoordinates: relation length differs from generator count");
  std::vector<std::size_t> keep;
  IntVector torsion;
  IntMatrix v, vinv;
  std::size_t r = 0;
  if (relations.rows() == 0) {
    v = IntMatrix::identity(generators);
    vinv = v;
  } else {
    SmithForm s = smith_normal_form(relations);
    r = s.rank;
    for (std::size_t i = 0; i < r; ++i)
      if (s.diagonal(i, i) > 1) {
        keep.push_back(i);
        torsion.push_back(s.diagonal(i, i));
      }
    v = std::move(s.right);
    vinv = std::move(s.right_inverse);
  }
  for (std::size_t i = r; i < generators; ++i) keep.push_back(i);
  group_ = AbGroup(generators - r, torsion);
  // Coordinates of a column vector x are (V^T x) restricted to kept indices;
  // the lift of generator i is row i of V^{-1}.
  coordinate_map_ = v.transpose().select_rows(keep);
  lifts_ = vinv.select_rows(keep).transpose();
}

IntVector QuotientCoordinates::coordinates(const IntVector& x) const {
  IntVector c = coordinate_map_ * x;
  const auto& tor = group_.torsion();
  for (std::size_t i = 0; i < tor.size(); ++i) {
    c[i] %= tor[i];
    if (c[i] < 0) c[i] += tor[i];
  }
  return c;
}

IntVector QuotientCoordinates::generator_lift(std::size_t i) const { return lifts_.column(i); }

IntMatrix QuotientCoordinates::lift_matrix() const { return lifts_; }

// ---------------------------------------------------------------------------
// Kernels, images, solving

IntMatrix kernel_basis(const IntMatrix& m) {
  if (m.rows() == 0) return IntMatrix::identity(m.cols());
  SmithForm s = smith_normal_form(m);
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < m.cols(); ++j) idx.push_back(j);
  return s.right.select_columns(idx);
}

IntMatrix image_basis(const IntMatrix& m) {
  if (m.cols() == 0) return IntMatrix(m.rows(), 0);
  SmithForm s = smith_normal_form(m);
  IntMatrix b(m.rows(), s.rank);
  for (std::size_t j = 0; j < s.rank; ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) b(i, j) = s.left_inverse(i, j) * s.diagonal(j, j);
  return b;
}

namespace {

std::optional<IntVector> solve_with(const SmithForm& s, std::size_t cols, const IntVector& b) {
  // a = U^{-1} D V^{-1}; a x = b  <=>  D y = U b with x = V y.
  IntVector ub = s.left * b;
  IntVector y(cols);
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank) {
      const Integer& d = s.diagonal(i, i);
      if (ub[i] % d != 0) return std::nullopt;
      y[i] = ub[i] / d;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.right * y;
}

}  // namespace

std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b) {
  if (a.rows() != b.size()) throw ValidationError("solve: dimension mismatch");
  if (a.cols() == 0) {
    if (std::all_of(b.begin(), b.end(), [](const Integer& x) { return x == 0; })) return IntVector{};
    return std::nullopt;
  }
  SmithForm s = smith_normal_form(a);
  return solve_with(s, a.cols(), b);
}

IntMatrix solve_columns(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw ValidationError("solve_columns: dimension mismatch");
  IntMatrix x(a.cols(), b.cols());
  if (b.cols() == 0) return x;
  if (a.cols() == 0) {
    if (!b.is_zero()) throw ConsistencyError("solve_columns: right-hand side outside the column span");
    return x;
  }
  SmithForm s = smith_normal_form(a);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto sol = solve_with(s, a.cols(), b.column(j));
    if (!sol) throw ConsistencyError("solve_columns: right-hand side outside the column span");
    for (std::size_t i = 0; i < a.cols(); ++i) x(i, j) = (*sol)[i];
  }
  return x;
}

Subquotient subquotient(std::size_t n, const IntMatrix& cycle_map, const IntMatrix& target_relations,
                        const IntMatrix& boundaries) {
  if (cycle_map.cols() != n && cycle_map.rows() > 0) throw ValidationError("subquotient: cycle map width");
  if (boundaries.rows() != n) throw ValidationError("subquotient: boundary height");
  Subquotient out;
  if (cycle_map.rows() == 0) {
    out.cycle_basis = IntMatrix::identity(n);
  } else if (target_relations.cols() == 0) {
    out.cycle_basis = kernel_basis(cycle_map);
  } else {
    IntMatrix k = kernel_basis(hstack(cycle_map, target_relations));
    out.cycle_basis = image_basis(k.block(0, 0, n, k.cols()));
  }
  IntMatrix coords = solve_columns(out.cycle_basis, boundaries);
  out.quotient = QuotientCoordinates(out.cycle_basis.cols(), coords.transpose());
  return out;
}

IntMatrix relation_columns(const AbGroup& g) {
  const auto& t = g.torsion();
  IntMatrix r(g.generator_count(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r(i, i) = t[i];
  return r;
}

bool is_homomorphism(const AbGroup& src, const AbGroup& dst, const IntMatrix& map) {
  if (map.rows() != dst.generator_count() || map.cols() != src.generator_count()) return false;
  // Each source relation d_i e_i must land in the target relation lattice.
  const IntVector orders = dst.generator_orders();
  const auto& tor = src.torsion();
  for (std::size_t i = 0; i < tor.size(); ++i)
    for (std::size_t r = 0; r < orders.size(); ++r) {
      Integer image = map(r, i) * tor[i];
      if (orders[r] == 0 ? image != 0 : image % orders[r] != 0) return false;
    }
  return true;
}

AbGroup hom_kernel(const AbGroup& src, const AbGroup& dst, const IntMatrix& map) {
  if (!is_homomorphism(src, dst, map)) throw ValidationError("hom_kernel: matrix is not a homomorphism");
  return subquotient(src.generator_count(), map, relation_columns(dst), relation_columns(src)).group();
}

AbGroup hom_cokernel(const AbGroup& src, const AbGroup& dst, const IntMatrix& map) {
  if (!is_homomorphism(src, dst, map)) throw ValidationError("hom_cokernel: matrix is not a homomorphism");
  IntMatrix rel = hstack(map, relation_columns(dst));
  return group_from_presentation(dst.generator_count(), rel.transpose());
}

AbGroup hom_image(const AbGroup& src, const AbGroup& dst, const IntMatrix& map) {
  if (!is_homomorphism(src, dst, map)) throw ValidationError("hom_image: matrix is not a homomorphism");
  // image = src / kernel; computed as the subgroup of dst spanned by columns.
  // Equivalent: subquotient of Z^n_dst restricted to span(map) modulo relations.
  IntMatrix span = hstack(map, relation_columns(dst));
  IntMatrix basis = image_basis(span);
  IntMatrix coords = solve_columns(basis, relation_columns(dst));
  return group_from_presentation(basis.cols(), coords.transpose());
}

// ---------------------------------------------------------------------------
// Sparse matrices and chain complexes

IntMatrix SparseMatrix::dense() const {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [i, v] : columns[j]) m(i, j) += v;
  return m;
}

SparseMatrix SparseMatrix::from_dense(const IntMatrix& m) {
  SparseMatrix s;
  s.rows = m.rows();
  s.columns.resize(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0) s.columns[j].emplace_back(i, m(i, j));
  return s;
}

namespace {

IntMatrix order_relations(const IntVector& orders) {
  std::vector<std::size_t> torsion;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] != 0) torsion.push_back(i);
  IntMatrix r(orders.size(), torsion.size());
  for (std::size_t k = 0; k < torsion.size(); ++k) r(torsion[k], k) = orders[torsion[k]];
  return r;
}

void check_complex(const CyclicChainComplex& c) {
  if (c.boundary.size() != c.orders.size()) throw ValidationError("chain complex: boundary count differs from length");
  for (std::size_t p = 1; p < c.length(); ++p) {
    if (c.boundary[p].cols() != c.rank(p) || c.boundary[p].rows != c.rank(p - 1))
      throw ValidationError("chain complex: boundary dimensions");
  }
  for (const auto& o : c.orders)
    for (const auto& x : o)
      if (x < 0 || x == 1) throw ValidationError("chain complex: generator orders must be 0 or >= 2");
}

}  // namespace

std::vector<AbGroup> homology_dense(const CyclicChainComplex& c) {
  check_complex(c);
  std::vector<AbGroup> h;
  const std::size_t len = c.length();
  for (std::size_t p = 0; p < len; ++p) {
    const std::size_t n = c.rank(p);
    IntMatrix out = p >= 1 ? c.boundary[p].dense() : IntMatrix(0, n);
    IntMatrix target_rel = p >= 1 ? order_relations(c.orders[p - 1]) : IntMatrix(0, 0);
    IntMatrix in = p + 1 < len ? c.boundary[p + 1].dense() : IntMatrix(n, 0);
    IntMatrix denom = hstack(in, order_relations(c.orders[p]));
    h.push_back(subquotient(n, out, target_rel, denom).group());
  }
  return h;
}

namespace {

// Gaussian elimination on a chain complex of cyclic groups: a differential
// component between two summands of equal order with coefficient +-1 is an
// isomorphism, and the pair can be cancelled without changing homology.
class Reducer {
 public:
  explicit Reducer(const CyclicChainComplex& c) : len_(c.length()) {
    orders_ = c.orders;
    alive_.resize(len_);
    cols_.resize(len_);
    rows_.resize(len_);
    for (std::size_t p = 0; p < len_; ++p) {
      alive_[p].assign(c.rank(p), true);
      cols_[p].resize(c.rank(p));
      if (p >= 1) {
        rows_[p].resize(c.rank(p - 1));
        for (std::size_t j = 0; j < c.rank(p); ++j)
          for (const auto& [i, v] : c.boundary[p].columns[j]) add_entry(p, i, j, v);
      }
    }
  }

  void run() {
    for (std::size_t p = len_; p-- > 1;) {
      for (std::size_t j = 0; j < cols_[p].size(); ++j) {
        if (!alive_[p][j]) continue;
        // Re-scan column j until no pivot remains; cancellations can create new ones.
        while (alive_[p][j]) {
          std::size_t pivot_row = 0;
          Integer coeff;
          bool found = false;
          for (const auto& [i, v] : cols_[p][j]) {
            if (orders_[p - 1][i] == orders_[p][j] && (v == 1 || v == -1)) {
              pivot_row = i;
              coeff = v;
              found = true;
              break;
            }
          }
          if (!found) break;
          cancel(p, j, pivot_row, coeff);
        }
      }
    }
  }

  CyclicChainComplex result() const {
    CyclicChainComplex out;
    out.orders.resize(len_);
    out.boundary.resize(len_);
    std::vector<std::vector<std::size_t>> index(len_);
    for (std::size_t p = 0; p < len_; ++p) {
      index[p].assign(alive_[p].size(), 0);
      for (std::size_t j = 0; j < alive_[p].size(); ++j)
        if (alive_[p][j]) {
          index[p][j] = out.orders[p].size();
          out.orders[p].push_back(orders_[p][j]);
        }
    }
    for (std::size_t p = 1; p < len_; ++p) {
      SparseMatrix& m = out.boundary[p];
      m.rows = out.orders[p - 1].size();
      m.columns.resize(out.orders[p].size());
      for (std::size_t j = 0; j < alive_[p].size(); ++j) {
        if (!alive_[p][j]) continue;
        for (const auto& [i, v] : cols_[p][j])
          if (alive_[p - 1][i]) m.columns[index[p][j]].emplace_back(index[p - 1][i], v);
      }
    }
    return out;
  }

 private:
  void add_entry(std::size_t p, std::size_t i, std::size_t j, const Integer& v) {
    Integer& slot = cols_[p][j][i];
    slot += v;
    normalize(slot, orders_[p - 1][i]);
    if (slot == 0) {
      cols_[p][j].erase(i);
      rows_[p][i].erase(j);
    } else {
      rows_[p][i].insert(j);
    }
  }

  static void normalize(Integer& x, const Integer& order) {
    if (order == 0) return;
    x %= order;
    if (x < 0) x += order;
    // Prefer the symmetric representative so that -1 stays recognisable.
    if (2 * x > order) x -= order;
  }

  // Cancel generator j of C_p against generator i of C_{p-1}.
  void cancel(std::size_t p, std::size_t j, std::size_t i, const Integer& eps) {
    // d'x = dx - a * eps * dj for every x hitting i (eps is its own inverse).
    std::vector<std::pair<std::size_t, Integer>> dj(cols_[p][j].begin(), cols_[p][j].end());
    std::vector<std::size_t> hitters(rows_[p][i].begin(), rows_[p][i].end());
    for (std::size_t x : hitters) {
      if (x == j) continue;
      Integer a = cols_[p][x].at(i);
      for (const auto& [y, b] : dj) {
        if (y == i) continue;
        add_entry(p, y, x, -(b * eps * a));
      }
    }
    // Drop column j and row i of d_p.
    for (const auto& [y, b] : dj) rows_[p][y].erase(j);
    cols_[p][j].clear();
    for (std::size_t x : std::vector<std::size_t>(rows_[p][i].begin(), rows_[p][i].end())) cols_[p][x].erase(i);
    rows_[p][i].clear();
    // Drop row j of d_{p+1} and column i of d_{p-1}.
    if (p + 1 < len_) {
      for (std::size_t z : std::vector<std::size_t>(rows_[p + 1][j].begin(), rows_[p + 1][j].end()))
        cols_[p + 1][z].erase(j);
      rows_[p + 1][j].clear();
    }
    if (p - 1 >= 1) {
      for (const auto& [y, b] : cols_[p - 1][i]) rows_[p - 1][y].erase(i);
      cols_[p - 1][i].clear();
    }
    alive_[p][j] = false;
    alive_[p - 1][i] = false;
  }

  std::size_t len_;
  std::vector<IntVector> orders_;
  std::vector<std::vector<bool>> alive_;
  std::vector<std::vector<std::map<std::size_t, Integer>>> cols_;  // cols_[p][j]: row -> coeff of d_p
  std::vector<std::vector<std::set<std::size_t>>> rows_;           // rows_[p][i]: columns of d_p hitting i
};

}  // namespace

std::vector<AbGroup> homology(const CyclicChainComplex& c) {
  check_complex(c);
  Reducer r(c);
  r.run();
  return homology_dense(r.result());
}

}  // namespace mirrork
