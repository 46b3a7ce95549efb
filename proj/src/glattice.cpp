#include "mirrork/glattice.hpp"

#include "mirrork/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>

namespace mirrork {

std::size_t group_order_cap() {
  const char* env = std::getenv("MIRRORK_MAX_GROUP_ORDER");
  if (env == nullptr || *env == '\0') return kHardGroupOrderLimit;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0') throw ValidationError("MIRRORK_MAX_GROUP_ORDER is not a number");
  return std::min<std::size_t>(v, kHardGroupOrderLimit);
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::string> labels)
    : table_(std::move(table)), labels_(std::move(labels)) {
  const std::size_t n = table_.size();
  if (n == 0) throw ValidationError("group table is empty");
  if (n > kHardGroupOrderLimit) throw UnsupportedError("group order " + std::to_string(n) + " exceeds 64");
  if (!labels_.empty() && labels_.size() != n) throw ValidationError("group labels: wrong count");
  for (const auto& row : table_) {
    if (row.size() != n) throw ValidationError("group table is not square");
    std::vector<bool> seen(n, false);
    for (std::size_t x : row) {
      if (x >= n) throw ValidationError("group table entry out of range");
      if (seen[x]) throw ValidationError("group table row is not a permutation");
      seen[x] = true;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      if (seen[table_[r][c]]) throw ValidationError("group table column is not a permutation");
      seen[table_[r][c]] = true;
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    if (table_[0][x] != x || table_[x][0] != x) throw ValidationError("element 0 is not the identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw ValidationError("group table is not associative");
  inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a][b] == 0) inverse_[a] = b;
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<std::size_t>>& generators) {
  std::size_t degree = generators.empty() ? 0 : generators.front().size();
  for (const auto& g : generators) {
    if (g.size() != degree) throw ValidationError("permutation generators of different degrees");
    std::vector<bool> seen(degree, false);
    for (std::size_t x : g) {
      if (x >= degree || seen[x]) throw ValidationError("generator is not a permutation");
      seen[x] = true;
    }
  }
  using Perm = std::vector<std::size_t>;
  Perm id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = i;
  auto compose = [](const Perm& a, const Perm& b) {  // apply b, then a
    Perm c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
    return c;
  };
  std::vector<Perm> elems{id};
  std::map<Perm, std::size_t> index{{id, 0}};
  std::vector<Perm> gens;
  for (const auto& g : generators) {
    if (index.count(g)) continue;
    index[g] = elems.size();
    elems.push_back(g);
    gens.push_back(g);
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gens) {
      Perm p = compose(g, elems[i]);
      if (!index.count(p)) {
        if (elems.size() >= kHardGroupOrderLimit)
          throw UnsupportedError("permutation group order exceeds 64");
        index[p] = elems.size();
        elems.push_back(p);
      }
    }
  }
  const std::size_t n = elems.size();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elems[a], elems[b]));
  return FiniteGroup(std::move(table));
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw ValidationError("cyclic group of order 0");
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return FiniteGroup(std::move(table));
}

std::size_t FiniteGroup::power(std::size_t a, std::size_t k) const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < k; ++i) r = multiply(r, a);
  return r;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t k = 1, x = a;
  while (x != 0) {
    x = multiply(x, a);
    ++k;
  }
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < order(); ++a)
    for (std::size_t b = a + 1; b < order(); ++b)
      if (multiply(a, b) != multiply(b, a)) return false;
  return true;
}

std::optional<std::size_t> FiniteGroup::cyclic_generator() const {
  for (std::size_t a = 0; a < order(); ++a)
    if (element_order(a) == order()) return a;
  return std::nullopt;
}

std::string FiniteGroup::label(std::size_t a) const {
  if (!labels_.empty()) return labels_[a];
  return std::to_string(a);
}

// ---------------------------------------------------------------------------
// Subgroups

Subgroup Subgroup::whole(const FiniteGroup& g) {
  const std::size_t n = g.order();
  return Subgroup(n == 64 ? ~ElementMask{0} : ((ElementMask{1} << n) - 1));
}

std::size_t Subgroup::order() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> Subgroup::elements() const {
  std::vector<std::size_t> e;
  for (std::size_t i = 0; i < 64; ++i)
    if (contains(i)) e.push_back(i);
  return e;
}

std::strong_ordering operator<=>(const Subgroup& a, const Subgroup& b) {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  auto ea = a.elements(), eb = b.elements();
  return std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(), eb.end());
}

std::string Subgroup::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t e : elements()) {
    if (!first) os << ',';
    os << e;
    first = false;
  }
  os << '}';
  return os.str();
}

Subgroup generated_subgroup(const FiniteGroup& g, ElementMask generators) {
  ElementMask m = generators | 1U;
  std::vector<std::size_t> gens = Subgroup(generators).elements();
  std::deque<std::size_t> queue;
  for (std::size_t e : Subgroup(m).elements()) queue.push_back(e);
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t s : gens) {
      std::size_t y = g.multiply(x, s);
      if (!((m >> y) & 1U)) {
        m |= ElementMask{1} << y;
        queue.push_back(y);
      }
    }
  }
  return Subgroup(m);
}

bool is_subgroup(const FiniteGroup& g, ElementMask mask) {
  if (!(mask & 1U)) return false;
  Subgroup s(mask);
  auto el = s.elements();
  if (!el.empty() && el.back() >= g.order()) return false;
  for (std::size_t a : el)
    for (std::size_t b : el)
      if (!s.contains(g.multiply(a, b))) return false;
  return true;
}

Subgroup make_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& elements) {
  ElementMask m = 0;
  for (std::size_t e : elements) {
    if (e >= g.order()) throw ValidationError("subgroup element out of range");
    m |= ElementMask{1} << e;
  }
  if (!is_subgroup(g, m)) throw ValidationError("element set is not a subgroup");
  return Subgroup(m);
}

Subgroup conjugate(const FiniteGroup& g, std::size_t x, const Subgroup& h) {
  ElementMask m = 0;
  for (std::size_t e : h.elements()) m |= ElementMask{1} << g.conjugate(x, e);
  return Subgroup(m);
}

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
  ElementMask m = 0;
  for (std::size_t x = 0; x < g.order(); ++x)
    if (conjugate(g, x, h) == h) m |= ElementMask{1} << x;
  return Subgroup(m);
}

std::optional<std::size_t> transporter(const FiniteGroup& g, const Subgroup& k, const Subgroup& h) {
  for (std::size_t x = 0; x < g.order(); ++x)
    if (conjugate(g, x, k) == h) return x;
  return std::nullopt;
}

std::vector<std::size_t> coset_representatives(const FiniteGroup& g, const Subgroup& h) {
  std::vector<std::size_t> reps;
  ElementMask covered = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if ((covered >> x) & 1U) continue;
    reps.push_back(x);
    for (std::size_t e : h.elements()) covered |= ElementMask{1} << g.multiply(x, e);
  }
  return reps;
}

std::size_t coset_index(const FiniteGroup& g, const Subgroup& h, const std::vector<std::size_t>& reps, std::size_t x) {
  // x lies in rH iff r^{-1} x in H.
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (h.contains(g.multiply(g.inverse(reps[i]), x))) return i;
  throw ConsistencyError("coset_index: element in no coset");
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  if (g.order() > group_order_cap())
    throw UnsupportedError("group order " + std::to_string(g.order()) + " exceeds subgroup enumeration cap " +
                           std::to_string(group_order_cap()));
  std::vector<Subgroup> cyclic;
  std::set<ElementMask> seen;
  for (std::size_t x = 0; x < g.order(); ++x) {
    Subgroup c = generated_subgroup(g, ElementMask{1} << x);
    if (seen.insert(c.mask()).second) cyclic.push_back(c);
  }
  // Every subgroup is a join of cyclic subgroups; close under joining.
  std::vector<Subgroup> found = cyclic;
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& c : cyclic) {
      if (c.is_contained_in(found[i])) continue;
      Subgroup j = generated_subgroup(g, found[i].mask() | c.mask());
      if (seen.insert(j.mask()).second) found.push_back(j);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<SubgroupClass> enumerate_subgroups(const FiniteGroup& g) {
  std::vector<Subgroup> subs = all_subgroups(g);
  std::vector<SubgroupClass> classes;
  std::set<ElementMask> assigned;
  for (const auto& s : subs) {
    if (assigned.count(s.mask())) continue;
    SubgroupClass c;
    std::set<ElementMask> conj;
    for (std::size_t x = 0; x < g.order(); ++x) conj.insert(conjugate(g, x, s).mask());
    for (ElementMask m : conj) {
      c.conjugates.emplace_back(m);
      assigned.insert(m);
    }
    std::sort(c.conjugates.begin(), c.conjugates.end());
    c.representative = c.conjugates.front();
    c.normalizer = normalizer(g, c.representative);
    classes.push_back(std::move(c));
  }
  std::sort(classes.begin(), classes.end(),
            [](const SubgroupClass& a, const SubgroupClass& b) { return a.representative < b.representative; });
  return classes;
}

// ---------------------------------------------------------------------------
// GLattice

GLattice::GLattice(FiniteGroup group, std::size_t rank, std::vector<IntMatrix> action)
    : group_(std::move(group)), rank_(rank), action_(std::move(action)) {
  const std::size_t n = group_.order();
  if (action_.size() != n) throw ValidationError("lattice action: one matrix per group element required");
  for (const auto& m : action_)
    if (m.rows() != rank_ || m.cols() != rank_) throw ValidationError("lattice action: matrix size differs from rank");
  if (action_[0] != IntMatrix::identity(rank_)) throw ValidationError("lattice action: identity does not act trivially");
  for (std::size_t a = 0; a < n; ++a) {
    if (abs(determinant(action_[a])) != 1) throw ValidationError("lattice action: matrix is not unimodular");
    for (std::size_t b = 0; b < n; ++b)
      if (action_[a] * action_[b] != action_[group_.multiply(a, b)])
        throw ValidationError("lattice action is not a homomorphism");
  }
}

GLattice GLattice::from_generator_images(FiniteGroup group, std::size_t rank,
                                         const std::map<std::size_t, IntMatrix>& images) {
  const std::size_t n = group.order();
  std::vector<std::optional<IntMatrix>> known(n);
  known[0] = IntMatrix::identity(rank);
  for (const auto& [g, m] : images) {
    if (g >= n) throw ValidationError("lattice action: element index out of range");
    if (m.rows() != rank || m.cols() != rank) throw ValidationError("lattice action: matrix size differs from rank");
    if (g == 0 && m != IntMatrix::identity(rank)) throw ValidationError("lattice action: identity does not act trivially");
    known[g] = m;
  }
  std::deque<std::size_t> queue{0};
  std::vector<bool> visited(n, false);
  visited[0] = true;
  while (!queue.empty()) {
    std::size_t a = queue.front();
    queue.pop_front();
    for (const auto& [s, m] : images) {
      std::size_t b = group.multiply(s, a);
      IntMatrix prod = m * *known[a];
      if (known[b] && *known[b] != prod) throw ValidationError("lattice action: generator images violate the group law");
      known[b] = prod;
      if (!visited[b]) {
        visited[b] = true;
        queue.push_back(b);
      }
    }
  }
  std::vector<IntMatrix> action;
  for (std::size_t g = 0; g < n; ++g) {
    if (!visited[g]) throw ValidationError("lattice action: given elements do not generate the group");
    action.push_back(*known[g]);
  }
  return GLattice(std::move(group), rank, std::move(action));
}

GLattice GLattice::trivial(FiniteGroup group, std::size_t rank) {
  std::vector<IntMatrix> action(group.order(), IntMatrix::identity(rank));
  return GLattice(std::move(group), rank, std::move(action));
}

Subgroup GLattice::kernel() const {
  ElementMask m = 0;
  const IntMatrix id = IntMatrix::identity(rank_);
  for (std::size_t g = 0; g < group_.order(); ++g)
    if (action_[g] == id) m |= ElementMask{1} << g;
  return Subgroup(m);
}

namespace {

bool monomial(const IntMatrix& m, bool allow_signs) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t nz = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Integer& x = m(i, j);
      if (x == 0) continue;
      if (x != 1 && !(allow_signs && x == -1)) return false;
      ++nz;
    }
    if (nz != 1) return false;
  }
  return true;  // unimodular + one entry per row forces one per column
}

}  // namespace

bool GLattice::is_signed_permutation() const {
  return std::all_of(action_.begin(), action_.end(), [](const IntMatrix& m) { return monomial(m, true); });
}

bool GLattice::is_permutation() const {
  return std::all_of(action_.begin(), action_.end(), [](const IntMatrix& m) { return monomial(m, false); });
}

GLattice GLattice::inflate_trivial(const FiniteGroup& group) const {
  if (group_.order() != 1) throw ValidationError("inflate_trivial: lattice group is not trivial");
  return GLattice::trivial(group, rank_);
}

GLattice direct_sum(const GLattice& a, const GLattice& b) {
  if (!(a.group() == b.group())) throw ValidationError("direct_sum: lattices over different groups");
  std::vector<IntMatrix> action;
  for (std::size_t g = 0; g < a.group().order(); ++g) action.push_back(block_diagonal(a.action(g), b.action(g)));
  return GLattice(a.group(), a.rank() + b.rank(), std::move(action));
}

GLattice induced_lattice(const FiniteGroup& g, const Subgroup& h) {
  if (!is_subgroup(g, h.mask())) throw ValidationError("induced_lattice: not a subgroup");
  auto reps = coset_representatives(g, h);
  std::vector<IntMatrix> action;
  for (std::size_t x = 0; x < g.order(); ++x) {
    IntMatrix m(reps.size(), reps.size());
    for (std::size_t c = 0; c < reps.size(); ++c) m(coset_index(g, h, reps, g.multiply(x, reps[c])), c) = 1;
    action.push_back(std::move(m));
  }
  return GLattice(g, reps.size(), std::move(action));
}

namespace {

// Action induced on Z^n / span(columns of sub), for an invariant sublattice.
GLattice quotient_lattice(const FiniteGroup& g, const std::vector<IntMatrix>& action, const IntMatrix& sub,
                          IntMatrix* projection) {
  const std::size_t n = sub.rows();
  QuotientCoordinates q(n, sub.transpose());
  if (!q.group().torsion().empty()) throw ConsistencyError("quotient lattice has torsion");
  const IntMatrix& p = q.coordinate_matrix();
  IntMatrix lift = q.lift_matrix();
  std::vector<IntMatrix> qa;
  for (std::size_t x = 0; x < g.order(); ++x) qa.push_back(p * action[x] * lift);
  if (projection) *projection = p;
  return GLattice(g, q.group().free_rank(), std::move(qa));
}

}  // namespace

GLattice norm_one_lattice(const FiniteGroup& g) {
  GLattice regular = induced_lattice(g, Subgroup::trivial());
  IntMatrix norm(g.order(), 1);
  for (std::size_t i = 0; i < g.order(); ++i) norm(i, 0) = 1;
  return quotient_lattice(g, regular.actions(), norm, nullptr);
}

WeilResolutionData weil_resolution(const GLattice& lattice) {
  const FiniteGroup& g = lattice.group();
  const std::size_t r = lattice.rank();
  WeilResolutionData w;
  w.action_kernel = lattice.kernel();
  w.cosets = coset_representatives(g, w.action_kernel);
  const std::size_t m = w.cosets.size();
  const std::size_t big_rank = r * m;

  std::vector<IntMatrix> big_action;
  for (std::size_t x = 0; x < g.order(); ++x) {
    IntMatrix a(big_rank, big_rank);
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t target = coset_index(g, w.action_kernel, w.cosets, g.multiply(x, w.cosets[c]));
      for (std::size_t i = 0; i < r; ++i) a(target * r + i, c * r + i) = 1;
    }
    big_action.push_back(std::move(a));
  }
  w.big = GLattice(g, big_rank, big_action);

  w.inclusion = IntMatrix(big_rank, r);
  for (std::size_t c = 0; c < m; ++c) {
    const IntMatrix& inv = lattice.action(g.inverse(w.cosets[c]));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) w.inclusion(c * r + i, j) = inv(i, j);
  }

  IntVector factors = invariant_factors(w.inclusion);
  if (factors.size() != r || std::any_of(factors.begin(), factors.end(), [](const Integer& d) { return d != 1; }))
    throw ConsistencyError("weil_resolution: inclusion is not split injective");
  for (std::size_t x = 0; x < g.order(); ++x)
    if (w.big.action(x) * w.inclusion != w.inclusion * lattice.action(x))
      throw ConsistencyError("weil_resolution: inclusion is not equivariant");

  w.quotient = quotient_lattice(g, big_action, w.inclusion, &w.projection);
  if (!(w.projection * w.inclusion).is_zero()) throw ConsistencyError("weil_resolution: projection does not kill the image");
  if (w.big.rank() != lattice.rank() + w.quotient.rank()) throw ConsistencyError("weil_resolution: ranks do not add up");
  return w;
}

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<CharacterOrbit> character_orbits(const GLattice& lattice, std::size_t norm_bound) {
  const std::size_t r = lattice.rank();
  const long long bound = static_cast<long long>(norm_bound);
  auto in_box = [&](const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [&](const Integer& x) { return abs(x) <= bound; });
  };
  auto less = [](const IntVector& a, const IntVector& b) { return lex_less(a, b); };
  std::set<IntVector, decltype(less)> assigned(less);
  std::vector<CharacterOrbit> orbits;
  // Enumerate the box in lexicographic order.
  IntVector v(r, Integer(-bound));
  while (true) {
    if (!assigned.count(v)) {
      CharacterOrbit o;
      std::set<IntVector, decltype(less)> orbit(less);
      ElementMask stab = 0;
      for (std::size_t g = 0; g < lattice.group().order(); ++g) {
        IntVector w = lattice.action(g) * v;
        if (w == v) stab |= ElementMask{1} << g;
        orbit.insert(w);
      }
      o.stabilizer = Subgroup(stab);
      o.orbit_size = orbit.size();
      for (const auto& w : orbit)
        if (in_box(w)) {
          o.members_in_box.push_back(w);
          assigned.insert(w);
        }
      o.representative = o.members_in_box.front();
      orbits.push_back(std::move(o));
    }
    std::size_t k = r;
    while (k > 0) {
      --k;
      if (v[k] < bound) {
        ++v[k];
        for (std::size_t j = k + 1; j < r; ++j) v[j] = -bound;
        break;
      }
      if (k == 0) return orbits;
    }
    if (r == 0) return orbits;
  }
}

IntMatrix fixed_sublattice(const GLattice& lattice, const Subgroup& h) {
  if (!is_subgroup(lattice.group(), h.mask())) throw ValidationError("fixed_sublattice: not a subgroup");
  const std::size_t r = lattice.rank();
  IntMatrix stacked(0, r);
  const IntMatrix id = IntMatrix::identity(r);
  for (std::size_t e : h.elements())
    if (e != 0) stacked = vstack(stacked, lattice.action(e) - id);
  return kernel_basis(stacked);
}

}  // namespace mirrork
