#include "mirrork/groupcoh.hpp"

#include "mirrork/errors.hpp"

namespace mirrork {

namespace {

void require_subgroup(const GLattice& lattice, const Subgroup& h) {
  if (!is_subgroup(lattice.group(), h.mask())) throw ValidationError("not a subgroup: " + h.to_string());
}

std::size_t position(const std::vector<std::size_t>& elements, std::size_t x) {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == x) return i;
  throw ConsistencyError("element not in subgroup");
}

IntVector block(const IntVector& v, std::size_t i, std::size_t r) {
  return IntVector(v.begin() + static_cast<std::ptrdiff_t>(i * r), v.begin() + static_cast<std::ptrdiff_t>((i + 1) * r));
}

}  // namespace

IntVector CohomologyResult::class_of(const IntVector& cocycle) const {
  IntVector x = cocycle_left_inverse * cocycle;
  if (cocycles * x != cocycle) throw ConsistencyError("class_of: vector is not a cocycle");
  return quotient.coordinates(x);
}

IntVector CohomologyResult::representative(const IntVector& coordinates) const {
  IntVector v(cocycles.rows(), Integer(0));
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (coordinates[i] == 0) continue;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += coordinates[i] * cocycle_basis(k, i);
  }
  return v;
}

CohomologyResult h1(const GLattice& lattice, const Subgroup& h) {
  require_subgroup(lattice, h);
  const FiniteGroup& g = lattice.group();
  const std::size_t r = lattice.rank();
  const auto el = h.elements();
  const std::size_t n = el.size();

  // phi(ab) - phi(a) - rho(a) phi(b) = 0 for all a, b in H.
  IntMatrix eq(r * n * n, r * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t row0 = (i * n + j) * r;
      std::size_t ab = position(el, g.multiply(el[i], el[j]));
      const IntMatrix& rho = lattice.action(el[i]);
      for (std::size_t k = 0; k < r; ++k) {
        eq(row0 + k, ab * r + k) += 1;
        eq(row0 + k, i * r + k) -= 1;
        for (std::size_t l = 0; l < r; ++l) eq(row0 + k, j * r + l) -= rho(k, l);
      }
    }

  CohomologyResult res;
  res.subgroup = h;
  res.cocycles = kernel_basis(eq);
  const std::size_t s = res.cocycles.cols();

  SmithForm sf = smith_normal_form(res.cocycles);
  IntMatrix u_top = sf.left.select_rows([&] {
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    return idx;
  }());
  // Saturation makes all invariant factors 1, so V [I 0] U is a left inverse.
  res.cocycle_left_inverse = sf.right * u_top;

  // Coboundaries of the basis vectors of the lattice.
  IntMatrix cob(r * n, r);
  for (std::size_t i = 0; i < n; ++i) {
    const IntMatrix& rho = lattice.action(el[i]);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t l = 0; l < r; ++l) cob(i * r + k, l) = rho(k, l) - (k == l ? 1 : 0);
  }
  IntMatrix cob_coords = res.cocycle_left_inverse * cob;
  if (res.cocycles * cob_coords != cob) throw ConsistencyError("h1: coboundary is not a cocycle");
  res.quotient = QuotientCoordinates(s, cob_coords.transpose());
  res.group = res.quotient.group();
  if (!res.group.is_finite()) throw ConsistencyError("h1: infinite first cohomology");
  res.cocycle_basis = res.cocycles * res.quotient.lift_matrix();
  return res;
}

namespace {

IntMatrix restriction_matrix(const GLattice& lattice, const CohomologyResult& src, const CohomologyResult& dst) {
  const std::size_t r = lattice.rank();
  const auto hel = src.subgroup.elements();
  const auto kel = dst.subgroup.elements();
  IntMatrix out(dst.group.generator_count(), src.group.generator_count());
  for (std::size_t c = 0; c < src.group.generator_count(); ++c) {
    IntVector phi = src.cocycle_basis.column(c);
    IntVector res;
    for (std::size_t x : kel) {
      IntVector b = block(phi, position(hel, x), r);
      res.insert(res.end(), b.begin(), b.end());
    }
    IntVector coords = dst.class_of(res);
    for (std::size_t i = 0; i < coords.size(); ++i) out(i, c) = coords[i];
  }
  return out;
}

IntMatrix conjugation_matrix(const GLattice& lattice, const CohomologyResult& src, const CohomologyResult& dst,
                             std::size_t g) {
  const FiniteGroup& grp = lattice.group();
  const std::size_t r = lattice.rank();
  const auto hel = src.subgroup.elements();
  const auto tel = dst.subgroup.elements();
  const std::size_t gi = grp.inverse(g);
  IntMatrix out(dst.group.generator_count(), src.group.generator_count());
  for (std::size_t c = 0; c < src.group.generator_count(); ++c) {
    IntVector phi = src.cocycle_basis.column(c);
    IntVector psi;
    for (std::size_t x : tel) {
      IntVector b = lattice.action(g) * block(phi, position(hel, grp.conjugate(gi, x)), r);
      psi.insert(psi.end(), b.begin(), b.end());
    }
    IntVector coords = dst.class_of(psi);
    for (std::size_t i = 0; i < coords.size(); ++i) out(i, c) = coords[i];
  }
  return out;
}

}  // namespace

IntMatrix h1_restriction(const GLattice& lattice, const Subgroup& k, const Subgroup& h) {
  require_subgroup(lattice, k);
  require_subgroup(lattice, h);
  if (!k.is_contained_in(h)) throw ValidationError("restriction: " + k.to_string() + " is not contained in " + h.to_string());
  return restriction_matrix(lattice, h1(lattice, h), h1(lattice, k));
}

IntMatrix h1_conjugation(const GLattice& lattice, const Subgroup& h, std::size_t g) {
  require_subgroup(lattice, h);
  if (g >= lattice.group().order()) throw ValidationError("conjugation: element out of range");
  return conjugation_matrix(lattice, h1(lattice, h), h1(lattice, conjugate(lattice.group(), g, h)), g);
}

FixedPointComponents pi0_fixed_points(const GLattice& lattice, const Subgroup& h) {
  FixedPointComponents f;
  f.components = h1(lattice, h).group;
  f.identity_component_rank = fixed_sublattice(lattice, h).cols();
  return f;
}

const CohomologyResult& CohomologyCache::h1(const Subgroup& h) {
  std::lock_guard lock(mutex_);
  auto& slot = h1_[h.mask()];
  if (!slot) slot = std::make_unique<CohomologyResult>(mirrork::h1(lattice_, h));
  return *slot;
}

const IntMatrix& CohomologyCache::restriction(const Subgroup& k, const Subgroup& h) {
  if (!k.is_contained_in(h)) throw ValidationError("restriction: " + k.to_string() + " is not contained in " + h.to_string());
  const CohomologyResult& src = h1(h);
  const CohomologyResult& dst = h1(k);
  std::lock_guard lock(mutex_);
  auto& slot = restriction_[{k.mask(), h.mask()}];
  if (!slot) slot = std::make_unique<IntMatrix>(restriction_matrix(lattice_, src, dst));
  return *slot;
}

const IntMatrix& CohomologyCache::conjugation(const Subgroup& h, std::size_t g) {
  const CohomologyResult& src = h1(h);
  const CohomologyResult& dst = h1(conjugate(lattice_.group(), g, h));
  std::lock_guard lock(mutex_);
  auto& slot = conjugation_[{h.mask(), g}];
  if (!slot) slot = std::make_unique<IntMatrix>(conjugation_matrix(lattice_, src, dst, g));
  return *slot;
}

}  // namespace mirrork
