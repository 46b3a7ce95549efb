#include "mirrork/ktheory.hpp"

#include "mirrork/errors.hpp"

namespace mirrork {

IntMatrix MackeyData::restriction(const Subgroup& k, const Subgroup& h) const {
  if (k == h) return IntMatrix::identity(covariant_.object(h).generator_count());
  auto it = restrictions_.find({k.mask(), h.mask()});
  if (it == restrictions_.end())
    throw ValidationError("Mackey data has no restriction " + h.to_string() + " -> " + k.to_string());
  return it->second;
}

std::vector<std::string> MackeyData::validate() const {
  covariant_.validate();
  const FiniteGroup& g = group();
  auto subs = all_subgroups(g);
  auto fail = [](const std::string& what) { throw ValidationError("Mackey data: " + what); };
  auto obj = [&](const Subgroup& h) -> const AbGroup& { return covariant_.object(h); };
  for (const auto& [key, m] : restrictions_) {
    Subgroup k(key.first), h(key.second);
    if (!is_subgroup(g, k.mask()) || !is_subgroup(g, h.mask()) || !k.is_contained_in(h))
      fail("restriction between non-nested subgroups " + h.to_string() + " -> " + k.to_string());
  }
  for (const auto& k : subs)
    for (const auto& h : subs) {
      if (!k.is_contained_in(h)) continue;
      IntMatrix r = restriction(k, h);
      if (r.rows() != obj(k).generator_count() || r.cols() != obj(h).generator_count() ||
          !is_homomorphism(obj(h), obj(k), r))
        fail("restriction " + h.to_string() + " -> " + k.to_string() + " is not a homomorphism");
    }
  for (const auto& l : subs)
    for (const auto& k : subs)
      for (const auto& h : subs) {
        if (!l.is_contained_in(k) || !k.is_contained_in(h)) continue;
        if (!same_homomorphism(restriction(l, k) * restriction(k, h), restriction(l, h), obj(l)))
          fail("restrictions are not functorial on " + l.to_string() + " <= " + k.to_string() + " <= " + h.to_string());
      }
  for (const auto& h : subs)
    for (std::size_t e = 0; e < g.order(); ++e) {
      Subgroup gh = conjugate(g, e, h);
      for (const auto& k : subs) {
        if (!k.is_contained_in(h)) continue;
        Subgroup gk = conjugate(g, e, k);
        if (!same_homomorphism(covariant_.conjugation(k, e) * restriction(k, h),
                               restriction(gk, gh) * covariant_.conjugation(h, e), obj(gk)))
          fail("conjugation by " + std::to_string(e) + " does not commute with the restriction " + h.to_string() +
               " -> " + k.to_string());
      }
    }
  std::vector<std::string> warnings;
  for (const auto& k : subs)
    for (const auto& h : subs) {
      if (!k.is_contained_in(h) || k == h) continue;
      const Integer index(static_cast<long long>(h.order() / k.order()));
      IntMatrix tr_res = covariant_.transfer(k, h) * restriction(k, h);
      if (!same_homomorphism(tr_res, index * IntMatrix::identity(obj(h).generator_count()), obj(h)))
        warnings.push_back("transfer after restriction is not multiplication by the index on " + k.to_string() +
                           " <= " + h.to_string());
    }
  return warnings;
}

bool is_prime_power(long long q) {
  if (q < 2) return false;
  long long p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) return true;  // q itself is prime
  while (q % p == 0) q /= p;
  return q == 1;
}

namespace {

Integer ipow(long long base, long long exp) {
  Integer r = 1;
  for (long long i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_field(long long q) {
  if (!is_prime_power(q)) throw ValidationError("field size " + std::to_string(q) + " is not a prime power");
}

// Shape-aware 1x1 map between groups that may be trivial.
IntMatrix scalar_map(const AbGroup& src, const AbGroup& dst, const Integer& value) {
  IntMatrix m(dst.generator_count(), src.generator_count());
  if (m.rows() == 1 && m.cols() == 1) {
    IntVector orders = dst.generator_orders();
    m(0, 0) = orders[0] == 0 ? value : Integer(value % orders[0]);
  }
  return m;
}

}  // namespace

AbGroup finite_field_k_group(long long q, int degree) {
  check_field(q);
  if (degree < 0) throw ValidationError("negative K-theory degree");
  if (degree == 0) return AbGroup::free(1);
  if (degree % 2 == 0) return AbGroup();
  return AbGroup::cyclic(ipow(q, (degree + 1) / 2) - 1);
}

MackeyData finite_field_mackey(long long q, std::size_t d, int degree, const FiniteGroup& group) {
  check_field(q);
  if (d == 0) throw ValidationError("extension degree must be positive");
  if (degree < 0) throw ValidationError("negative K-theory degree");
  if (group.order() != d) throw ValidationError("group order does not match the extension degree");
  auto frob = group.cyclic_generator();
  if (!frob) throw ValidationError("finite-field coefficients need a cyclic group");
  std::vector<std::size_t> log(d, 0);
  for (std::size_t j = 0, x = 0; j < d; ++j, x = group.multiply(*frob, x)) log[x] = j;

  const long long i = (degree + 1) / 2;
  auto k_group = [&](std::size_t e) -> AbGroup {
    if (degree == 0) return AbGroup::free(1);
    if (degree % 2 == 0) return AbGroup();
    return AbGroup::cyclic(ipow(q, static_cast<long long>(e) * i) - 1);
  };

  MackeyData m(group);
  auto subs = all_subgroups(group);
  auto field_degree = [&](const Subgroup& h) { return d / h.order(); };
  for (const auto& h : subs) m.covariant().set_object(h, k_group(field_degree(h)));
  for (const auto& k : subs)
    for (const auto& h : subs) {
      if (!k.is_contained_in(h) || k == h) continue;
      const AbGroup& mk = m.covariant().object(k);
      const AbGroup& mh = m.covariant().object(h);
      const long long index = static_cast<long long>(h.order() / k.order());
      if (degree == 0) {
        m.covariant().set_transfer(k, h, IntMatrix{{index}});
        m.set_restriction(k, h, IntMatrix{{1}});
      } else {
        m.covariant().set_transfer(k, h, scalar_map(mk, mh, 1));
        Integer big = ipow(q, static_cast<long long>(field_degree(k)) * i) - 1;
        Integer small = ipow(q, static_cast<long long>(field_degree(h)) * i) - 1;
        m.set_restriction(k, h, scalar_map(mh, mk, degree % 2 == 1 ? Integer(big / small) : Integer(0)));
      }
    }
  for (const auto& h : subs)
    for (std::size_t g = 0; g < d; ++g) {
      const AbGroup& mh = m.covariant().object(h);
      Integer power = degree % 2 == 1 ? ipow(q, i * static_cast<long long>(log[g])) : Integer(1);
      m.covariant().set_conjugation(h, g, scalar_map(mh, mh, power));
    }
  try {
    auto warnings = m.validate();
    if (!warnings.empty()) throw ConsistencyError("finite-field Mackey data: " + warnings.front());
  } catch (const ValidationError& e) {
    throw ConsistencyError(std::string("finite-field Mackey data: ") + e.what());
  }
  return m;
}

MackeyData finite_field_mackey(long long q, std::size_t d, int degree) {
  return finite_field_mackey(q, d, degree, FiniteGroup::cyclic(d));
}

GLattice align_to_cyclic(const GLattice& lattice, std::size_t d) {
  const FiniteGroup& g = lattice.group();
  if (g.order() == 1 && d > 1) return lattice.inflate_trivial(FiniteGroup::cyclic(d));
  if (g.order() != d || !g.cyclic_generator())
    throw ValidationError("lattice group (order " + std::to_string(g.order()) + ") is not cyclic of order " +
                          std::to_string(d));
  return lattice;
}

std::map<int, MackeyData> finite_field_rows(long long q, std::size_t d, int q_max, const FiniteGroup& group) {
  std::map<int, MackeyData> rows;
  for (int k = 1; k <= q_max; ++k) rows.emplace(k, finite_field_mackey(q, d, k, group));
  return rows;
}

AbGroup E2Page::at(long long p, int q) const {
  if (p < 0 || p > static_cast<long long>(rank) || q < 0 || q > q_max) return AbGroup();
  return rows[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
}

E2Page e2_page(const EquivariantCellComplex& x, const std::map<int, MackeyData>& coefficients, int q_max) {
  if (q_max < 0) throw ValidationError("qmax must be nonnegative");
  E2Page page;
  page.rank = x.dimension;
  page.q_max = q_max;
  page.rows.push_back(bredon_homology(x, constant_Z(x.lattice.group())));
  for (int q = 1; q <= q_max; ++q) {
    auto it = coefficients.find(q);
    if (it == coefficients.end()) throw ValidationError("no coefficient data for row q = " + std::to_string(q));
    page.rows.push_back(bredon_homology(x, it->second.covariant()));
  }
  page.collapse = collapse_by_lacunarity(page);
  return page;
}

CollapseCertificate collapse_by_lacunarity(const E2Page& page) {
  CollapseCertificate c;
  if (page.rank >= 2) {
    c.reason = "rank " + std::to_string(page.rank) + ": d2 from column 2 into column 0 is not excluded";
    return c;
  }
  c.certified = true;
  c.reason = "rank " + std::to_string(page.rank) + ": every d_r with r >= 2 leaves the columns 0.." +
             std::to_string(page.rank);
  for (int n = 0; n <= page.q_max; ++n) {
    CollapseCertificate::Degree deg;
    deg.n = n;
    std::size_t nonzero = 0;
    for (long long p = 0; p <= static_cast<long long>(page.rank) && p <= n; ++p) {
      deg.pieces.push_back(page.at(p, n - static_cast<int>(p)));
      if (!deg.pieces.back().is_trivial()) ++nonzero;
    }
    deg.extension_ambiguous = nonzero >= 2;
    c.graded.push_back(std::move(deg));
  }
  return c;
}

std::vector<SwanDegree> swan_rank1(const std::vector<AbGroup>& kf, const std::vector<AbGroup>& ke,
                                   const std::vector<IntMatrix>& res) {
  if (kf.size() != ke.size() || kf.size() != res.size()) throw ValidationError("swan_rank1: degree mismatch");
  std::vector<SwanDegree> out;
  for (std::size_t i = 0; i < kf.size(); ++i) {
    if (res[i].rows() != kf[i].generator_count() || res[i].cols() != ke[i].generator_count() ||
        !is_homomorphism(ke[i], kf[i], res[i]))
      throw ValidationError("swan_rank1: map in degree " + std::to_string(i) + " is not a homomorphism");
    SwanDegree d;
    d.kf = kf[i];
    d.coker = hom_cokernel(ke[i], kf[i], res[i]);
    if (i > 0) d.ker = hom_kernel(ke[i - 1], kf[i - 1], res[i - 1]);
    d.extension_ambiguous = !d.coker.is_trivial() && !d.ker.is_trivial();
    out.push_back(d);
  }
  return out;
}

std::vector<SwanDegree> swan_finite_field(long long q, int n_max) {
  check_field(q);
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  std::vector<AbGroup> kf, ke;
  std::vector<IntMatrix> res;
  for (int n = 0; n <= n_max; ++n) {
    kf.push_back(finite_field_k_group(q, n));
    ke.push_back(finite_field_k_group(q * q, n));
    // Restriction of scalars from the quadratic extension is the transfer.
    res.push_back(finite_field_mackey(q, 2, n, c2).covariant().transfer(Subgroup::trivial(), Subgroup::whole(c2)));
  }
  return swan_rank1(kf, ke, res);
}

}  // namespace mirrork
