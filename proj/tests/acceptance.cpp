// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include "mirrork/catalog.hpp"
#include "mirrork/errors.hpp"
#include "mirrork/groupcoh.hpp"
#include "mirrork/ktheory.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace mirrork;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t b = 1;
  for (std::size_t i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

BuildOptions with(Backend b, std::optional<int> subdivisions = std::nullopt) {
  BuildOptions o;
  o.backend = b;
  o.subdivisions = subdivisions;
  return o;
}

// Every backend that accepts the lattice.
std::vector<EquivariantCellComplex> all_backends(const GLattice& l) {
  std::vector<EquivariantCellComplex> out;
  for (Backend b : {Backend::cubical, Backend::freudenthal, Backend::delone}) {
    try {
      out.push_back(build_complex(l, with(b)));
    } catch (const UnsupportedError&) {
    }
  }
  expect(!out.empty(), "no backend accepts the lattice");
  return out;
}

std::string name_of(const CatalogEntry& e, const EquivariantCellComplex& x) {
  return e.name + "/" + to_string(x.backend);
}

void quillen_shape() {
  for (std::size_t n = 0; n <= 3; ++n) {
    CatalogEntry e = catalog_get("split" + std::to_string(n));
    auto x = build_complex(e.lattice);
    auto h = bredon_homology(x, constant_Z(e.lattice.group()));
    expect(h.size() == n + 1, e.name + ": wrong number of degrees");
    for (std::size_t p = 0; p <= n; ++p)
      expect(h[p] == AbGroup::free(binomial(n, p)), e.name + ": H" + std::to_string(p) + " = " + h[p].to_string());
    for (std::size_t d : {1, 2, 3}) {
      GLattice l = align_to_cyclic(e.lattice, d);
      auto xd = build_complex(l);
      for (long long q : {2, 3, 5}) {
        auto page = e2_page(xd, finite_field_rows(q, d, 3, l.group()), 3);
        for (int k = 0; k <= 3; ++k)
          for (std::size_t p = 0; p <= n; ++p) {
            // Every cell has full stabilizer, whose fixed field is F_q.
            AbGroup expected = power(finite_field_k_group(q, k), binomial(n, p));
            expect(page.at(static_cast<long long>(p), k) == expected,
                   e.name + " ff:" + std::to_string(q) + "," + std::to_string(d) + ": E2_{" + std::to_string(p) + "," +
                       std::to_string(k) + "} = " + page.at(static_cast<long long>(p), k).to_string());
          }
      }
    }
  }
}

void swan_cross_validation() {
  GLattice sign = catalog_get("sign").lattice;
  auto x = build_complex(sign);
  for (long long q : {3, 5, 7, 9}) {
    auto page = e2_page(x, finite_field_rows(q, 2, 6, sign.group()), 6);
    auto swan = swan_finite_field(q, 6);
    expect(page.collapse.certified, "rank-1 page not certified");
    for (int n = 0; n <= 6; ++n) {
      const auto& deg = page.collapse.graded[static_cast<std::size_t>(n)];
      const std::string where = "q=" + std::to_string(q) + " n=" + std::to_string(n);
      expect(deg.pieces[0] == direct_sum(swan[n].kf, swan[n].coker), where + ": E_{0,n} differs");
      if (n >= 1) expect(deg.pieces[1] == swan[n].ker, where + ": E_{1,n-1} differs");
      expect(!swan[n].extension_ambiguous || deg.extension_ambiguous, where + ": extension flags differ");
    }
    expect(page.collapse.graded[0].pieces == std::vector<AbGroup>{AbGroup(1, {Integer(2)})}, "K0 is not Z + Z/2");
    if (q == 3) {
      expect(page.collapse.graded[1].pieces == std::vector<AbGroup>{AbGroup::cyclic(2), AbGroup()}, "gr K1 != {Z/2}");
      expect(page.collapse.graded[2].pieces == std::vector<AbGroup>{AbGroup(), AbGroup::cyclic(4)}, "gr K2 != {Z/4}");
    }
  }
}

void triple_agreement() {
  for (const auto& e : catalog_all()) {
    AbGroup mp = mp_k0(e.lattice).group;
    for (const auto& x : all_backends(e.lattice)) {
      AbGroup chain = bredon_homology(x, constant_Z(e.lattice.group()))[0];
      AbGroup coend = coend_h0(x).group;
      expect(chain == coend && coend == mp,
             name_of(e, x) + ": " + chain.to_string() + " / " + coend.to_string() + " / " + mp.to_string());
    }
  }
}

void fixed_point_law() {
  for (const auto& e : catalog_all()) {
    auto x = build_complex(e.lattice);
    for (const auto& cls : enumerate_subgroups(e.lattice.group())) {
      const Subgroup& h = cls.representative;
      const std::string where = e.name + " " + h.to_string();
      auto fixed = fixed_subcomplex(x, h);
      auto fp = pi0_fixed_points(e.lattice, h);
      AbGroup h1 = ::mirrork::h1(e.lattice, h).group;
      expect(h1.is_finite(), where + ": H1 is infinite");
      expect(Integer(fixed.component_count) == h1.order(),
             where + ": " + std::to_string(fixed.component_count) + " components, |H1| = " + to_string(h1.order()));
      const std::size_t rank = fixed_sublattice(e.lattice, h).cols();
      expect(fp.identity_component_rank == rank, where + ": identity component rank differs");
      for (std::size_t dim : fixed.component_dimension)
        expect(dim == rank, where + ": component of dimension " + std::to_string(dim) + ", fixed rank " +
                                std::to_string(rank));
    }
  }
}

void weil_invariants() {
  for (const auto& e : catalog_all()) {
    const GLattice& l = e.lattice;
    WeilResolutionData w = weil_resolution(l);
    const std::size_t r = l.rank(), big = w.big.rank();
    expect(w.inclusion.rows() == big && w.inclusion.cols() == r, e.name + ": inclusion shape");
    // Split injective: all invariant factors are 1.
    auto inc = invariant_factors(w.inclusion);
    expect(inc.size() == r, e.name + ": inclusion not injective");
    for (const auto& f : inc) expect(f == 1, e.name + ": inclusion not split");
    // Free cokernel, identified with the quotient lattice.
    auto proj = invariant_factors(w.projection);
    expect(proj.size() == w.quotient.rank(), e.name + ": projection not surjective");
    for (const auto& f : proj) expect(f == 1, e.name + ": cokernel has torsion");
    expect((w.projection * w.inclusion).is_zero(), e.name + ": projection does not kill the image");
    expect(r + w.quotient.rank() == big, e.name + ": ranks not additive");
    for (std::size_t g = 0; g < l.group().order(); ++g) {
      expect(w.big.action(g) * w.inclusion == w.inclusion * l.action(g), e.name + ": inclusion not equivariant");
      expect(w.quotient.action(g) * w.projection == w.projection * w.big.action(g),
             e.name + ": projection not equivariant");
    }
  }
}

void structural_suite() {
  for (const auto& e : catalog_all()) {
    const std::size_t n = e.lattice.rank();
    std::optional<std::vector<AbGroup>> reference;
    const CoefficientSystem z = constant_Z(e.lattice.group());
    for (const auto& x : all_backends(e.lattice)) {
      ComplexCheck check = check_complex(x);
      expect(check.ok(), name_of(e, x) + ": " + check.summary());
      auto under = underlying_homology(x);
      for (std::size_t p = 0; p <= n; ++p)
        expect(under[p] == AbGroup::free(binomial(n, p)), name_of(e, x) + ": underlying H" + std::to_string(p));
      auto h = bredon_homology(x, z);
      if (!reference)
        reference = h;
      else
        expect(h == *reference, name_of(e, x) + ": Bredon homology depends on the backend");
      if (n <= 2) {
        auto finer = build_complex(e.lattice, with(x.backend, x.subdivisions + 1));
        expect(check_complex(finer).ok(), name_of(e, x) + ": subdivided complex fails checks");
        expect(bredon_homology(finer, z) == h, name_of(e, x) + ": not subdivision invariant");
      }
    }
  }
}

void cubic_norm_one() {
  CatalogEntry e = catalog_get("norm_one_cyclic3");
  auto x = build_complex(e.lattice, with(Backend::delone));
  ComplexCheck check = check_complex(x);
  expect(check.ok(), check.summary());
  Subgroup g = Subgroup::whole(e.lattice.group());
  expect(h1(e.lattice, g).group == AbGroup::cyclic(3), "H1(C3) != Z/3");
  expect(fixed_subcomplex(x, g).component_count == 3, "fixed subcomplex does not have 3 components");
  AbGroup chain = bredon_homology(x, constant_Z(e.lattice.group()))[0];
  expect(chain == coend_h0(x).group && chain == mp_k0(e.lattice).group, "triple agreement fails");
}

struct Criterion {
  int id;
  std::string name;
  double budget;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "split tori: Bredon homology and E2 are binomial", 1, quillen_shape},
      {2, "sign lattice: E2 graded pieces equal the Swan computation", 5, swan_cross_validation},
      {3, "K0: chain H0, coend and MP presentation agree", 30, triple_agreement},
      {4, "fixed points: components = |H1|, dimension = fixed rank", 10, fixed_point_law},
      {5, "Weil resolution invariants", 1, weil_invariants},
      {6, "structural property suite", 60, structural_suite},
      {7, "cubic norm-one torus through the delone backend", 30, cubic_norm_one},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string reason;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body();
    } catch (const Failure& f) {
      reason = f.what;
    } catch (const std::exception& ex) {
      reason = std::string("exception: ") + ex.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (reason.empty() && seconds > c.budget) reason = "over the time budget";
    std::printf("criterion %d: %s  %.2f s (budget %.0f s)  %s%s%s\n", c.id, reason.empty() ? "PASS" : "FAIL", seconds,
                c.budget, c.name.c_str(), reason.empty() ? "" : " -- ", reason.c_str());
    if (!reason.empty()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
