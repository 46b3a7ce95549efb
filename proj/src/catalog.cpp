#include "mirrork/catalog.hpp"

#include "mirrork/errors.hpp"

#include <functional>
#include <utility>

namespace mirrork {

FiniteGroup symmetric3() { return FiniteGroup::from_permutations({{1, 2, 0}, {1, 0, 2}}); }

namespace {

GLattice sign() { return GLattice::from_generator_images(FiniteGroup::cyclic(2), 1, {{1, IntMatrix{{-1}}}}); }

AbGroup z() { return AbGroup::free(1); }
AbGroup zero() { return AbGroup(); }
AbGroup z_mod(long long n) { return AbGroup::cyclic(n); }
AbGroup z_plus_torsion(IntVector torsion) { return AbGroup(1, std::move(torsion)); }

GoldenValue h1(const std::string& subgroup, AbGroup value, const std::string& oracle) {
  return {"H1[" + subgroup + "]", std::move(value), oracle};
}

std::vector<GoldenValue> torus_homology(std::size_t n) {
  std::vector<GoldenValue> out;
  std::size_t binom = 1;
  for (std::size_t p = 0; p <= n; ++p) {
    out.push_back({"H" + std::to_string(p), AbGroup::free(binom), "trivial"});
    binom = binom * (n - p) / (p + 1);
  }
  return out;
}

CatalogEntry split(std::size_t n) {
  CatalogEntry e{"split" + std::to_string(n), GLattice::trivial(FiniteGroup::trivial(), n),
                 "split torus of rank " + std::to_string(n), {}};
  e.expected.push_back({"K0", z(), "trivial"});
  e.expected.push_back(h1("{0}", zero(), "trivial"));
  for (auto& g : torus_homology(n)) e.expected.push_back(std::move(g));
  return e;
}

struct Builder {
  std::string name;
  std::function<CatalogEntry()> make;
};

const std::vector<Builder>& builders() {
  static const std::vector<Builder> list = [] {
    std::vector<Builder> b;
    for (std::size_t n = 0; n <= 3; ++n) b.push_back({"split" + std::to_string(n), [n] { return split(n); }});
    b.push_back({"sign", [] {
                   return CatalogEntry{"sign",
                                       sign(),
                                       "norm-one torus of a quadratic extension; C2 acts by -1",
                                       {{"K0", z_plus_torsion({2}), "coend"},
                                        h1("{0}", zero(), "trivial"),
                                        h1("{0,1}", z_mod(2), "cyclic")}};
                 }});
    for (long long d : {2, 3, 4}) {
      std::string name = "norm_one_cyclic" + std::to_string(d);
      b.push_back({name, [d, name] {
                     CatalogEntry e{name, norm_one_lattice(FiniteGroup::cyclic(static_cast<std::size_t>(d))),
                                    "norm-one torus of a cyclic extension of degree " + std::to_string(d),
                                    {}};
                     e.expected.push_back({"K0", d == 2   ? z_plus_torsion({2})
                                                 : d == 3 ? z_plus_torsion({3, 3})
                                                          : z_plus_torsion({2, 2, 4}),
                                           "coend"});
                     e.expected.push_back(h1("{0}", zero(), "trivial"));
                     if (d == 4) e.expected.push_back(h1("{0,2}", z_mod(2), "cyclic"));
                     e.expected.push_back(
                         h1(Subgroup::whole(FiniteGroup::cyclic(static_cast<std::size_t>(d))).to_string(), z_mod(d),
                            "cyclic"));
                     return e;
                   }});
    }
    b.push_back({"regular_C2", [] {
                   FiniteGroup g = FiniteGroup::cyclic(2);
                   return CatalogEntry{"regular_C2",
                                       induced_lattice(g, Subgroup::trivial()),
                                       "Weil restriction of a split rank-1 torus along a quadratic extension",
                                       {{"K0", z(), "coend"},
                                        h1("{0}", zero(), "trivial"),
                                        h1("{0,1}", zero(), "shapiro")}};
                 }});
    b.push_back({"regular_C3", [] {
                   FiniteGroup g = FiniteGroup::cyclic(3);
                   return CatalogEntry{"regular_C3",
                                       induced_lattice(g, Subgroup::trivial()),
                                       "Weil restriction of a split rank-1 torus along a cubic cyclic extension",
                                       {{"K0", z(), "coend"},
                                        h1("{0}", zero(), "trivial"),
                                        h1("{0,1,2}", zero(), "shapiro")}};
                 }});
    b.push_back({"regular_S3", [] {
                   FiniteGroup g = symmetric3();
                   return CatalogEntry{"regular_S3",
                                       induced_lattice(g, Subgroup::trivial()),
                                       "Weil restriction of a split rank-1 torus along an S3 extension",
                                       {{"K0", z(), "coend"},
                                        h1("{0}", zero(), "trivial"),
                                        h1("{0,2}", zero(), "shapiro"),
                                        h1("{0,1,3}", zero(), "shapiro"),
                                        h1("{0,1,2,3,4,5}", zero(), "shapiro")}};
                 }});
    b.push_back({"induced_S3_C2", [] {
                   FiniteGroup g = symmetric3();
                   return CatalogEntry{"induced_S3_C2",
                                       induced_lattice(g, make_subgroup(g, {0, 2})),
                                       "permutation lattice of S3 on three letters",
                                       {{"K0", z(), "coend"},
                                        h1("{0}", zero(), "trivial"),
                                        h1("{0,2}", zero(), "shapiro"),
                                        h1("{0,1,3}", zero(), "shapiro"),
                                        h1("{0,1,2,3,4,5}", zero(), "shapiro")}};
                 }});
    b.push_back({"sign_sum", [] {
                   return CatalogEntry{"sign_sum",
                                       direct_sum(sign(), sign()),
                                       "two copies of the sign lattice with the diagonal C2 action",
                                       {{"K0", AbGroup(1, {Integer(2), Integer(2), Integer(2)}), "coend"},
                                        h1("{0}", zero(), "trivial"),
                                        h1("{0,1}", AbGroup(0, {Integer(2), Integer(2)}), "cyclic")}};
                 }});
    return b;
  }();
  return list;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& b : builders()) out.push_back(b.name);
  return out;
}

CatalogEntry catalog_get(const std::string& name) {
  for (const auto& b : builders())
    if (b.name == name) return b.make();
  throw ValidationError("unknown catalog entry '" + name + "'");
}

std::vector<CatalogEntry> catalog_all() {
  std::vector<CatalogEntry> out;
  for (const auto& b : builders()) out.push_back(b.make());
  return out;
}

}  // namespace mirrork
