#include "doctest.h"
#include "mirrork/bredon.hpp"
#include "mirrork/catalog.hpp"
#include "mirrork/errors.hpp"
#include "mirrork/groupcoh.hpp"

#include <set>

using namespace mirrork;

namespace {

// H^1 of a cyclic group: ker(norm) / im(sigma - 1).
AbGroup cyclic_oracle(const GLattice& l, const Subgroup& h) {
  const FiniteGroup& g = l.group();
  std::size_t s = 0;
  for (std::size_t x : h.elements())
    if (g.element_order(x) == h.order()) s = x;
  REQUIRE(g.element_order(s) == h.order());
  const std::size_t r = l.rank();
  IntMatrix norm(r, r), power = IntMatrix::identity(r);
  for (std::size_t k = 0; k < h.order(); ++k) {
    norm = norm + power;
    power = l.action(s) * power;
  }
  return subquotient(r, norm, IntMatrix(r, 0), l.action(s) - IntMatrix::identity(r)).group();
}

Subgroup parse_subgroup(const FiniteGroup& g, const std::string& text) {
  std::vector<std::size_t> elements;
  std::size_t pos = 1;
  while (pos < text.size() - 1) {
    std::size_t end = text.find_first_of(",}", pos);
    elements.push_back(std::stoul(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return make_subgroup(g, elements);
}

}  // namespace

TEST_CASE("catalog: names and lookups") {
  auto names = catalog_names();
  CHECK(names.size() == 13);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  CHECK_THROWS_AS(catalog_get("nonexistent"), ValidationError);

  auto sign = catalog_get("sign");
  CHECK(sign.lattice.rank() == 1);
  CHECK(sign.lattice.group().order() == 2);
  CHECK(sign.lattice.action(1) == IntMatrix{{-1}});

  auto split2 = catalog_get("split2");
  CHECK(split2.lattice.rank() == 2);
  CHECK(split2.lattice.group().order() == 1);

  auto cubic = catalog_get("norm_one_cyclic3");
  CHECK(cubic.lattice.rank() == 2);
  IntMatrix m = cubic.lattice.action(1);
  CHECK(m != IntMatrix::identity(2));
  CHECK(m * m * m == IntMatrix::identity(2));

  CHECK(catalog_get("sign_sum").lattice.rank() == 2);
  CHECK(catalog_get("regular_S3").lattice.rank() == 6);
  CHECK(catalog_get("induced_S3_C2").lattice.rank() == 3);
}

TEST_CASE("catalog: golden values are reproduced by their oracles") {
  for (const auto& e : catalog_all()) {
    CAPTURE(e.name);
    const GLattice& l = e.lattice;
    std::set<ElementMask> covered;
    for (const auto& g : e.expected) {
      CAPTURE(g.invariant);
      if (g.invariant == "K0") {
        if (g.oracle == "trivial") {
          CHECK(l.group().order() == 1);
        } else {
          REQUIRE(g.oracle == "coend");
          CHECK(coend_h0(build_complex(l)).group == g.value);
        }
        CHECK(mp_k0(l).group == g.value);
      } else if (g.invariant.rfind("H1[", 0) == 0) {
        Subgroup h = parse_subgroup(l.group(), g.invariant.substr(3, g.invariant.size() - 4));
        covered.insert(h.mask());
        if (g.oracle == "trivial") {
          CHECK(h.order() == 1);
          CHECK(g.value.is_trivial());
        } else if (g.oracle == "cyclic") {
          CHECK(cyclic_oracle(l, h) == g.value);
        } else {
          // Permutation lattices have vanishing H^1 on every subgroup.
          REQUIRE(g.oracle == "shapiro");
          CHECK(l.is_permutation());
          CHECK(g.value.is_trivial());
        }
        CHECK(h1(l, h).group == g.value);
      } else {
        REQUIRE(g.oracle == "trivial");
        REQUIRE(l.group().order() == 1);
        auto homology = bredon_homology(build_complex(l), constant_Z(l.group()));
        CHECK(homology.at(std::stoul(g.invariant.substr(1))) == g.value);
      }
    }
    for (const auto& c : enumerate_subgroups(l.group())) CHECK(covered.count(c.representative.mask()) == 1);
  }
}
