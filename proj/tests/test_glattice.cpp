#include "doctest.h"
#include "mirrork/errors.hpp"
#include "mirrork/glattice.hpp"

#include <cstdlib>
#include <set>

using namespace mirrork;

namespace {

// S3 as permutations of {0,1,2}: a 3-cycle and a transposition.
FiniteGroup s3() { return FiniteGroup::from_permutations({{1, 2, 0}, {1, 0, 2}}); }

// Oracle: every element subset closed under products, by exhaustive search.
std::set<ElementMask> brute_force_subgroups(const FiniteGroup& g) {
  std::set<ElementMask> out;
  const std::size_t n = g.order();
  for (ElementMask m = 1; m < (ElementMask{1} << n); m += 2) {
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a)
      for (std::size_t b = 0; b < n && closed; ++b)
        if (((m >> a) & 1U) && ((m >> b) & 1U) && !((m >> g.multiply(a, b)) & 1U)) closed = false;
    if (closed) out.insert(m);
  }
  return out;
}

std::size_t brute_force_class_count(const FiniteGroup& g) {
  auto subs = brute_force_subgroups(g);
  std::set<ElementMask> seen;
  std::size_t classes = 0;
  for (ElementMask m : subs) {
    if (seen.count(m)) continue;
    ++classes;
    for (std::size_t x = 0; x < g.order(); ++x) {
      ElementMask c = 0;
      for (std::size_t e : Subgroup(m).elements()) c |= ElementMask{1} << g.conjugate(x, e);
      seen.insert(c);
    }
  }
  return classes;
}

GLattice sign_lattice() { return GLattice::from_generator_images(FiniteGroup::cyclic(2), 1, {{1, IntMatrix{{-1}}}}); }

}  // namespace

TEST_CASE("FiniteGroup validation") {
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(FiniteGroup({{1, 0}, {0, 1}}), ValidationError);
  // Latin square without associativity (a loop of order 5).
  CHECK_THROWS_AS(FiniteGroup({{0, 1, 2, 3, 4},
                               {1, 0, 3, 4, 2},
                               {2, 4, 0, 1, 3},
                               {3, 2, 4, 0, 1},
                               {4, 3, 1, 2, 0}}),
                  ValidationError);
  FiniteGroup g = s3();
  CHECK(g.order() == 6);
  CHECK_FALSE(g.is_abelian());
  for (std::size_t a = 0; a < 6; ++a) CHECK(g.multiply(a, g.inverse(a)) == 0);
  CHECK(FiniteGroup::cyclic(6).cyclic_generator() == std::size_t{1});
  CHECK_FALSE(g.cyclic_generator());
}

TEST_CASE("enumerate_subgroups: worked examples against brute force") {
  SUBCASE("C2") {
    auto c = enumerate_subgroups(FiniteGroup::cyclic(2));
    REQUIRE(c.size() == 2);
    CHECK(c[0].representative.order() == 1);
    CHECK(c[1].representative.order() == 2);
  }
  SUBCASE("S3") {
    FiniteGroup g = s3();
    auto c = enumerate_subgroups(g);
    CHECK(c.size() == brute_force_class_count(g));
    REQUIRE(c.size() == 4);
    std::vector<std::size_t> orders;
    for (const auto& k : c) orders.push_back(k.representative.order());
    CHECK(orders == std::vector<std::size_t>{1, 2, 3, 6});
    CHECK(c[1].conjugates.size() == 3);
    CHECK(c[1].normalizer == c[1].representative);
    CHECK(c[2].normalizer == Subgroup::whole(g));
    std::set<ElementMask> all;
    for (const auto& s : all_subgroups(g)) all.insert(s.mask());
    CHECK(all == brute_force_subgroups(g));
  }
  SUBCASE("C6") {
    FiniteGroup g = FiniteGroup::cyclic(6);
    auto c = enumerate_subgroups(g);
    CHECK(c.size() == 4);
    CHECK(c.size() == brute_force_class_count(g));
  }
  SUBCASE("C2 x C2 and D4 against brute force") {
    FiniteGroup v4 = FiniteGroup::from_permutations({{1, 0, 3, 2}, {2, 3, 0, 1}});
    CHECK(all_subgroups(v4).size() == brute_force_subgroups(v4).size());
    FiniteGroup d4 = FiniteGroup::from_permutations({{1, 2, 3, 0}, {3, 2, 1, 0}});
    CHECK(d4.order() == 8);
    CHECK(all_subgroups(d4).size() == brute_force_subgroups(d4).size());
    CHECK(enumerate_subgroups(d4).size() == brute_force_class_count(d4));
  }
}

TEST_CASE("enumerate_subgroups: cap") {
  setenv("MIRRORK_MAX_GROUP_ORDER", "4", 1);
  CHECK_THROWS_AS(enumerate_subgroups(FiniteGroup::cyclic(6)), UnsupportedError);
  CHECK(enumerate_subgroups(FiniteGroup::cyclic(4)).size() == 3);
  setenv("MIRRORK_MAX_GROUP_ORDER", "1000", 1);
  CHECK(group_order_cap() == kHardGroupOrderLimit);
  unsetenv("MIRRORK_MAX_GROUP_ORDER");
  CHECK_THROWS_AS(FiniteGroup::cyclic(65), UnsupportedError);
}

TEST_CASE("GLattice validation") {
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  CHECK_THROWS_AS(GLattice(c2, 1, {IntMatrix{{1}}, IntMatrix{{2}}}), ValidationError);
  CHECK_THROWS_AS(GLattice(c2, 1, {IntMatrix{{-1}}, IntMatrix{{-1}}}), ValidationError);
  // [[1,1],[0,1]] has infinite order, so it cannot represent C2.
  CHECK_THROWS_AS(GLattice::from_generator_images(c2, 2, {{1, IntMatrix{{1, 1}, {0, 1}}}}), ValidationError);
  GLattice s = sign_lattice();
  CHECK(s.action(1) == IntMatrix{{-1}});
  CHECK(s.is_signed_permutation());
  CHECK_FALSE(s.is_permutation());
}

TEST_CASE("induced_lattice") {
  SUBCASE("(C2, trivial)") {
    GLattice l = induced_lattice(FiniteGroup::cyclic(2), Subgroup::trivial());
    CHECK(l.rank() == 2);
    CHECK(l.action(1) == IntMatrix{{0, 1}, {1, 0}});
  }
  SUBCASE("(G, G)") {
    FiniteGroup g = s3();
    GLattice l = induced_lattice(g, Subgroup::whole(g));
    CHECK(l.rank() == 1);
    for (std::size_t x = 0; x < 6; ++x) CHECK(l.action(x) == IntMatrix::identity(1));
  }
  SUBCASE("(S3, C2) against a coset oracle") {
    FiniteGroup g = s3();
    Subgroup h = enumerate_subgroups(g)[1].representative;
    GLattice l = induced_lattice(g, h);
    CHECK(l.rank() == 3);
    CHECK(l.is_permutation());
    // Oracle: x maps coset i to coset j iff x r_i H = r_j H as element sets.
    auto reps = coset_representatives(g, h);
    auto coset = [&](std::size_t r) {
      std::set<std::size_t> s;
      for (std::size_t e : h.elements()) s.insert(g.multiply(r, e));
      return s;
    };
    for (std::size_t x = 0; x < 6; ++x)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
          bool maps = coset(g.multiply(x, reps[i])) == coset(reps[j]);
          CHECK((l.action(x)(j, i) == 1) == maps);
        }
  }
  CHECK_THROWS_AS(induced_lattice(FiniteGroup::cyclic(4), Subgroup(0b0011)), ValidationError);
}

TEST_CASE("induced_lattice: H-fixed rank bounds H-orbits on G/H") {
  FiniteGroup g = s3();
  for (const auto& h : all_subgroups(g)) {
    GLattice l = induced_lattice(g, h);
    auto reps = coset_representatives(g, h);
    std::set<std::set<std::size_t>> orbits;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      std::set<std::size_t> o;
      for (std::size_t e : h.elements()) o.insert(coset_index(g, h, reps, g.multiply(e, reps[c])));
      orbits.insert(o);
    }
    CHECK(fixed_sublattice(l, h).cols() >= orbits.size());
  }
}

TEST_CASE("norm_one_lattice") {
  SUBCASE("C2 is the sign lattice") {
    GLattice l = norm_one_lattice(FiniteGroup::cyclic(2));
    CHECK(l.rank() == 1);
    CHECK(l.action(1) == IntMatrix{{-1}});
  }
  SUBCASE("C3") {
    GLattice l = norm_one_lattice(FiniteGroup::cyclic(3));
    CHECK(l.rank() == 2);
    const IntMatrix& r = l.action(1);
    IntMatrix id = IntMatrix::identity(2);
    CHECK(r != id);
    CHECK(r * r * r == id);
    CHECK((r * r + r + id).is_zero());
  }
  SUBCASE("trivial group") { CHECK(norm_one_lattice(FiniteGroup::trivial()).rank() == 0); }
  SUBCASE("S3: rank 5 and no nonzero fixed vectors") {
    GLattice l = norm_one_lattice(s3());
    CHECK(l.rank() == 5);
    CHECK(fixed_sublattice(l, Subgroup::whole(s3())).cols() == 0);
  }
}

TEST_CASE("norm_one_lattice(C2) is conjugate to the sign lattice by a small basis change") {
  GLattice a = norm_one_lattice(FiniteGroup::cyclic(2));
  GLattice s = sign_lattice();
  bool found = false;
  for (int u : {-1, 1})
    if (IntMatrix{{u}} * a.action(1) == s.action(1) * IntMatrix{{u}}) found = true;
  CHECK(found);
}

TEST_CASE("weil_resolution") {
  SUBCASE("sign lattice") {
    auto w = weil_resolution(sign_lattice());
    CHECK(w.big.rank() == 2);
    CHECK(w.big.action(1) == IntMatrix{{0, 1}, {1, 0}});
    CHECK(w.inclusion == IntMatrix{{1}, {-1}});
    CHECK(w.quotient.rank() == 1);
    CHECK(w.quotient.action(1) == IntMatrix::identity(1));
  }
  SUBCASE("trivial action") {
    auto w = weil_resolution(GLattice::trivial(FiniteGroup::cyclic(3), 2));
    CHECK(w.cosets.size() == 1);
    CHECK(w.inclusion == IntMatrix::identity(2));
    CHECK(w.quotient.rank() == 0);
  }
  SUBCASE("cubic norm-one lattice") {
    GLattice l = norm_one_lattice(FiniteGroup::cyclic(3));
    auto w = weil_resolution(l);
    CHECK(w.big.rank() == 6);
    CHECK(w.quotient.rank() == 4);
    for (const auto& d : invariant_factors(w.inclusion)) CHECK(d == 1);
  }
}

TEST_CASE("weil_resolution: invariants on every lattice over S3") {
  FiniteGroup g = s3();
  std::vector<GLattice> lattices{norm_one_lattice(g)};
  for (const auto& h : all_subgroups(g)) lattices.push_back(induced_lattice(g, h));
  lattices.push_back(direct_sum(lattices[0], lattices[1]));
  for (const auto& l : lattices) {
    auto w = weil_resolution(l);
    CHECK(w.big.rank() == l.rank() + w.quotient.rank());
    CHECK((w.projection * w.inclusion).is_zero());
    for (std::size_t x = 0; x < g.order(); ++x) {
      CHECK(w.big.action(x) * w.inclusion == w.inclusion * l.action(x));
      CHECK(w.quotient.action(x) * w.projection == w.projection * w.big.action(x));
    }
  }
}

TEST_CASE("character_orbits") {
  SUBCASE("sign lattice, bound 2") {
    auto o = character_orbits(sign_lattice(), 2);
    REQUIRE(o.size() == 3);
    CHECK(o[0].representative == IntVector{Integer(-2)});
    CHECK(o[0].stabilizer == Subgroup::trivial());
    CHECK(o[1].representative == IntVector{Integer(-1)});
    CHECK(o[2].representative == IntVector{Integer(0)});
    CHECK(o[2].stabilizer == Subgroup::whole(FiniteGroup::cyclic(2)));
    CHECK(o[2].orbit_size == 1);
  }
  SUBCASE("trivial action") {
    auto o = character_orbits(GLattice::trivial(FiniteGroup::cyclic(2), 1), 1);
    CHECK(o.size() == 3);
    for (const auto& x : o) CHECK(x.stabilizer.order() == 2);
  }
  SUBCASE("cubic norm-one lattice, bound 1: oracle by repeated application") {
    GLattice l = norm_one_lattice(FiniteGroup::cyclic(3));
    auto o = character_orbits(l, 1);
    std::size_t covered = 0;
    for (const auto& x : o) {
      covered += x.members_in_box.size();
      CHECK(x.orbit_size * x.stabilizer.order() == 3);
      std::set<IntVector> orbit;
      IntVector v = x.representative;
      for (int k = 0; k < 3; ++k) {
        orbit.insert(v);
        v = l.action(1) * v;
      }
      CHECK(orbit.size() == x.orbit_size);
      for (const auto& m : x.members_in_box) CHECK(orbit.count(m) == 1);
    }
    CHECK(covered == 9);
    CHECK(o.front().representative != IntVector(2, Integer(0)));
  }
}

TEST_CASE("character_orbits: orbit-stabilizer over S3") {
  GLattice l = norm_one_lattice(s3());
  for (const auto& x : character_orbits(l, 1)) {
    CHECK(x.orbit_size * x.stabilizer.order() == 6);
    CHECK(x.members_in_box.front() == x.representative);
  }
}

TEST_CASE("fixed_sublattice") {
  CHECK(fixed_sublattice(sign_lattice(), Subgroup(0b11)).cols() == 0);
  GLattice l = norm_one_lattice(FiniteGroup::cyclic(3));
  CHECK(fixed_sublattice(l, Subgroup::trivial()).cols() == 2);
  IntMatrix f = fixed_sublattice(induced_lattice(FiniteGroup::cyclic(2), Subgroup::trivial()), Subgroup(0b11));
  REQUIRE(f.cols() == 1);
  CHECK(abs(f(0, 0)) == 1);
  CHECK(f(0, 0) == f(1, 0));
}
