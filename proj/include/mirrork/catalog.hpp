#pragma once

// Built-in example lattices with frozen expected invariants.

#include "mirrork/glattice.hpp"

#include <string>
#include <vector>

namespace mirrork {

/// A frozen value and the oracle that produced it ("trivial" for values that
/// need no computation).
struct GoldenValue {
  std::string invariant;  // "K0", "H1[<subgroup>]", "H<p>"
  AbGroup value;
  std::string oracle;
};

struct CatalogEntry {
  std::string name;
  GLattice lattice;
  std::string note;
  std::vector<GoldenValue> expected;
};

std::vector<std::string> catalog_names();
/// Throws ValidationError for unknown names.
CatalogEntry catalog_get(const std::string& name);
std::vector<CatalogEntry> catalog_all();

/// Symmetric group on three letters; element 1 is a 3-cycle, element 2 a
/// transposition.
FiniteGroup symmetric3();

}  // namespace mirrork
