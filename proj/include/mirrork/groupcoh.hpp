#pragma once

// H^1 of finite groups with lattice coefficients, computed on explicit
// cocycles, with restriction and conjugation maps between subgroups.

#include "mirrork/glattice.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace mirrork {

struct CohomologyResult {
  Subgroup subgroup;
  AbGroup group;
  /// Columns are cocycles representing the normal-form generators of group.
  /// A cocycle is a vector of r * |H| entries, one block per element of H in
  /// increasing index order.
  IntMatrix cocycle_basis;

  /// Normal-form coordinates of the class of a cocycle on this subgroup.
  IntVector class_of(const IntVector& cocycle) const;
  /// A cocycle representing the class with the given coordinates.
  IntVector representative(const IntVector& coordinates) const;

  // Internals: saturated cocycle lattice, a left inverse of it, and the
  // quotient by coboundaries in cocycle coordinates.
  IntMatrix cocycles;
  IntMatrix cocycle_left_inverse;
  QuotientCoordinates quotient;
};

CohomologyResult h1(const GLattice& lattice, const Subgroup& h);

/// res: H^1(H) -> H^1(K) in normal-form coordinates (cols = generators of H^1(H)).
IntMatrix h1_restriction(const GLattice& lattice, const Subgroup& k, const Subgroup& h);
/// c_g: H^1(H) -> H^1(gHg^{-1}), (c_g phi)(x) = rho(g) phi(g^{-1} x g).
IntMatrix h1_conjugation(const GLattice& lattice, const Subgroup& h, std::size_t g);

struct FixedPointComponents {
  AbGroup components;  // pi_0 of the fixed points, as H^1(H, lattice)
  std::size_t identity_component_rank = 0;
};
FixedPointComponents pi0_fixed_points(const GLattice& lattice, const Subgroup& h);

/// Per-lattice cache of H^1 results and their structure maps. Thread-safe;
/// entries are computed once.
class CohomologyCache {
 public:
  explicit CohomologyCache(GLattice lattice) : lattice_(std::move(lattice)) {}

  const GLattice& lattice() const { return lattice_; }
  const CohomologyResult& h1(const Subgroup& h);
  const IntMatrix& restriction(const Subgroup& k, const Subgroup& h);
  const IntMatrix& conjugation(const Subgroup& h, std::size_t g);

 private:
  GLattice lattice_;
  std::mutex mutex_;
  std::map<ElementMask, std::unique_ptr<CohomologyResult>> h1_;
  std::map<std::pair<ElementMask, ElementMask>, std::unique_ptr<IntMatrix>> restriction_;
  std::map<std::pair<ElementMask, std::size_t>, std::unique_ptr<IntMatrix>> conjugation_;
};

}  // namespace mirrork
