#pragma once

// Bredon homology with covariant coefficient systems, and two presentations
// of H_0: the coend over the orbit category and the one built from H^1.

#include "mirrork/eqcell.hpp"
#include "mirrork/groupcoh.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mirrork {

/// True when a and b induce the same homomorphism into target (rows reduced
/// modulo the target's generator orders).
bool same_homomorphism(const IntMatrix& a, const IntMatrix& b, const AbGroup& target);
/// Coordinates reduced into [0, d) on torsion generators.
IntVector reduce_coordinates(const IntVector& v, const AbGroup& g);

/// Covariant functor on the orbit category, stored per subgroup: an object
/// for each subgroup, a transfer M(K) -> M(H) for each inclusion K <= H and
/// conjugations c_g : M(H) -> M(gHg^{-1}).
class CoefficientSystem {
 public:
  CoefficientSystem() = default;
  explicit CoefficientSystem(FiniteGroup group) : group_(std::move(group)) {}

  const FiniteGroup& group() const { return group_; }

  void set_object(const Subgroup& h, AbGroup a) { objects_[h.mask()] = std::move(a); }
  void set_transfer(const Subgroup& k, const Subgroup& h, IntMatrix m) { transfers_[{k.mask(), h.mask()}] = std::move(m); }
  void set_conjugation(const Subgroup& h, std::size_t g, IntMatrix m) { conjugations_[{h.mask(), g}] = std::move(m); }

  bool has_object(const Subgroup& h) const { return objects_.count(h.mask()) > 0; }
  /// Throws ValidationError when the subgroup has no object.
  const AbGroup& object(const Subgroup& h) const;
  /// Identity for k == h; throws ValidationError when missing.
  IntMatrix transfer(const Subgroup& k, const Subgroup& h) const;
  /// Defaults to the identity when unset and the two objects agree.
  IntMatrix conjugation(const Subgroup& h, std::size_t g) const;

  /// Checks shapes, homomorphism property, functoriality of transfers,
  /// conjugations (identity on h in H, multiplicative, compatible with
  /// transfers). Throws ValidationError naming the first failure.
  void validate() const;

 private:
  FiniteGroup group_;
  std::map<ElementMask, AbGroup> objects_;
  std::map<std::pair<ElementMask, ElementMask>, IntMatrix> transfers_;
  std::map<std::pair<ElementMask, std::size_t>, IntMatrix> conjugations_;
};

/// Z at every orbit, transfer x[H:K], identity conjugations.
CoefficientSystem constant_Z(const FiniteGroup& g);

struct BredonChainComplex {
  CyclicChainComplex complex;
  /// Per degree: orbit representative cells (smallest index in each orbit).
  std::vector<std::vector<std::size_t>> representatives;
  std::vector<std::vector<Subgroup>> stabilizers;
  /// Per degree: offset of each representative's summand in the chain group.
  std::vector<std::vector<std::size_t>> offsets;
};

BredonChainComplex chain_complex(const EquivariantCellComplex& x, const CoefficientSystem& m);
std::vector<AbGroup> homology(const BredonChainComplex& c);
std::vector<AbGroup> bredon_homology(const EquivariantCellComplex& x, const CoefficientSystem& m);

struct Presentation {
  std::vector<std::string> generator_names;
  IntMatrix relations;  // one relation per row
  AbGroup group;
};

/// Generators: components of X^H for every subgroup H (named by smallest
/// vertex); relations [H:K] gen_H(c) - gen_K(c') and conjugation identifications.
Presentation coend_h0(const EquivariantCellComplex& x);
/// Generators: elements of H^1(H, lattice) for every subgroup H; relations
/// [H:K] gen_H(L) - gen_K(res L) and conjugation identifications.
Presentation mp_k0(const GLattice& lattice);
Presentation mp_k0(CohomologyCache& cache);

}  // namespace mirrork
