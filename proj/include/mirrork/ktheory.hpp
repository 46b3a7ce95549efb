#pragma once

// Mackey coefficient data, the E2 page of the equivariant Atiyah-Hirzebruch
// spectral sequence, finite-field presets and the rank-1 Swan computation.

#include "mirrork/bredon.hpp"

#include <map>
#include <string>
#include <vector>

namespace mirrork {

/// Covariant part (objects, transfers, conjugations) plus restrictions
/// res: M(H) -> M(K) for K <= H.
class MackeyData {
 public:
  MackeyData() = default;
  explicit MackeyData(FiniteGroup group) : covariant_(std::move(group)) {}

  const FiniteGroup& group() const { return covariant_.group(); }
  CoefficientSystem& covariant() { return covariant_; }
  const CoefficientSystem& covariant() const { return covariant_; }

  void set_restriction(const Subgroup& k, const Subgroup& h, IntMatrix m) {
    restrictions_[{k.mask(), h.mask()}] = std::move(m);
  }
  /// Identity for k == h; throws ValidationError when missing.
  IntMatrix restriction(const Subgroup& k, const Subgroup& h) const;
  bool has_restriction(const Subgroup& k, const Subgroup& h) const {
    return k == h || restrictions_.count({k.mask(), h.mask()}) > 0;
  }

  /// Throws ValidationError on a broken axiom (functoriality, conjugation
  /// coherence with both transfer and restriction). Violations of
  /// tr o res = [H:K] are returned as warnings.
  std::vector<std::string> validate() const;

 private:
  CoefficientSystem covariant_;
  std::map<std::pair<ElementMask, ElementMask>, IntMatrix> restrictions_;
};

/// K_degree of the fixed fields of Gal(F_{q^d}/F_q), over the given cyclic
/// group of order d (Frobenius = its smallest-index generator).
MackeyData finite_field_mackey(long long q, std::size_t d, int degree, const FiniteGroup& group);
MackeyData finite_field_mackey(long long q, std::size_t d, int degree);
/// Quillen's K_n(F_q).
AbGroup finite_field_k_group(long long q, int degree);

/// A trivial-group lattice is viewed over the cyclic group of order d; any
/// other lattice must already be over a cyclic group of order d.
GLattice align_to_cyclic(const GLattice& lattice, std::size_t d);

struct CollapseCertificate {
  bool certified = false;
  std::string reason;
  struct Degree {
    int n = 0;
    std::vector<AbGroup> pieces;  // E_{p, n-p} for p = 0..min(rank, n)
    bool extension_ambiguous = false;
  };
  std::vector<Degree> graded;  // filled only when certified
};

struct E2Page {
  std::size_t rank = 0;
  int q_max = 0;
  std::vector<std::vector<AbGroup>> rows;  // rows[q][p]
  CollapseCertificate collapse;
  /// Zero outside 0 <= p <= rank.
  AbGroup at(long long p, int q) const;
};

/// Row 0 uses the constant functor; row q >= 1 uses coefficients.at(q).
E2Page e2_page(const EquivariantCellComplex& x, const std::map<int, MackeyData>& coefficients, int q_max);
/// Preset rows K_q of the finite-field fixed fields, q = 1..q_max.
std::map<int, MackeyData> finite_field_rows(long long q, std::size_t d, int q_max, const FiniteGroup& group);

CollapseCertificate collapse_by_lacunarity(const E2Page& page);

struct SwanDegree {
  AbGroup kf;
  AbGroup coker;  // coker(res_i)
  AbGroup ker;    // ker(res_{i-1})
  bool extension_ambiguous = false;
};
/// K_i = KF_i + C_i with 0 -> coker(res_i) -> C_i -> ker(res_{i-1}) -> 0.
std::vector<SwanDegree> swan_rank1(const std::vector<AbGroup>& kf, const std::vector<AbGroup>& ke,
                                   const std::vector<IntMatrix>& res);
/// Inputs for F_q and its quadratic extension, degrees 0..n_max.
std::vector<SwanDegree> swan_finite_field(long long q, int n_max);

bool is_prime_power(long long q);

}  // namespace mirrork
