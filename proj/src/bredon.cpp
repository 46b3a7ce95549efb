#include "mirrork/bredon.hpp"

#include "mirrork/errors.hpp"

#include <sstream>

namespace mirrork {

IntVector reduce_coordinates(const IntVector& v, const AbGroup& g) {
  IntVector out = v;
  IntVector orders = g.generator_orders();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (orders[i] != 0) {
      out[i] %= orders[i];
      if (out[i] < 0) out[i] += orders[i];
    }
  return out;
}

bool same_homomorphism(const IntMatrix& a, const IntMatrix& b, const AbGroup& target) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  IntVector orders = target.generator_orders();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Integer d = a(i, j) - b(i, j);
      if (orders[i] == 0 ? d != 0 : d % orders[i] != 0) return false;
    }
  return true;
}

const AbGroup& CoefficientSystem::object(const Subgroup& h) const {
  auto it = objects_.find(h.mask());
  if (it == objects_.end()) throw ValidationError("coefficient system has no object for subgroup " + h.to_string());
  return it->second;
}

IntMatrix CoefficientSystem::transfer(const Subgroup& k, const Subgroup& h) const {
  if (k == h) return IntMatrix::identity(object(h).generator_count());
  auto it = transfers_.find({k.mask(), h.mask()});
  if (it == transfers_.end())
    throw ValidationError("coefficient system has no transfer " + k.to_string() + " -> " + h.to_string());
  return it->second;
}

IntMatrix CoefficientSystem::conjugation(const Subgroup& h, std::size_t g) const {
  auto it = conjugations_.find({h.mask(), g});
  if (it != conjugations_.end()) return it->second;
  const AbGroup& src = object(h);
  const AbGroup& dst = object(conjugate(group_, g, h));
  if (src != dst)
    throw ValidationError("coefficient system has no conjugation by " + std::to_string(g) + " on " + h.to_string());
  return IntMatrix::identity(src.generator_count());
}

void CoefficientSystem::validate() const {
  auto subs = all_subgroups(group_);
  auto fail = [](const std::string& what) { throw ValidationError("coefficient system: " + what); };
  for (const auto& h : subs) (void)object(h);
  for (const auto& [key, m] : transfers_) {
    Subgroup k(key.first), h(key.second);
    if (!is_subgroup(group_, k.mask()) || !is_subgroup(group_, h.mask()) || !k.is_contained_in(h))
      fail("transfer between non-nested subgroups " + k.to_string() + " -> " + h.to_string());
  }
  for (const auto& k : subs)
    for (const auto& h : subs) {
      if (!k.is_contained_in(h)) continue;
      IntMatrix t = transfer(k, h);
      if (t.rows() != object(h).generator_count() || t.cols() != object(k).generator_count())
        fail("transfer " + k.to_string() + " -> " + h.to_string() + " has the wrong shape");
      if (!is_homomorphism(object(k), object(h), t))
        fail("transfer " + k.to_string() + " -> " + h.to_string() + " is not a homomorphism");
    }
  for (const auto& l : subs)
    for (const auto& k : subs)
      for (const auto& h : subs) {
        if (!l.is_contained_in(k) || !k.is_contained_in(h)) continue;
        if (!same_homomorphism(transfer(k, h) * transfer(l, k), transfer(l, h), object(h)))
          fail("transfers are not functorial on " + l.to_string() + " <= " + k.to_string() + " <= " + h.to_string());
      }
  const std::size_t n = group_.order();
  for (const auto& h : subs) {
    for (std::size_t g = 0; g < n; ++g) {
      Subgroup gh = conjugate(group_, g, h);
      IntMatrix c = conjugation(h, g);
      if (c.rows() != object(gh).generator_count() || c.cols() != object(h).generator_count() ||
          !is_homomorphism(object(h), object(gh), c))
        fail("conjugation by " + std::to_string(g) + " on " + h.to_string() + " is not a homomorphism");
      if (h.contains(g) && !same_homomorphism(c, IntMatrix::identity(c.cols()), object(h)))
        fail("conjugation by " + std::to_string(g) + " is not trivial on " + h.to_string());
      for (std::size_t a = 0; a < n; ++a) {
        IntMatrix lhs = conjugation(gh, a) * c;
        Subgroup agh = conjugate(group_, a, gh);
        if (!same_homomorphism(lhs, conjugation(h, group_.multiply(a, g)), object(agh)))
          fail("conjugations are not multiplicative on " + h.to_string());
      }
      for (const auto& k : subs) {
        if (!k.is_contained_in(h)) continue;
        Subgroup gk = conjugate(group_, g, k);
        if (!same_homomorphism(c * transfer(k, h), transfer(gk, gh) * conjugation(k, g), object(gh)))
          fail("conjugation by " + std::to_string(g) + " does not commute with the transfer " + k.to_string() +
               " -> " + h.to_string());
      }
    }
  }
}

CoefficientSystem constant_Z(const FiniteGroup& g) {
  CoefficientSystem m(g);
  auto subs = all_subgroups(g);
  for (const auto& h : subs) m.set_object(h, AbGroup::free(1));
  for (const auto& k : subs)
    for (const auto& h : subs)
      if (k.is_contained_in(h) && !(k == h))
        m.set_transfer(k, h, IntMatrix{{static_cast<long long>(h.order() / k.order())}});
  return m;
}

BredonChainComplex chain_complex(const EquivariantCellComplex& x, const CoefficientSystem& m) {
  if (!(m.group() == x.lattice.group())) throw ValidationError("coefficient system is over a different group");
  const FiniteGroup& g = x.lattice.group();
  const std::size_t levels = x.cells.size();

  struct OrbitPlace {
    std::size_t orbit = 0;
    std::size_t transporter = 0;  // transporter . representative = sign * cell
    int sign = 1;
  };
  BredonChainComplex c;
  c.representatives.assign(levels, {});
  c.stabilizers.assign(levels, {});
  c.offsets.assign(levels, {});
  std::vector<std::vector<OrbitPlace>> place(levels);
  for (std::size_t p = 0; p < levels; ++p) {
    const std::size_t count = x.cells[p].size();
    place[p].assign(count, {});
    std::vector<bool> seen(count, false);
    for (std::size_t i = 0; i < count; ++i) {
      if (seen[i]) continue;
      const std::size_t orbit = c.representatives[p].size();
      c.representatives[p].push_back(i);
      c.stabilizers[p].push_back(x.stabilizers[p][i]);
      for (std::size_t e = 0; e < g.order(); ++e) {
        const SignedIndex& img = x.action[e][p][i];
        if (seen[img.index]) continue;
        seen[img.index] = true;
        place[p][img.index] = {orbit, e, img.sign};
      }
    }
  }

  c.complex.orders.assign(levels, {});
  for (std::size_t p = 0; p < levels; ++p) {
    std::size_t offset = 0;
    for (const auto& h : c.stabilizers[p]) {
      c.offsets[p].push_back(offset);
      IntVector orders = m.object(h).generator_orders();
      c.complex.orders[p].insert(c.complex.orders[p].end(), orders.begin(), orders.end());
      offset += orders.size();
    }
  }

  c.complex.boundary.assign(levels, {});
  c.complex.boundary[0].rows = 0;
  c.complex.boundary[0].columns.assign(c.complex.orders[0].size(), {});
  for (std::size_t p = 1; p < levels; ++p) {
    SparseMatrix& b = c.complex.boundary[p];
    b.rows = c.complex.orders[p - 1].size();
    b.columns.assign(c.complex.orders[p].size(), {});
    for (std::size_t r = 0; r < c.representatives[p].size(); ++r) {
      const std::size_t sigma = c.representatives[p][r];
      const Subgroup& gs = c.stabilizers[p][r];
      std::map<std::pair<std::size_t, std::size_t>, Integer> block;
      for (const auto& [tau, coeff] : x.boundary[p].columns[sigma]) {
        const OrbitPlace& pl = place[p - 1][tau];
        const Subgroup& gt = x.stabilizers[p - 1][tau];
        if (!gs.is_contained_in(gt)) throw ConsistencyError("face stabilizer does not contain the cell stabilizer");
        IntMatrix piece = m.conjugation(gt, g.inverse(pl.transporter)) * m.transfer(gs, gt);
        const Integer factor = coeff * pl.sign;
        const std::size_t row0 = c.offsets[p - 1][pl.orbit];
        for (std::size_t i = 0; i < piece.rows(); ++i)
          for (std::size_t j = 0; j < piece.cols(); ++j)
            if (piece(i, j) != 0) block[{j, row0 + i}] += factor * piece(i, j);
      }
      const std::size_t col0 = c.offsets[p][r];
      for (const auto& [key, v] : block)
        if (v != 0) b.columns[col0 + key.first].emplace_back(key.second, v);
    }
  }
  return c;
}

std::vector<AbGroup> homology(const BredonChainComplex& c) { return homology(c.complex); }

std::vector<AbGroup> bredon_homology(const EquivariantCellComplex& x, const CoefficientSystem& m) {
  return homology(chain_complex(x, m));
}

namespace {

class PresentationBuilder {
 public:
  std::size_t add_generator(std::string name) {
    names_.push_back(std::move(name));
    return names_.size() - 1;
  }
  void add_relation(const std::vector<std::pair<std::size_t, Integer>>& terms) {
    std::map<std::size_t, Integer> row;
    for (const auto& [i, v] : terms) row[i] += v;
    bool zero = true;
    for (const auto& kv : row)
      if (kv.second != 0) zero = false;
    if (!zero) rows_.push_back(std::move(row));
  }
  Presentation finish() {
    Presentation p;
    p.generator_names = names_;
    p.relations = IntMatrix(rows_.size(), names_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [i, v] : rows_[r]) p.relations(r, i) = v;
    p.group = group_from_presentation(names_.size(), p.relations);
    return p;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::map<std::size_t, Integer>> rows_;
};

}  // namespace

Presentation coend_h0(const EquivariantCellComplex& x) {
  const FiniteGroup& g = x.lattice.group();
  auto subs = all_subgroups(g);
  PresentationBuilder b;
  // Per subgroup: component of each fixed vertex, and generator of each component.
  std::map<ElementMask, std::map<std::size_t, std::size_t>> component_of;
  std::map<ElementMask, std::vector<std::size_t>> generator_of;
  std::map<ElementMask, std::vector<std::size_t>> smallest_vertex;
  for (const auto& h : subs) {
    FixedSubcomplex f = fixed_subcomplex(x, h);
    auto& comp = component_of[h.mask()];
    auto& gens = generator_of[h.mask()];
    auto& first = smallest_vertex[h.mask()];
    gens.assign(f.component_count, 0);
    first.assign(f.component_count, 0);
    std::vector<bool> named(f.component_count, false);
    for (std::size_t k = 0; k < f.cells[0].size(); ++k) {
      const std::size_t v = f.cells[0][k], c = f.vertex_component[k];
      comp[v] = c;
      if (!named[c]) {
        named[c] = true;
        first[c] = v;
        gens[c] = b.add_generator(h.to_string() + ":v" + std::to_string(v));
      }
    }
  }
  for (const auto& h : subs)
    for (const auto& k : subs) {
      if (!k.is_contained_in(h) || k == h) continue;
      const Integer index(static_cast<long long>(h.order() / k.order()));
      for (std::size_t c = 0; c < generator_of[h.mask()].size(); ++c) {
        std::size_t v = smallest_vertex[h.mask()][c];
        std::size_t ck = component_of[k.mask()].at(v);
        b.add_relation({{generator_of[h.mask()][c], index}, {generator_of[k.mask()][ck], Integer(-1)}});
      }
    }
  for (const auto& h : subs)
    for (std::size_t e = 1; e < g.order(); ++e) {
      Subgroup gh = conjugate(g, e, h);
      for (std::size_t c = 0; c < generator_of[h.mask()].size(); ++c) {
        std::size_t w = x.action[e][0][smallest_vertex[h.mask()][c]].index;
        std::size_t cg = component_of[gh.mask()].at(w);
        b.add_relation({{generator_of[h.mask()][c], Integer(1)}, {generator_of[gh.mask()][cg], Integer(-1)}});
      }
    }
  return b.finish();
}

namespace {

// All elements of a finite group in normal-form coordinates, mixed radix order.
std::vector<IntVector> enumerate_elements(const AbGroup& a) {
  if (!a.is_finite()) throw ConsistencyError("enumerate_elements: infinite group");
  IntVector orders = a.generator_orders();
  std::vector<IntVector> out;
  IntVector cur(orders.size(), Integer(0));
  while (true) {
    out.push_back(cur);
    std::size_t k = orders.size();
    while (k > 0 && cur[k - 1] + 1 == orders[k - 1]) {
      cur[k - 1] = 0;
      --k;
    }
    if (k == 0) return out;
    ++cur[k - 1];
  }
}

std::size_t element_index(const IntVector& v, const AbGroup& a) {
  IntVector orders = a.generator_orders();
  Integer idx = 0;
  for (std::size_t i = 0; i < v.size(); ++i) idx = idx * orders[i] + v[i];
  return idx.convert_to<std::size_t>();
}

std::string element_name(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

Presentation mp_k0(CohomologyCache& cache) {
  const FiniteGroup& g = cache.lattice().group();
  auto subs = all_subgroups(g);
  PresentationBuilder b;
  std::map<ElementMask, std::size_t> base;
  std::map<ElementMask, std::vector<IntVector>> elements;
  for (const auto& h : subs) {
    const AbGroup& grp = cache.h1(h).group;
    elements[h.mask()] = enumerate_elements(grp);
    bool first = true;
    for (const auto& e : elements[h.mask()]) {
      std::size_t id = b.add_generator(h.to_string() + ":" + element_name(e));
      if (first) base[h.mask()] = id;
      first = false;
    }
  }
  auto apply = [](const IntMatrix& m, const IntVector& v, const AbGroup& target) {
    return reduce_coordinates(m * v, target);
  };
  for (const auto& h : subs)
    for (const auto& k : subs) {
      if (!k.is_contained_in(h) || k == h) continue;
      const Integer index(static_cast<long long>(h.order() / k.order()));
      const IntMatrix& res = cache.restriction(k, h);
      const AbGroup& target = cache.h1(k).group;
      for (std::size_t i = 0; i < elements[h.mask()].size(); ++i) {
        IntVector r = apply(res, elements[h.mask()][i], target);
        b.add_relation({{base[h.mask()] + i, index}, {base[k.mask()] + element_index(r, target), Integer(-1)}});
      }
    }
  for (const auto& h : subs)
    for (std::size_t e = 1; e < g.order(); ++e) {
      Subgroup gh = conjugate(g, e, h);
      const IntMatrix& conj = cache.conjugation(h, e);
      const AbGroup& target = cache.h1(gh).group;
      for (std::size_t i = 0; i < elements[h.mask()].size(); ++i) {
        IntVector r = apply(conj, elements[h.mask()][i], target);
        b.add_relation({{base[h.mask()] + i, Integer(1)}, {base[gh.mask()] + element_index(r, target), Integer(-1)}});
      }
    }
  return b.finish();
}

Presentation mp_k0(const GLattice& lattice) {
  CohomologyCache cache(lattice);
  return mp_k0(cache);
}

}  // namespace mirrork
