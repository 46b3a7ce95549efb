#include "mirrork/eqcell.hpp"

#include "mirrork/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace mirrork {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::automatic: return "auto";
    case Backend::cubical: return "cubical";
    case Backend::delone: return "delone";
    case Backend::freudenthal: return "freudenthal";
  }
  return "auto";
}

Backend parse_backend(const std::string& name) {
  if (name == "auto") return Backend::automatic;
  if (name == "cubical") return Backend::cubical;
  if (name == "delone") return Backend::delone;
  if (name == "freudenthal") return Backend::freudenthal;
  throw ValidationError("unknown backend '" + name + "'");
}

namespace {

using Points = std::vector<LiftedPoint>;
using Matrix64 = std::vector<std::vector<long long>>;

constexpr std::size_t kCubicalRankCap = 4;
constexpr std::size_t kDeloneRankCap = 3;

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

LiftedPoint reduce(const LiftedPoint& p, long long d) {
  LiftedPoint r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] - floor_div(p[i], d) * d;
  return r;
}

// Translate by a lattice vector so the lexicographically smallest vertex lies in [0,1)^n.
void translate_canonical(Points& pts, long long d) {
  const LiftedPoint lo = *std::min_element(pts.begin(), pts.end());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    long long t = floor_div(lo[i], d) * d;
    if (t == 0) continue;
    for (auto& p : pts) p[i] -= t;
  }
}

Matrix64 to_small(const IntMatrix& m) {
  Matrix64 out(m.rows(), std::vector<long long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (abs(m(i, j)) > 1000000) throw UnsupportedError("action matrix entries too large for cell construction");
      out[i][j] = m(i, j).convert_to<long long>();
    }
  return out;
}

LiftedPoint act(const Matrix64& m, const LiftedPoint& p) {
  LiftedPoint out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) out[i] += m[i][j] * p[j];
  return out;
}

std::size_t affine_dimension(const Points& pts) {
  if (pts.size() <= 1) return 0;
  IntMatrix m(pts.size() - 1, pts[0].size());
  for (std::size_t k = 1; k < pts.size(); ++k)
    for (std::size_t i = 0; i < pts[0].size(); ++i) m(k - 1, i) = pts[k][i] - pts[0][i];
  return rank(m);
}

Points intersect(const Points& a, const Points& b) {
  Points out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int permutation_sign(std::vector<std::size_t> perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    while (perm[i] != i) {
      std::swap(perm[i], perm[perm[i]]);
      sign = -sign;
    }
  return sign;
}

// A Z^n-periodic tiling of R^n: one lifted vertex set (sorted) per tile class.
struct Tiling {
  std::size_t n = 0;
  long long denominator = 1;
  std::vector<Points> tiles;
  bool simplicial = false;
};

// ---------------------------------------------------------------------------
// Raw tilings

Tiling cubical_tiling(std::size_t n) {
  Tiling t;
  t.n = n;
  t.denominator = 2;
  t.simplicial = n <= 1;
  for (std::size_t a = 0; a < (std::size_t{1} << n); ++a) {
    Points cube;
    for (std::size_t b = 0; b < (std::size_t{1} << n); ++b) {
      LiftedPoint p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<long long>(((a >> i) & 1U) + ((b >> i) & 1U));
      cube.push_back(p);
    }
    std::sort(cube.begin(), cube.end());
    t.tiles.push_back(cube);
  }
  return t;
}

Tiling freudenthal_tiling(std::size_t n) {
  Tiling t;
  t.n = n;
  t.simplicial = true;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Points s{LiftedPoint(n, 0)};
    for (std::size_t k = 0; k < n; ++k) {
      LiftedPoint p = s.back();
      p[perm[k]] = 1;
      s.push_back(p);
    }
    std::sort(s.begin(), s.end());
    t.tiles.push_back(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return t;
}

// Solve a x = b over the rationals (square a); nullopt when singular.
std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

std::vector<LiftedPoint> box(std::size_t n, long long w) {
  std::vector<LiftedPoint> out;
  LiftedPoint p(n, -w);
  while (true) {
    out.push_back(p);
    std::size_t k = n;
    while (k > 0 && p[k - 1] == w) {
      p[k - 1] = -w;
      --k;
    }
    if (k == 0) return out;
    ++p[k - 1];
  }
}

// Delone cells for the form q: empty circumscribed ellipsoids through 0 and n
// candidate lattice points, emptiness checked on a larger window.
Tiling delone_tiling(const Matrix64& q, std::size_t n, long long candidate_width) {
  struct Probe {
    LiftedPoint z;
    LiftedPoint qz;
    long long zqz = 0;
  };
  auto probe = [&](const LiftedPoint& z) {
    Probe pr{z, act(q, z), 0};
    for (std::size_t i = 0; i < n; ++i) pr.zqz += z[i] * pr.qz[i];
    return pr;
  };
  std::vector<Probe> candidates, window;
  for (const auto& z : box(n, candidate_width))
    if (std::any_of(z.begin(), z.end(), [](long long x) { return x != 0; })) candidates.push_back(probe(z));
  for (const auto& z : box(n, candidate_width + 2)) window.push_back(probe(z));

  std::set<Points> cells;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == n) {
      std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
      std::vector<Rational> b(n);
      for (std::size_t r = 0; r < n; ++r) {
        const Probe& p = candidates[pick[r]];
        for (std::size_t c = 0; c < n; ++c) a[r][c] = 2 * p.qz[c];
        b[r] = p.zqz;
      }
      auto center = solve_rational(std::move(a), std::move(b));
      if (!center) return;
      Integer den = 1;
      for (const auto& c : *center) den = boost::multiprecision::lcm(den, Integer(denominator(c)));
      std::vector<__int128> num(n);
      for (std::size_t i = 0; i < n; ++i)
        num[i] = static_cast<__int128>((numerator((*center)[i]) * (den / Integer(denominator((*center)[i])))).convert_to<long long>());
      const __int128 d = static_cast<__int128>(den.convert_to<long long>());
      Points on_sphere;
      for (const auto& w : window) {
        // (z-c)^T q (z-c) - c^T q c = z^T q z - 2 z^T q c, scaled by den.
        __int128 v = d * w.zqz;
        for (std::size_t i = 0; i < n; ++i) v -= 2 * static_cast<__int128>(w.qz[i]) * num[i];
        if (v < 0) return;
        if (v == 0) on_sphere.push_back(w.z);
      }
      std::sort(on_sphere.begin(), on_sphere.end());
      cells.insert(std::move(on_sphere));
      return;
    }
    for (std::size_t i = start; i < candidates.size(); ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);

  Tiling t;
  t.n = n;
  std::set<Points> canonical;
  for (Points c : cells) {
    translate_canonical(c, 1);
    std::sort(c.begin(), c.end());
    canonical.insert(std::move(c));
  }
  t.tiles.assign(canonical.begin(), canonical.end());
  t.simplicial = std::all_of(t.tiles.begin(), t.tiles.end(), [&](const Points& c) { return c.size() == n + 1; });
  return t;
}

// ---------------------------------------------------------------------------
// Barycentric subdivision

struct Face {
  Points vertices;
  std::size_t dimension = 0;
};

// Faces of a tile, as intersections with the neighbouring tiles closed under intersection.
std::vector<Face> tile_faces(const Tiling& t, std::size_t which) {
  const Points& c = t.tiles[which];
  std::set<Points> found;
  if (t.simplicial) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << c.size()); ++mask) {
      Points s;
      for (std::size_t i = 0; i < c.size(); ++i)
        if ((mask >> i) & 1U) s.push_back(c[i]);
      found.insert(s);
    }
  } else {
    for (const auto& other : t.tiles) {
      std::set<LiftedPoint> shifts;
      for (const auto& v : c)
        for (const auto& w : other) {
          LiftedPoint s(t.n);
          bool lattice = true;
          for (std::size_t i = 0; i < t.n; ++i) {
            s[i] = v[i] - w[i];
            if (s[i] % t.denominator != 0) lattice = false;
          }
          if (lattice) shifts.insert(s);
        }
      for (const auto& s : shifts) {
        Points nb = other;
        for (auto& p : nb)
          for (std::size_t i = 0; i < t.n; ++i) p[i] += s[i];
        std::sort(nb.begin(), nb.end());
        if (nb == c) continue;
        Points inter = intersect(c, nb);
        if (!inter.empty()) found.insert(inter);
      }
    }
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Points> current(found.begin(), found.end());
      for (std::size_t i = 0; i < current.size(); ++i)
        for (std::size_t j = i + 1; j < current.size(); ++j) {
          Points inter = intersect(current[i], current[j]);
          if (!inter.empty() && found.insert(inter).second) grew = true;
        }
    }
    found.insert(c);
  }
  std::vector<Face> faces;
  for (const auto& f : found) faces.push_back({f, affine_dimension(f)});
  return faces;
}

Tiling subdivide(const Tiling& t) {
  std::vector<std::vector<Face>> faces(t.tiles.size());
  long long l = 1;
  for (std::size_t k = 0; k < t.tiles.size(); ++k) {
    faces[k] = tile_faces(t, k);
    for (const auto& f : faces[k]) l = std::lcm(l, static_cast<long long>(f.vertices.size()));
  }
  Tiling out;
  out.n = t.n;
  out.denominator = t.denominator * l;
  out.simplicial = true;
  std::set<Points> tops;
  for (std::size_t k = 0; k < t.tiles.size(); ++k) {
    const auto& fs = faces[k];
    std::vector<LiftedPoint> bary(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      LiftedPoint b(t.n, 0);
      for (const auto& v : fs[i].vertices)
        for (std::size_t j = 0; j < t.n; ++j) b[j] += v[j];
      const long long scale = l / static_cast<long long>(fs[i].vertices.size());
      for (auto& x : b) x *= scale;
      bary[i] = b;
    }
    std::size_t top = 0;
    for (std::size_t i = 0; i < fs.size(); ++i)
      if (fs[i].vertices == t.tiles[k]) top = i;
    // Maximal chains of faces ending at the tile.
    std::vector<std::size_t> chain{top};
    std::function<void()> rec = [&]() {
      const Face& f = fs[chain.back()];
      if (f.dimension == 0) {
        Points s;
        for (std::size_t i : chain) s.push_back(bary[i]);
        std::sort(s.begin(), s.end());
        tops.insert(std::move(s));
        return;
      }
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].dimension + 1 != f.dimension) continue;
        if (!std::includes(f.vertices.begin(), f.vertices.end(), fs[i].vertices.begin(), fs[i].vertices.end())) continue;
        chain.push_back(i);
        rec();
        chain.pop_back();
      }
    };
    rec();
  }
  for (Points s : tops) {
    translate_canonical(s, out.denominator);
    std::sort(s.begin(), s.end());
    out.tiles.push_back(std::move(s));
  }
  std::sort(out.tiles.begin(), out.tiles.end());
  out.tiles.erase(std::unique(out.tiles.begin(), out.tiles.end()), out.tiles.end());
  return out;
}

// ---------------------------------------------------------------------------
// Assembly

class Assembler {
 public:
  Assembler(const Tiling& t, EquivariantCellComplex& x) : t_(t), x_(x) {
    std::set<LiftedPoint> verts;
    for (const auto& s : t.tiles)
      for (const auto& p : s) verts.insert(reduce(p, t.denominator));
    x_.vertices.assign(verts.begin(), verts.end());
    for (std::size_t i = 0; i < x_.vertices.size(); ++i) vertex_id_[x_.vertices[i]] = i;
  }

  std::size_t vertex_id(const LiftedPoint& p) const { return vertex_id_.at(reduce(p, t_.denominator)); }

  // Canonical translate with vertices in orientation order; order[k] is the
  // input position of the k-th output vertex.
  Points canonical(Points pts, std::vector<std::size_t>* order = nullptr) const {
    translate_canonical(pts, t_.denominator);
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::size_t> ids(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ids[i] = vertex_id(pts[i]);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (ids[a] != ids[b]) return ids[a] < ids[b];
      return pts[a] < pts[b];
    });
    Points out;
    for (std::size_t i : idx) out.push_back(pts[i]);
    if (order) *order = idx;
    return out;
  }

  void run() {
    const std::size_t n = t_.n;
    x_.dimension = n;
    x_.denominator = t_.denominator;
    x_.index.assign(n + 1, {});
    for (const auto& top : t_.tiles) {
      Points s = canonical(top);
      for (std::size_t mask = 1; mask < (std::size_t{1} << s.size()); ++mask) {
        Points sub;
        for (std::size_t i = 0; i < s.size(); ++i)
          if ((mask >> i) & 1U) sub.push_back(s[i]);
        translate_canonical(sub, t_.denominator);
        x_.index[sub.size() - 1].emplace(std::move(sub), 0);
      }
    }
    x_.cells.assign(n + 1, {});
    for (std::size_t p = 0; p <= n; ++p) {
      std::size_t k = 0;
      for (auto& [pts, idx] : x_.index[p]) {
        idx = k++;
        Cell c;
        c.vertices = pts;
        for (const auto& v : pts) c.torus_vertices.push_back(vertex_id(v));
        x_.cells[p].push_back(std::move(c));
      }
    }
    x_.boundary.assign(n + 1, {});
    x_.boundary[0].rows = 0;
    x_.boundary[0].columns.assign(x_.cells[0].size(), {});
    for (std::size_t p = 1; p <= n; ++p) {
      SparseMatrix& b = x_.boundary[p];
      b.rows = x_.cells[p - 1].size();
      for (const auto& c : x_.cells[p]) {
        std::map<std::size_t, long long> col;
        for (std::size_t i = 0; i < c.vertices.size(); ++i) {
          Points face = c.vertices;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
          translate_canonical(face, t_.denominator);
          auto it = x_.index[p - 1].find(face);
          if (it == x_.index[p - 1].end()) throw ConsistencyError("cell complex is not closed under faces");
          col[it->second] += (i % 2 == 0) ? 1 : -1;
        }
        std::vector<std::pair<std::size_t, Integer>> entries;
        for (const auto& [r, v] : col)
          if (v != 0) entries.emplace_back(r, Integer(v));
        b.columns.push_back(std::move(entries));
      }
    }
    const FiniteGroup& g = x_.lattice.group();
    x_.action.assign(g.order(), {});
    x_.stabilizers.assign(n + 1, {});
    for (std::size_t p = 0; p <= n; ++p) x_.stabilizers[p].assign(x_.cells[p].size(), Subgroup(0));
    std::vector<std::vector<ElementMask>> stab(n + 1);
    for (std::size_t p = 0; p <= n; ++p) stab[p].assign(x_.cells[p].size(), 0);
    for (std::size_t e = 0; e < g.order(); ++e) {
      Matrix64 m = to_small(x_.lattice.action(e));
      x_.action[e].assign(n + 1, {});
      for (std::size_t p = 0; p <= n; ++p) {
        auto& out = x_.action[e][p];
        out.reserve(x_.cells[p].size());
        for (std::size_t i = 0; i < x_.cells[p].size(); ++i) {
          Points img;
          for (const auto& v : x_.cells[p][i].vertices) img.push_back(act(m, v));
          std::vector<std::size_t> order;
          Points c = canonical(std::move(img), &order);
          auto it = x_.index[p].find(c);
          if (it == x_.index[p].end()) throw ConsistencyError("cell structure is not invariant under the action");
          out.push_back({it->second, permutation_sign(order)});
          if (it->second == i) stab[p][i] |= ElementMask{1} << e;
        }
      }
    }
    for (std::size_t p = 0; p <= n; ++p)
      for (std::size_t i = 0; i < x_.cells[p].size(); ++i) x_.stabilizers[p][i] = Subgroup(stab[p][i]);
  }

 private:
  const Tiling& t_;
  EquivariantCellComplex& x_;
  std::map<LiftedPoint, std::size_t> vertex_id_;
};

EquivariantCellComplex point_complex(const GLattice& lattice, Backend backend) {
  EquivariantCellComplex x;
  x.lattice = lattice;
  x.backend = backend;
  Cell point;
  point.vertices = {LiftedPoint{}};
  point.torus_vertices = {0};
  x.vertices = {LiftedPoint{}};
  x.cells.assign(1, std::vector<Cell>{point});
  x.index.assign(1, {});
  x.index[0][point.vertices] = 0;
  SparseMatrix b0;
  b0.columns.resize(1);
  x.boundary.assign(1, b0);
  std::vector<std::vector<SignedIndex>> identity(1, std::vector<SignedIndex>{SignedIndex{0, 1}});
  x.action.assign(lattice.group().order(), identity);
  x.stabilizers.assign(1, std::vector<Subgroup>{Subgroup::whole(lattice.group())});
  return x;
}

// Sum of |det| over top simplices equals denominator^n * n! iff they tile the torus once.
bool covers_torus(const EquivariantCellComplex& x) {
  const std::size_t n = x.dimension;
  Integer total = 0;
  for (const auto& c : x.cells[n]) {
    IntMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i) m(k - 1, i) = c.vertices[k][i] - c.vertices[0][i];
    total += abs(determinant(m));
  }
  Integer expected = 1;
  for (std::size_t i = 1; i <= n; ++i) expected *= Integer(x.denominator) * Integer(static_cast<long long>(i));
  return total == expected;
}

bool is_regular(const EquivariantCellComplex& x, std::string* why = nullptr);

}  // namespace

// ---------------------------------------------------------------------------

std::size_t EquivariantCellComplex::total_cells() const {
  std::size_t t = 0;
  for (const auto& c : cells) t += c.size();
  return t;
}

long long EquivariantCellComplex::euler_characteristic() const {
  long long chi = 0;
  for (std::size_t p = 0; p < cells.size(); ++p) chi += (p % 2 == 0 ? 1 : -1) * static_cast<long long>(cells[p].size());
  return chi;
}

std::optional<std::size_t> EquivariantCellComplex::find(const std::vector<LiftedPoint>& canonical) const {
  if (canonical.empty() || canonical.size() > index.size()) return std::nullopt;
  const auto& m = index[canonical.size() - 1];
  auto it = m.find(canonical);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::vector<Rational> EquivariantCellComplex::vertex_coordinates(std::size_t v) const {
  std::vector<Rational> out;
  for (long long x : vertices[v]) out.emplace_back(Integer(x), Integer(denominator));
  return out;
}

namespace {

bool is_regular(const EquivariantCellComplex& x, std::string* why) {
  const FiniteGroup& g = x.lattice.group();
  std::vector<Matrix64> mats;
  for (std::size_t e = 0; e < g.order(); ++e) mats.push_back(to_small(x.lattice.action(e)));
  for (std::size_t p = 0; p < x.cells.size(); ++p)
    for (std::size_t i = 0; i < x.cells[p].size(); ++i)
      for (std::size_t e = 0; e < g.order(); ++e) {
        if (x.action[e][p][i].index != i) continue;
        // The element fixes the cell; it must fix every lifted vertex after the
        // translation that brings the image back.
        const Matrix64& m = mats[e];
        const auto& verts = x.cells[p][i].vertices;
        Points img;
        for (const auto& v : verts) img.push_back(act(m, v));
        const LiftedPoint shift = [&] {
          LiftedPoint s(x.dimension);
          for (std::size_t k = 0; k < x.dimension; ++k) s[k] = verts[0][k] - img[0][k];
          return s;
        }();
        for (std::size_t k = 0; k < verts.size(); ++k)
          for (std::size_t c = 0; c < x.dimension; ++c)
            if (img[k][c] + shift[c] != verts[k][c]) {
              if (why) {
                std::ostringstream os;
                os << "element " << e << " stabilizes " << p << "-cell " << i << " without fixing it pointwise";
                *why = os.str();
              }
              return false;
            }
      }
  return true;
}

}  // namespace

EquivariantCellComplex build_complex(const GLattice& lattice, const BuildOptions& options) {
  const std::size_t n = lattice.rank();
  Backend backend = options.backend;
  if (backend == Backend::automatic) {
    if (lattice.is_signed_permutation() && n <= kCubicalRankCap)
      backend = Backend::cubical;
    else if (lattice.is_permutation())
      backend = Backend::freudenthal;
    else
      backend = Backend::delone;
  }
  if (options.subdivisions && (*options.subdivisions < 0 || *options.subdivisions > 2))
    throw ValidationError("subdivisions must be 0, 1 or 2");
  if (n == 0) return point_complex(lattice, backend);

  std::vector<std::string> warnings;
  switch (backend) {
    case Backend::cubical:
      if (!lattice.is_signed_permutation()) throw UnsupportedError("cubical backend needs a signed-permutation action");
      if (n > kCubicalRankCap) throw UnsupportedError("cubical backend supports rank <= 4");
      break;
    case Backend::freudenthal:
      if (!lattice.is_permutation()) throw UnsupportedError("freudenthal backend needs a permutation action");
      break;
    case Backend::delone:
      if (n > kDeloneRankCap + 1 || (n > kDeloneRankCap && !options.allow_rank4_delone))
        throw UnsupportedError("delone backend supports rank <= 3 (4 when explicitly allowed)");
      if (n > kDeloneRankCap) warnings.push_back("delone backend at rank 4 is slow");
      break;
    case Backend::automatic: break;
  }

  const int default_subdivisions = backend == Backend::freudenthal ? 0 : 1;
  const int requested = options.subdivisions.value_or(default_subdivisions);

  Matrix64 q(n, std::vector<long long>(n, 0));
  if (backend == Backend::delone) {
    IntMatrix qq(n, n);
    for (const auto& m : lattice.actions()) qq = qq + m.transpose() * m;
    q = to_small(qq);
  }

  for (long long width = 1; width <= 2; ++width) {
    Tiling raw = backend == Backend::cubical       ? cubical_tiling(n)
                 : backend == Backend::freudenthal ? freudenthal_tiling(n)
                                                   : delone_tiling(q, n, width);
    if (requested == 0 && !raw.simplicial)
      throw ValidationError("subdivisions = 0 needs a simplicial raw complex; the " + to_string(backend) +
                            " complex at rank " + std::to_string(n) + " is not");
    Tiling t = raw;
    int done = 0;
    for (; done < requested; ++done) t = subdivide(t);

    auto assemble = [&](const Tiling& tiling, int subdivisions) {
      EquivariantCellComplex x;
      x.lattice = lattice;
      x.backend = backend;
      x.subdivisions = subdivisions;
      x.warnings = warnings;
      Assembler(tiling, x).run();
      return x;
    };
    EquivariantCellComplex x = assemble(t, done);
    if (!covers_torus(x)) {
      if (backend == Backend::delone && width == 1) continue;
      throw ConsistencyError(to_string(backend) + " cells do not tile the torus");
    }
    if (!is_regular(x)) {
      if (options.subdivisions || done >= 2) throw ConsistencyError("complex is not regular after " + std::to_string(done) + " subdivisions");
      x = assemble(subdivide(t), done + 1);
    }
    ComplexCheck check = check_complex(x);
    if (!check.ok()) throw ConsistencyError("cell complex failed verification: " + check.summary());
    return x;
  }
  throw ConsistencyError("delone cells do not tile the torus");
}

bool ComplexCheck::ok() const {
  return boundary_squared.empty() && equivariance.empty() && regularity.empty() && euler_characteristic.empty() &&
         face_closure.empty();
}

std::string ComplexCheck::summary() const {
  std::string s;
  for (const auto* m : {&boundary_squared, &equivariance, &regularity, &euler_characteristic, &face_closure})
    if (!m->empty()) s += (s.empty() ? "" : "; ") + *m;
  return s.empty() ? "ok" : s;
}

namespace {

using SparseVector = std::map<std::size_t, long long>;

SparseVector column(const SparseMatrix& m, std::size_t c) {
  SparseVector v;
  for (const auto& [r, x] : m.columns[c]) v[r] += x.convert_to<long long>();
  return v;
}

void prune(SparseVector& v) {
  for (auto it = v.begin(); it != v.end();) it = it->second == 0 ? v.erase(it) : std::next(it);
}

}  // namespace

ComplexCheck check_complex(const EquivariantCellComplex& x) {
  ComplexCheck c;
  const std::size_t n = x.dimension;
  for (std::size_t p = 2; p <= n && c.boundary_squared.empty(); ++p)
    for (std::size_t i = 0; i < x.cells[p].size(); ++i) {
      SparseVector out;
      for (const auto& [r, v] : x.boundary[p].columns[i])
        for (const auto& [s, w] : x.boundary[p - 1].columns[r]) out[s] += (v * w).convert_to<long long>();
      prune(out);
      if (!out.empty()) {
        c.boundary_squared = "boundary squared is nonzero on " + std::to_string(p) + "-cell " + std::to_string(i);
        break;
      }
    }
  const FiniteGroup& g = x.lattice.group();
  for (std::size_t e = 0; e < g.order() && c.equivariance.empty(); ++e)
    for (std::size_t p = 1; p <= n && c.equivariance.empty(); ++p)
      for (std::size_t i = 0; i < x.cells[p].size(); ++i) {
        SparseVector lhs;  // g(boundary(cell))
        for (const auto& [r, v] : column(x.boundary[p], i)) {
          const SignedIndex& img = x.action[e][p - 1][r];
          lhs[img.index] += v * img.sign;
        }
        const SignedIndex& gi = x.action[e][p][i];
        SparseVector rhs;  // boundary(g(cell))
        for (const auto& [r, v] : column(x.boundary[p], gi.index)) rhs[r] += v * gi.sign;
        prune(lhs);
        prune(rhs);
        if (lhs != rhs) {
          c.equivariance = "element " + std::to_string(e) + " does not commute with the boundary of " +
                           std::to_string(p) + "-cell " + std::to_string(i);
          break;
        }
      }
  std::string why;
  if (!is_regular(x, &why)) c.regularity = why;
  if (n >= 1 && x.euler_characteristic() != 0)
    c.euler_characteristic = "Euler characteristic is " + std::to_string(x.euler_characteristic());
  for (std::size_t p = 1; p <= n && c.face_closure.empty(); ++p)
    for (const auto& cell : x.cells[p]) {
      bool closed = true;
      for (std::size_t i = 0; i < cell.vertices.size() && closed; ++i) {
        Points face = cell.vertices;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        translate_canonical(face, x.denominator);
        closed = x.find(face).has_value();
      }
      if (!closed) {
        c.face_closure = "a face of a " + std::to_string(p) + "-cell is missing";
        break;
      }
    }
  return c;
}

FixedSubcomplex fixed_subcomplex(const EquivariantCellComplex& x, const Subgroup& h) {
  if (!is_subgroup(x.lattice.group(), h.mask())) throw ValidationError("fixed_subcomplex: not a subgroup");
  FixedSubcomplex f;
  f.cells.assign(x.cells.size(), {});
  for (std::size_t p = 0; p < x.cells.size(); ++p)
    for (std::size_t i = 0; i < x.cells[p].size(); ++i)
      if (h.is_contained_in(x.stabilizers[p][i])) f.cells[p].push_back(i);

  std::vector<std::size_t> parent(x.cells[0].size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto vertex_of = [&](const LiftedPoint& p) {
    Points single{p};
    translate_canonical(single, x.denominator);
    return *x.find(single);
  };
  if (x.cells.size() > 1)
    for (std::size_t e : f.cells[1]) {
      const Cell& c = x.cells[1][e];
      std::size_t a = root(vertex_of(c.vertices[0])), b = root(vertex_of(c.vertices[1]));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::size_t, std::size_t> component_of_root;
  for (std::size_t v : f.cells[0]) {
    std::size_t r = root(v);
    auto [it, inserted] = component_of_root.emplace(r, component_of_root.size());
    f.vertex_component.push_back(it->second);
  }
  f.component_count = component_of_root.size();
  f.component_dimension.assign(f.component_count, 0);
  for (std::size_t p = 1; p < x.cells.size(); ++p)
    for (std::size_t i : f.cells[p]) {
      std::size_t comp = component_of_root.at(root(vertex_of(x.cells[p][i].vertices[0])));
      f.component_dimension[comp] = std::max(f.component_dimension[comp], p);
    }
  return f;
}

std::vector<AbGroup> underlying_homology(const EquivariantCellComplex& x) {
  CyclicChainComplex c;
  for (std::size_t p = 0; p < x.cells.size(); ++p) c.orders.push_back(IntVector(x.cells[p].size(), Integer(0)));
  c.boundary = x.boundary;
  return homology(c);
}

}  // namespace mirrork
