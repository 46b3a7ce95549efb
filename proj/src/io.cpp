#include "mirrork/io.hpp"

#include "mirrork/errors.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mirrork {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(what + ": unknown field '" + key + "'");
  }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(what + ": missing field '" + key + "'");
  return *it;
}

void check_version(const Json& j, const std::string& expected) {
  const Json& v = field(j, "version", expected);
  if (!v.is_string() || v.get<std::string>() != expected)
    throw ValidationError("unsupported schema version " + v.dump() + " (expected \"" + expected + "\")");
}

std::size_t index_from_json(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ValidationError(what + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array");
  return j;
}

std::vector<std::size_t> indices_from_json(const Json& j, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& x : array(j, what)) out.push_back(index_from_json(x, what));
  return out;
}

Json elements_to_json(const Subgroup& h) {
  Json out = Json::array();
  for (std::size_t e : h.elements()) out.push_back(e);
  return out;
}

// Converts parser exceptions from the JSON library into validation errors.
template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

std::vector<std::size_t> generating_set(const FiniteGroup& g) {
  std::vector<std::size_t> gens;
  ElementMask generators = 0;
  Subgroup current = Subgroup::trivial();
  for (std::size_t x = 1; x < g.order(); ++x) {
    if (current.contains(x)) continue;
    gens.push_back(x);
    generators |= ElementMask{1} << x;
    current = generated_subgroup(g, generators);
  }
  return gens;
}

}  // namespace

Json integer_to_json(const Integer& n) {
  if (n >= std::numeric_limits<long long>::min() && n <= std::numeric_limits<long long>::max())
    return n.convert_to<long long>();
  return to_string(n);
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() == start || !std::all_of(s.begin() + static_cast<long>(start), s.end(), ::isdigit))
      throw ValidationError("not an integer: \"" + s + "\"");
    return Integer(s);
  }
  throw ValidationError("expected an integer, got " + j.dump());
}

Json matrix_to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

IntMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  array(j, "matrix");
  if (j.size() != rows)
    throw ValidationError("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = array(j[r], "matrix row");
    if (row.size() != cols)
      throw ValidationError("matrix row has " + std::to_string(row.size()) + " entries, expected " +
                            std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = integer_from_json(row[c]);
  }
  return m;
}

Json abgroup_to_json(const AbGroup& a) {
  Json torsion = Json::array();
  for (const auto& t : a.torsion()) torsion.push_back(integer_to_json(t));
  return Json::array({a.free_rank(), torsion});
}

AbGroup abgroup_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("abelian group must be [free_rank, [torsion...]]");
  IntVector torsion;
  for (const auto& t : array(j[1], "torsion")) torsion.push_back(integer_from_json(t));
  return AbGroup(index_from_json(j[0], "free rank"), torsion);
}

Json group_to_json(const FiniteGroup& g) {
  Json table = Json::array();
  for (const auto& row : g.table()) table.push_back(row);
  return Json{{"order", g.order()}, {"table", table}};
}

FiniteGroup group_from_json(const Json& j) {
  return guarded("group", [&] {
    check_keys(j, {"order", "table", "perm_generators"}, "group");
    if (j.contains("perm_generators")) {
      if (j.contains("table") || j.contains("order"))
        throw ValidationError("group: give either a table or permutation generators");
      std::vector<std::vector<std::size_t>> gens;
      for (const auto& p : array(j["perm_generators"], "perm_generators"))
        gens.push_back(indices_from_json(p, "permutation"));
      return FiniteGroup::from_permutations(gens);
    }
    const std::size_t n = index_from_json(field(j, "order", "group"), "group order");
    if (n == 0) throw ValidationError("group: order must be positive");
    if (n > 64) throw UnsupportedError("group order " + std::to_string(n) + " exceeds 64");
    const Json& t = array(field(j, "table", "group"), "table");
    if (t.size() != n) throw ValidationError("group: table has " + std::to_string(t.size()) + " rows, order is " + std::to_string(n));
    std::vector<std::vector<std::size_t>> table;
    for (const auto& row : t) {
      table.push_back(indices_from_json(row, "table row"));
      if (table.back().size() != n) throw ValidationError("group: table row of wrong length");
    }
    return FiniteGroup(table);
  });
}

Json glattice_to_json(const GLattice& lattice) {
  Json action = Json::object();
  for (std::size_t g : generating_set(lattice.group()))
    action[std::to_string(g)] = matrix_to_json(lattice.action(g));
  return Json{{"version", "glattice/1"},
              {"group", group_to_json(lattice.group())},
              {"lattice", Json{{"rank", lattice.rank()}, {"action", action}}}};
}

GLattice glattice_from_json(const Json& j) {
  return guarded("glattice", [&] {
    check_keys(j, {"version", "group", "lattice", "name", "note"}, "glattice");
    check_version(j, "glattice/1");
    FiniteGroup g = group_from_json(field(j, "group", "glattice"));
    const Json& l = field(j, "lattice", "glattice");
    check_keys(l, {"rank", "action"}, "lattice");
    const std::size_t rank = index_from_json(field(l, "rank", "lattice"), "rank");
    const Json& a = field(l, "action", "lattice");
    if (!a.is_object()) throw ValidationError("lattice: action must map element indices to matrices");
    std::map<std::size_t, IntMatrix> images;
    for (const auto& [key, value] : a.items()) {
      if (key.empty() || !std::all_of(key.begin(), key.end(), ::isdigit))
        throw ValidationError("lattice: action key '" + key + "' is not an element index");
      images[std::stoul(key)] = matrix_from_json(value, rank, rank);
    }
    if (g.order() > 1 && images.empty())
      throw ValidationError("lattice: no action given for a nontrivial group (list the identity on generators)");
    return GLattice::from_generator_images(std::move(g), rank, images);
  });
}

Json mackey_to_json(const MackeyData& m) {
  const FiniteGroup& g = m.group();
  const CoefficientSystem& c = m.covariant();
  auto subs = all_subgroups(g);
  Json subgroups = Json::array(), transfers = Json::array(), restrictions = Json::array(),
       conjugations = Json::array();
  for (const auto& h : subs)
    subgroups.push_back(Json{{"elements", elements_to_json(h)}, {"object", abgroup_to_json(c.object(h))}});
  for (const auto& k : subs)
    for (const auto& h : subs) {
      if (k == h || !k.is_contained_in(h)) continue;
      transfers.push_back(
          Json{{"from", elements_to_json(k)}, {"to", elements_to_json(h)}, {"matrix", matrix_to_json(c.transfer(k, h))}});
      restrictions.push_back(Json{
          {"from", elements_to_json(h)}, {"to", elements_to_json(k)}, {"matrix", matrix_to_json(m.restriction(k, h))}});
    }
  for (const auto& h : subs)
    for (std::size_t e = 1; e < g.order(); ++e)
      conjugations.push_back(
          Json{{"element", e}, {"subgroup", elements_to_json(h)}, {"matrix", matrix_to_json(c.conjugation(h, e))}});
  return Json{{"version", "mackey/1"},       {"group", group_to_json(g)},
              {"subgroups", subgroups},      {"transfers", transfers},
              {"restrictions", restrictions}, {"conjugations", conjugations}};
}

MackeyData mackey_from_json(const Json& j, std::vector<std::string>* warnings) {
  return guarded("mackey", [&] {
    check_keys(j, {"version", "group", "subgroups", "transfers", "restrictions", "conjugations", "name", "note"},
               "mackey");
    check_version(j, "mackey/1");
    MackeyData m(group_from_json(field(j, "group", "mackey")));
    const FiniteGroup& g = m.group();
    auto subgroup = [&](const Json& elems) { return make_subgroup(g, indices_from_json(elems, "subgroup")); };
    for (const auto& s : array(field(j, "subgroups", "mackey"), "subgroups")) {
      check_keys(s, {"elements", "object"}, "subgroup entry");
      Subgroup h = subgroup(field(s, "elements", "subgroup entry"));
      if (m.covariant().has_object(h)) throw ValidationError("mackey: subgroup " + h.to_string() + " listed twice");
      m.covariant().set_object(h, abgroup_from_json(field(s, "object", "subgroup entry")));
    }
    for (const auto& h : all_subgroups(g))
      if (!m.covariant().has_object(h)) throw ValidationError("mackey: no object for subgroup " + h.to_string());
    auto gens = [&](const Subgroup& h) { return m.covariant().object(h).generator_count(); };
    auto map_entry = [&](const Json& e, const std::string& what) {
      check_keys(e, {"from", "to", "matrix"}, what);
      Subgroup from = subgroup(field(e, "from", what)), to = subgroup(field(e, "to", what));
      return std::tuple{from, to, matrix_from_json(field(e, "matrix", what), gens(to), gens(from))};
    };
    if (j.contains("transfers"))
      for (const auto& e : array(j["transfers"], "transfers")) {
        auto [k, h, mat] = map_entry(e, "transfer");
        if (!k.is_contained_in(h)) throw ValidationError("mackey: transfer must go to a larger subgroup");
        m.covariant().set_transfer(k, h, mat);
      }
    if (j.contains("restrictions"))
      for (const auto& e : array(j["restrictions"], "restrictions")) {
        auto [h, k, mat] = map_entry(e, "restriction");
        if (!k.is_contained_in(h)) throw ValidationError("mackey: restriction must go to a smaller subgroup");
        m.set_restriction(k, h, mat);
      }
    if (j.contains("conjugations"))
      for (const auto& e : array(j["conjugations"], "conjugations")) {
        check_keys(e, {"element", "subgroup", "matrix"}, "conjugation");
        std::size_t x = index_from_json(field(e, "element", "conjugation"), "element");
        if (x >= g.order()) throw ValidationError("mackey: conjugating element out of range");
        Subgroup h = subgroup(field(e, "subgroup", "conjugation"));
        m.covariant().set_conjugation(h, x,
                                      matrix_from_json(field(e, "matrix", "conjugation"), gens(conjugate(g, x, h)), gens(h)));
      }
    auto w = m.validate();
    if (warnings) warnings->insert(warnings->end(), w.begin(), w.end());
    return m;
  });
}

Json complex_to_json(const EquivariantCellComplex& x) {
  Json vertices = Json::array();
  for (const auto& v : x.vertices) vertices.push_back(v);
  Json cells = Json::array();
  for (std::size_t p = 0; p < x.cells.size(); ++p) {
    Json degree = Json::array();
    for (std::size_t i = 0; i < x.cells[p].size(); ++i) {
      const Cell& c = x.cells[p][i];
      Json boundary = Json::array();
      if (p > 0)
        for (const auto& [row, coeff] : x.boundary[p].columns[i]) boundary.push_back(Json::array({row, integer_to_json(coeff)}));
      Json lifted = Json::array();
      for (const auto& v : c.vertices) lifted.push_back(v);
      degree.push_back(Json{{"vertices", lifted},
                            {"torus_vertices", c.torus_vertices},
                            {"boundary", boundary},
                            {"stabilizer", elements_to_json(x.stabilizers[p][i])}});
    }
    cells.push_back(std::move(degree));
  }
  Json action = Json::array();
  for (const auto& per_element : x.action) {
    Json g = Json::array();
    for (const auto& per_degree : per_element) {
      Json d = Json::array();
      for (const auto& s : per_degree) d.push_back(Json::array({s.index, s.sign}));
      g.push_back(std::move(d));
    }
    action.push_back(std::move(g));
  }
  return Json{{"version", "eqcw/1"},
              {"dimension", x.dimension},
              {"backend", to_string(x.backend)},
              {"subdivisions", x.subdivisions},
              {"denominator", x.denominator},
              {"lattice", glattice_to_json(x.lattice)},
              {"vertices", vertices},
              {"cells", cells},
              {"action", action}};
}

Json homology_to_json(const std::vector<AbGroup>& h) {
  Json out = Json::array();
  for (const auto& a : h) out.push_back(abgroup_to_json(a));
  return Json{{"H", out}};
}

Json presentation_to_json(const Presentation& p) {
  return Json{{"generators", p.generator_names},
              {"relations", matrix_to_json(p.relations)},
              {"group", abgroup_to_json(p.group)}};
}

Json e2_to_json(const E2Page& page) {
  Json rows = Json::array();
  for (const auto& row : page.rows) {
    Json r = Json::array();
    for (const auto& a : row) r.push_back(abgroup_to_json(a));
    rows.push_back(std::move(r));
  }
  Json graded = Json::array();
  for (const auto& d : page.collapse.graded) {
    Json pieces = Json::array();
    for (const auto& a : d.pieces) pieces.push_back(abgroup_to_json(a));
    graded.push_back(Json{{"n", d.n}, {"pieces", pieces}, {"extension_ambiguous", d.extension_ambiguous}});
  }
  return Json{{"version", "e2/1"},
              {"rank", page.rank},
              {"qmax", page.q_max},
              {"rows", rows},
              {"collapse",
               Json{{"certified", page.collapse.certified}, {"reason", page.collapse.reason}, {"graded", graded}}}};
}

Json swan_to_json(const std::vector<SwanDegree>& s) {
  Json degrees = Json::array();
  for (std::size_t n = 0; n < s.size(); ++n)
    degrees.push_back(Json{{"n", n},
                           {"kf", abgroup_to_json(s[n].kf)},
                           {"coker", abgroup_to_json(s[n].coker)},
                           {"ker", abgroup_to_json(s[n].ker)},
                           {"extension_ambiguous", s[n].extension_ambiguous}});
  return Json{{"version", "swan/1"}, {"degrees", degrees}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

GLattice load_lattice(const std::string& source) {
  const std::string prefix = "catalog:";
  if (source.rfind(prefix, 0) == 0) return catalog_get(source.substr(prefix.size())).lattice;
  return glattice_from_json(read_json_file(source));
}

std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += row[c] + std::string(width[c] - row[c].size(), ' ');
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out << line << '\n';
  }
  return out.str();
}

std::string format_homology(const std::vector<AbGroup>& h) {
  std::vector<std::vector<std::string>> rows{{"p", "H_p"}};
  for (std::size_t p = 0; p < h.size(); ++p) rows.push_back({std::to_string(p), h[p].to_string()});
  return format_table(rows);
}

std::string format_e2(const E2Page& page) {
  std::vector<std::vector<std::string>> rows{{"q\\p"}};
  for (std::size_t p = 0; p <= page.rank; ++p) rows[0].push_back(std::to_string(p));
  for (int q = page.q_max; q >= 0; --q) {
    std::vector<std::string> row{std::to_string(q)};
    for (std::size_t p = 0; p <= page.rank; ++p) row.push_back(page.at(static_cast<long long>(p), q).to_string());
    rows.push_back(std::move(row));
  }
  return format_table(rows);
}

}  // namespace mirrork
