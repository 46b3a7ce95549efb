#include "mirrork/cli.hpp"

#include "mirrork/errors.hpp"
#include "mirrork/groupcoh.hpp"
#include "mirrork/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

namespace mirrork {

namespace {

struct RunConfig {
  std::string format = "table";
  int verbosity = 0;
  std::string source;
  std::string backend = "auto";
  int subdivisions = -1;
  bool allow_rank4_delone = false;
  std::string coeff = "constZ";
  std::string preset;
  int q_max = 3;
  int n_max = 6;
  std::string name;
};

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string join(const std::vector<AbGroup>& groups, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i) out += (i ? sep : "") + groups[i].to_string();
  return out;
}

std::string elements_string(const Subgroup& h) { return h.to_string(); }

class Runner {
 public:
  Runner(const RunConfig& c, std::ostream& out, std::ostream& err) : c_(c), out_(out), err_(err) {}

  void info(const std::string& message) const {
    if (c_.verbosity > 0) err_ << "info: " << message << '\n';
  }
  void warn(const std::string& message) const {
    if (c_.verbosity > 0) err_ << "warning: " << one_line(message) << '\n';
  }
  bool json() const { return c_.format == "json"; }
  void emit(const Json& j) const { out_ << j.dump(2) << '\n'; }

  BuildOptions build_options() const {
    BuildOptions o;
    o.backend = parse_backend(c_.backend);
    if (c_.subdivisions >= 0) o.subdivisions = c_.subdivisions;
    o.allow_rank4_delone = c_.allow_rank4_delone;
    return o;
  }

  EquivariantCellComplex complex(const GLattice& l) const {
    auto start = std::chrono::steady_clock::now();
    auto x = build_complex(l, build_options());
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    info("complex: backend " + to_string(x.backend) + ", " + std::to_string(x.total_cells()) + " cells in " +
         std::to_string(dt.count()) + " s");
    for (const auto& w : x.warnings) warn(w);
    return x;
  }

  int lattice_info() const {
    GLattice l = load_lattice(c_.source);
    const FiniteGroup& g = l.group();
    auto classes = enumerate_subgroups(g);
    auto weil = weil_resolution(l);
    Json subs = Json::array();
    std::vector<std::vector<std::string>> rows{{"subgroup", "order", "conjugates", "H1", "fixed rank"}};
    for (const auto& cls : classes) {
      auto fp = pi0_fixed_points(l, cls.representative);
      subs.push_back(Json{{"representative", cls.representative.elements()},
                          {"conjugates", cls.conjugates.size()},
                          {"h1", abgroup_to_json(fp.components)},
                          {"fixed_rank", fp.identity_component_rank}});
      rows.push_back({elements_string(cls.representative), std::to_string(cls.representative.order()),
                      std::to_string(cls.conjugates.size()), fp.components.to_string(),
                      std::to_string(fp.identity_component_rank)});
    }
    if (json()) {
      emit(Json{{"version", "lattice-info/1"},
                {"group_order", g.order()},
                {"rank", l.rank()},
                {"kernel", l.kernel().elements()},
                {"signed_permutation", l.is_signed_permutation()},
                {"permutation", l.is_permutation()},
                {"subgroup_classes", subs},
                {"weil_resolution", Json{{"induced_rank", weil.big.rank()}, {"quotient_rank", weil.quotient.rank()}}}});
      return kExitOk;
    }
    std::string action = l.is_permutation() ? "permutation" : l.is_signed_permutation() ? "signed permutation" : "general";
    out_ << format_table({{"group order", std::to_string(g.order())},
                          {"rank", std::to_string(l.rank())},
                          {"kernel", elements_string(l.kernel())},
                          {"action", action},
                          {"weil resolution", std::to_string(l.rank()) + " -> " + std::to_string(weil.big.rank()) +
                                                  " -> " + std::to_string(weil.quotient.rank())}})
         << '\n'
         << format_table(rows);
    return kExitOk;
  }

  int cells_build() const {
    auto x = complex(load_lattice(c_.source));
    ComplexCheck check = check_complex(x);
    if (!check.ok()) throw ConsistencyError("structural check failed: " + check.summary());
    if (json()) {
      emit(complex_to_json(x));
      return kExitOk;
    }
    std::vector<std::vector<std::string>> rows{{"backend", to_string(x.backend)},
                                               {"subdivisions", std::to_string(x.subdivisions)},
                                               {"denominator", std::to_string(x.denominator)}};
    for (std::size_t p = 0; p < x.cells.size(); ++p)
      rows.push_back({"cells in degree " + std::to_string(p), std::to_string(x.cell_count(p))});
    rows.push_back({"euler characteristic", std::to_string(x.euler_characteristic())});
    rows.push_back({"checks", "ok"});
    out_ << format_table(rows);
    return kExitOk;
  }

  CoefficientSystem coefficients(GLattice& l) const {
    if (c_.coeff == "constZ") return constant_Z(l.group());
    const std::string prefix = "mackey:";
    if (c_.coeff.rfind(prefix, 0) != 0) throw ValidationError("--coeff must be constZ or mackey:<file>");
    std::vector<std::string> warnings;
    MackeyData m = mackey_from_json(read_json_file(c_.coeff.substr(prefix.size())), &warnings);
    for (const auto& w : warnings) warn(w);
    if (l.group().order() == 1 && m.group().order() > 1) l = l.inflate_trivial(m.group());
    if (!(l.group() == m.group())) throw ValidationError("coefficient group differs from the lattice group");
    return m.covariant();
  }

  int bredon() const {
    GLattice l = load_lattice(c_.source);
    CoefficientSystem coeff = coefficients(l);
    auto h = bredon_homology(complex(l), coeff);
    if (json())
      emit(homology_to_json(h));
    else
      out_ << format_homology(h);
    return kExitOk;
  }

  int kzero() const {
    GLattice l = load_lattice(c_.source);
    auto x = complex(l);
    AbGroup chain = bredon_homology(x, constant_Z(l.group()))[0];
    Presentation coend = coend_h0(x), mp = mp_k0(l);
    const bool agree = chain == coend.group && chain == mp.group;
    if (json()) {
      emit(Json{{"version", "kzero/1"},
                {"chain_h0", abgroup_to_json(chain)},
                {"coend", presentation_to_json(coend)},
                {"mp", presentation_to_json(mp)},
                {"verdict", agree ? "AGREE" : "DISAGREE"}});
    } else {
      out_ << format_table({{"chain H0", chain.to_string()},
                            {"coend", coend.group.to_string() + "  (" + std::to_string(coend.generator_names.size()) +
                                          " generators, " + std::to_string(coend.relations.rows()) + " relations)"},
                            {"MP", mp.group.to_string() + "  (" + std::to_string(mp.generator_names.size()) +
                                       " generators, " + std::to_string(mp.relations.rows()) + " relations)"},
                            {"verdict", agree ? "AGREE" : "DISAGREE"}});
    }
    if (!agree) throw ConsistencyError("K0 computations disagree");
    return kExitOk;
  }

  std::pair<long long, std::size_t> finite_field_preset(bool with_degree) const {
    const std::string prefix = "ff:";
    auto bad = [&] {
      return ValidationError("--preset must be " + std::string(with_degree ? "ff:q,d" : "ff:q") + ", got '" +
                             c_.preset + "'");
    };
    if (c_.preset.rfind(prefix, 0) != 0) throw bad();
    std::string body = c_.preset.substr(prefix.size());
    std::size_t comma = body.find(',');
    if (with_degree == (comma == std::string::npos)) throw bad();
    try {
      std::size_t used = 0;
      long long q = std::stoll(body, &used);
      if (used != (with_degree ? comma : body.size())) throw bad();
      long long d = 1;
      if (with_degree) {
        d = std::stoll(body.substr(comma + 1), &used);
        if (comma + 1 + used != body.size() || d < 1) throw bad();
      }
      return {q, static_cast<std::size_t>(d)};
    } catch (const std::logic_error&) {
      throw bad();
    }
  }

  int e2() const {
    auto [q, d] = finite_field_preset(true);
    if (c_.q_max < 0) throw ValidationError("--qmax must be nonnegative");
    GLattice l = align_to_cyclic(load_lattice(c_.source), d);
    auto x = complex(l);
    E2Page page = e2_page(x, finite_field_rows(q, d, c_.q_max, l.group()), c_.q_max);
    if (json()) {
      emit(e2_to_json(page));
      return kExitOk;
    }
    out_ << format_e2(page) << '\n'
         << "collapse: " << (page.collapse.certified ? "certified" : "not certified") << " (" << page.collapse.reason
         << ")\n";
    if (page.collapse.certified) {
      std::vector<std::vector<std::string>> rows{{"n", "graded pieces E_{p,n-p}", "extension"}};
      for (const auto& deg : page.collapse.graded)
        rows.push_back({std::to_string(deg.n), join(deg.pieces, " | "),
                        deg.extension_ambiguous ? "undetermined" : "determined"});
      out_ << format_table(rows);
    }
    return kExitOk;
  }

  int swan() const {
    auto [q, d] = finite_field_preset(false);
    (void)d;
    if (c_.n_max < 0) throw ValidationError("--nmax must be nonnegative");
    auto s = swan_finite_field(q, c_.n_max);
    if (json()) {
      emit(swan_to_json(s));
      return kExitOk;
    }
    std::vector<std::vector<std::string>> rows{{"n", "K_n(F_q)", "coker", "ker", "extension"}};
    for (std::size_t n = 0; n < s.size(); ++n)
      rows.push_back({std::to_string(n), s[n].kf.to_string(), s[n].coker.to_string(), s[n].ker.to_string(),
                      s[n].extension_ambiguous ? "undetermined" : "determined"});
    out_ << format_table(rows);
    return kExitOk;
  }

  int catalog_list() const {
    auto entries = catalog_all();
    if (json()) {
      Json list = Json::array();
      for (const auto& e : entries)
        list.push_back(Json{{"name", e.name},
                            {"group_order", e.lattice.group().order()},
                            {"rank", e.lattice.rank()},
                            {"note", e.note}});
      emit(Json{{"version", "catalog/1"}, {"entries", list}});
      return kExitOk;
    }
    std::vector<std::vector<std::string>> rows{{"name", "|G|", "rank", "description"}};
    for (const auto& e : entries)
      rows.push_back({e.name, std::to_string(e.lattice.group().order()), std::to_string(e.lattice.rank()), e.note});
    out_ << format_table(rows);
    return kExitOk;
  }

  int catalog_export() const {
    CatalogEntry e = catalog_get(c_.name);
    Json j = glattice_to_json(e.lattice);
    j["name"] = e.name;
    j["note"] = e.note;
    emit(j);
    return kExitOk;
  }

 private:
  const RunConfig& c_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Equivariant cell complexes, Bredon homology and K-theory of algebraic tori", "mirrork"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_flag("-v,--verbose", config.verbosity, "Report progress and warnings on stderr");

  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("source", config.source, "glattice/1 file or catalog:<name>")->required();
  };
  auto add_build = [&](CLI::App* cmd) {
    cmd->add_option("--backend", config.backend, "Cell backend")
        ->check(CLI::IsMember({"auto", "cubical", "delone", "freudenthal"}));
    cmd->add_option("--subdivisions", config.subdivisions, "Barycentric subdivisions")->check(CLI::Range(0, 4));
    cmd->add_flag("--allow-rank4-delone", config.allow_rank4_delone, "Permit the delone backend at rank 4");
  };

  std::function<int(const Runner&)> action;
  auto bind = [&](CLI::App* cmd, int (Runner::*method)() const) {
    cmd->callback([&action, method] { action = [method](const Runner& r) { return (r.*method)(); }; });
  };

  auto* lattice = app.add_subcommand("lattice", "Lattice inspection");
  lattice->require_subcommand(1);
  auto* info = lattice->add_subcommand("info", "Group, subgroup classes, H1 and fixed ranks");
  add_source(info);
  bind(info, &Runner::lattice_info);

  auto* cells = app.add_subcommand("cells", "Equivariant cell complexes");
  cells->require_subcommand(1);
  auto* build = cells->add_subcommand("build", "Build and check a complex (json: eqcw/1)");
  add_source(build);
  add_build(build);
  bind(build, &Runner::cells_build);

  auto* bredon = app.add_subcommand("bredon", "Bredon homology");
  add_source(bredon);
  add_build(bredon);
  bredon->add_option("--coeff", config.coeff, "constZ or mackey:<file>");
  bind(bredon, &Runner::bredon);

  auto* kzero = app.add_subcommand("kzero", "K0 by chain H0, coend and Merkurjev-Panin presentations");
  add_source(kzero);
  add_build(kzero);
  bind(kzero, &Runner::kzero);

  auto* e2 = app.add_subcommand("e2", "E2 page with finite-field coefficients");
  add_source(e2);
  add_build(e2);
  e2->add_option("--preset", config.preset, "ff:q,d")->required();
  e2->add_option("--qmax", config.q_max, "Largest row");
  bind(e2, &Runner::e2);

  auto* swan = app.add_subcommand("swan", "Rank-1 computation for the sign lattice over F_q");
  swan->add_option("--preset", config.preset, "ff:q")->required();
  swan->add_option("--nmax", config.n_max, "Largest degree");
  bind(swan, &Runner::swan);

  auto* catalog = app.add_subcommand("catalog", "Built-in lattices");
  catalog->require_subcommand(1);
  bind(catalog->add_subcommand("list", "List entries"), &Runner::catalog_list);
  auto* exp = catalog->add_subcommand("export", "Print an entry as glattice/1");
  exp->add_option("name", config.name, "Entry name")->required();
  bind(exp, &Runner::catalog_export);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitInvalid;
  }

  Runner runner(config, out, err);
  try {
    return action(runner);
  } catch (const ValidationError& e) {
    err << "error: invalid: " << one_line(e.what()) << '\n';
    return kExitInvalid;
  } catch (const UnsupportedError& e) {
    err << "error: unsupported: " << one_line(e.what()) << '\n';
    return kExitUnsupported;
  } catch (const ConsistencyError& e) {
    err << "error: mismatch: " << one_line(e.what()) << '\n';
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << '\n';
    return kExitMismatch;
  }
}

}  // namespace mirrork
