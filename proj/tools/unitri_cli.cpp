// unitri: orbit catalogs, character tables, single values, class queries
// and verification suites for UT(n, F_q).
//
// Exit codes: 0 pass, 1 verification failure, 2 invalid input,
// 3 budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "unitri/unitri.hpp"

using namespace unitri;

namespace {

enum Exit { kPass = 0, kFail = 1, kInvalid = 2, kBudget = 3 };

struct Globals {
  int n = 0;
  int p = 5;
  int r = 1;
  std::uint64_t seed = 1;
  std::uint64_t budget = std::uint64_t{1} << 25;
  unsigned threads = 1;
  bool long_run = false;
  std::string out;
  std::string format = "json";
};

void add_globals(CLI::App* cmd, Globals& g) {
  cmd->add_option("--n", g.n, "matrix degree");
  cmd->add_option("--p", g.p, "field characteristic (prime, p >= n)");
  cmd->add_option("--r", g.r, "field degree, q = p^r");
  cmd->add_option("--seed", g.seed, "random seed");
  cmd->add_option("--budget", g.budget, "element cap for packed spaces and BFS");
  cmd->add_option("--threads", g.threads, "worker threads");
  cmd->add_flag("--long", g.long_run, "allow long-running full scans");
  cmd->add_option("--out", g.out, "output file (default stdout)");
  cmd->add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + g.out);
  f << text;
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void check_config(const Globals& g) {
  detail::require(g.n >= 1, "--n must be given and positive");
  detail::require(g.budget > 0, "--budget must be positive");
  detail::require(g.threads >= 1, "--threads must be positive");
}

FieldPtr config_field(const Globals& g) {
  check_config(g);
  return field_make(g.p, g.r, g.n);
}

// ---- verbs ----

int cmd_orbits(const Globals& g, bool materialize) {
  const FieldPtr F = config_field(g);
  const OrbitCatalog cat = enumerate_all_orbits(F, g.n, g.budget, materialize);
  if (g.format == "csv") {
    std::ostringstream os;
    os << "orbit,size,dim,kind,invariants,canonical_form\n";
    for (std::size_t k = 0; k < cat.orbits.size(); ++k) {
      const auto& o = cat.orbits[k];
      os << k << "," << o.size << "," << o.dim << "," << to_string(o.kind()) << ",";
      for (std::size_t t = 0; t < o.invariants.size(); ++t) os << (t ? ";" : "") << o.invariants[t].v;
      os << "," << (o.canonical_form ? "\"" + to_json(*o.canonical_form).dump() + "\"" : "") << "\n";
    }
    emit(g, os.str());
    return kPass;
  }
  json j = to_json(cat);
  if (materialize)
    for (std::size_t k = 0; k < cat.orbits.size(); ++k) j[k]["elements"] = cat.orbits[k].elements;
  emit(g, j.dump(2) + "\n");
  return kPass;
}

int cmd_chartable(const Globals& g) {
  const FieldPtr F = config_field(g);
  const PackedLayout L(F, g.n);
  if (L.packable() && L.space_size() > detail::kShortSpace && !g.long_run)
    throw BudgetExceeded("chartable: n = " + std::to_string(g.n) + " needs --long");
  const CharacterTable T = character_table(F, g.n, g.budget, g.threads);
  emit(g, g.format == "csv" ? to_csv(T) : to_json(T).dump(2) + "\n");
  return kPass;
}

int cmd_charvalue(Globals g, const std::string& form_path, const std::string& elem_path) {
  const json fj = read_json(form_path), ej = read_json(elem_path);
  const int n = detail::guarded("form json", [&] { return fj.at("n").get<int>(); });
  if (g.n == 0) g.n = n;
  detail::require(g.n == n, "form degree differs from --n");
  const FieldPtr F = config_field(g);
  const LinearForm f = form_from_json(F, fj);
  const UnipotentMatrix x = unipotent_from_json(F, ej);
  detail::require(x.n() == n, "element degree differs from the form degree");

  json routes = json::object();
  std::optional<CycloValue> first;
  bool agree = true;
  auto route = [&](const std::string& name, auto&& fn) {
    try {
      const CycloValue v = fn();
      routes[name] = to_json(v);
      if (!first) first = v;
      else agree = agree && *first == v;
    } catch (const Unsupported& e) {
      routes[name] = {{"unavailable", e.what()}};
    } catch (const InvalidArgument& e) {
      routes[name] = {{"unavailable", e.what()}};
    } catch (const BudgetExceeded& e) {
      routes[name] = {{"unavailable", e.what()}};
    }
  };
  route("kirillov", [&] { return kirillov_value(orbit_of(f, g.budget, true), x); });
  route("regular", [&] { return regular_value(f, x); });
  route("subregular", [&] { return subregular_value(f, x); });
  route("mackey", [&] {
    if (n > 6) throw Unsupported("induced-character route limited to n <= 6");
    return mackey_value(f, x);
  });
  const json rep = {{"form", to_json(f)}, {"element", to_json(x)}, {"routes", routes}, {"agree", agree}};
  emit(g, rep.dump(2) + "\n");
  return agree ? kPass : kFail;
}

int cmd_classof(Globals g, const std::string& elem_path, const std::string& subset_path) {
  const json ej = read_json(elem_path);
  const int n = detail::guarded("element json", [&] { return ej.at("n").get<int>(); });
  if (g.n == 0) g.n = n;
  detail::require(g.n == n, "element degree differs from --n");
  const FieldPtr F = config_field(g);
  const UnipotentMatrix x = unipotent_from_json(F, ej);
  json rep = {{"element", to_json(x)}};
  if (!subset_path.empty()) {
    const DecoratedSubset D = subset_from_json(F, read_json(subset_path));
    detail::require(D.n == n, "subset degree differs from the element degree");
    const ClassDescriptor C = make_class(F, D);
    rep["class"] = to_json(*F, C);
    rep["member"] = class_membership(x, C);
  } else {
    // Candidates: regular classes, then d-subregular classes.
    json found = json::array();
    for (const auto& e : RegularSupport(F, n).entries())
      if (class_membership(x, e.C)) found.push_back(to_json(*F, e.C));
    for (int d = 1; d <= max_subregular_d(n) && found.empty(); ++d)
      for (const auto& e : SubregularSupport(F, n, d).entries())
        if (class_membership(x, e.C)) found.push_back(to_json(*F, e.C));
    rep["classes"] = found;
  }
  const PackedLayout L(F, n);
  if (L.packable()) {
    try {
      rep["bfs_size"] = class_bfs(x, g.budget).size();
    } catch (const BudgetExceeded&) {
      rep["bfs_size"] = nullptr;
    }
  }
  emit(g, rep.dump(2) + "\n");
  return kPass;
}

int cmd_verify(const Globals& g, const std::string& suite, std::optional<std::uint64_t> trials) {
  check_config(g);
  VerifyConfig c{g.n, g.p, g.r, g.seed, g.budget, g.threads, g.long_run, trials};
  const SuiteReport r = run_suite(suite, c);
  emit(g, r.to_json().dump(2) + "\n");
  return r.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unitri: characters of UT(n, F_q) by the orbit method"};
  app.require_subcommand(1);
  Globals g;

  auto* orbits = app.add_subcommand("orbits", "orbit catalog of the dual algebra");
  bool materialize = false;
  orbits->add_flag("--materialize", materialize, "include packed orbit elements");
  auto* chartable = app.add_subcommand("chartable", "full character table by Kirillov sums");
  auto* charvalue = app.add_subcommand("charvalue", "one character value by every available route");
  std::string form_path, elem_path, subset_path;
  charvalue->add_option("--form", form_path, "form JSON")->required();
  charvalue->add_option("--element", elem_path, "group element JSON")->required();
  auto* classof = app.add_subcommand("classof", "class descriptor containing an element");
  classof->add_option("--element", elem_path, "group element JSON")->required();
  classof->add_option("--subset", subset_path, "decorated subset JSON to test membership against");
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  std::string suite;
  std::optional<std::uint64_t> trials;
  verify->add_option("--suite", suite, "suite name")->required();
  verify->add_option("--trials", trials, "override the suite's sample count");
  for (auto* c : {orbits, chartable, charvalue, classof, verify}) add_globals(c, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*orbits) return cmd_orbits(g, materialize);
    if (*chartable) return cmd_chartable(g);
    if (*charvalue) return cmd_charvalue(g, form_path, elem_path);
    if (*classof) return cmd_classof(g, elem_path, subset_path);
    if (*verify) return cmd_verify(g, suite, trials);
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInvalid;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::bad_alloc&) {
    std::cerr << "budget exceeded: out of memory\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kFail;
  }
  return kInvalid;
}
