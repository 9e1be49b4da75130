#pragma once

// Named verification suites. Each returns a report
//   {suite, n, p, r, seed, checks: [{name, status, details}]}
// and passes iff every check passes. Randomness comes from a seeded
// mt19937_64 only, so reports are reproducible.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "unitri/characters.hpp"
#include "unitri/classes.hpp"
#include "unitri/error.hpp"
#include "unitri/orbits.hpp"
#include "unitri/roots.hpp"
#include "unitri/serialize.hpp"

namespace unitri {

struct VerifyConfig {
  int n = 4;
  int p = 5;
  int r = 1;
  std::uint64_t seed = 1;
  std::uint64_t budget = std::uint64_t{1} << 25;  // elements per packed space
  unsigned threads = 1;
  bool long_run = false;
  std::optional<std::uint64_t> trials;  // suite default when absent
};

struct CheckResult {
  std::string name;
  bool pass = false;
  json details;
};

struct SuiteReport {
  std::string suite;
  VerifyConfig cfg;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }

  json to_json() const {
    json cs = json::array();
    for (const auto& c : checks)
      cs.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"details", c.details}});
    return {{"suite", suite}, {"n", cfg.n}, {"p", cfg.p}, {"r", cfg.r}, {"seed", cfg.seed},
            {"pass", passed()}, {"checks", cs}};
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"field-axioms",  "orbit-partition", "regular-theorem",
                                              "subregular-theorem", "class-equations", "invariance",
                                              "orthogonality", "degrees",         "charmat-bridge"};
  return names;
}

namespace detail {

class Reporter {
 public:
  explicit Reporter(SuiteReport& r) : r_(r) {}
  void add(std::string name, bool pass, json details = json::object()) {
    r_.checks.push_back({std::move(name), pass, std::move(details)});
  }

 private:
  SuiteReport& r_;
};

inline std::uint64_t ipow(std::uint64_t q, int e) {
  std::uint64_t s = 1;
  for (int k = 0; k < e; ++k) s *= q;
  return s;
}

// Full scans of q^{n(n-1)/2} elements beyond this size need --long.
constexpr std::uint64_t kShortSpace = std::uint64_t{1} << 20;

inline void require_long(const VerifyConfig& c, const FieldPtr& F, const char* suite) {
  const PackedLayout L(F, c.n);
  if (!L.packable() || L.space_size() > c.budget)
    throw BudgetExceeded(std::string(suite) + ": group of order q^" + std::to_string(num_roots(c.n)) +
                         " exceeds the element budget");
  if (L.space_size() > kShortSpace && !c.long_run)
    throw BudgetExceeded(std::string(suite) + ": n = " + std::to_string(c.n) + " needs --long");
}

inline std::string root_str(Root r) { return "(" + std::to_string(r.i) + "," + std::to_string(r.j) + ")"; }

inline std::string set_str(const RootSet& S) {
  std::string s = "{";
  for (auto r : S) s += root_str(r);
  return s + "}";
}

// ---- field-axioms ----

inline void suite_field(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr Fp = field_make(c.p, c.r, c.n);
  const Field& F = *Fp;
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::uint32_t> U(0, F.q() - 1);
  const std::uint64_t trials = c.trials.value_or(10000);
  std::uint64_t bad_ring = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Elem a{U(rng)}, b{U(rng)}, z{U(rng)};
    bool ok = F.add(a, b) == F.add(b, a) && F.mul(a, b) == F.mul(b, a);
    ok = ok && F.add(F.add(a, b), z) == F.add(a, F.add(b, z));
    ok = ok && F.mul(F.mul(a, b), z) == F.mul(a, F.mul(b, z));
    ok = ok && F.mul(a, F.add(b, z)) == F.add(F.mul(a, b), F.mul(a, z));
    ok = ok && F.add(a, F.zero()) == a && F.mul(a, F.one()) == a && F.add(a, F.neg(a)).is_zero();
    if (!ok) ++bad_ring;
  }
  rep.add("ring axioms on random triples", bad_ring == 0, {{"trials", trials}, {"failures", bad_ring}});

  std::uint64_t bad_inv = 0;
  for (std::uint32_t v = 1; v < F.q(); ++v)
    if (F.mul(Elem{v}, F.inv(Elem{v})) != F.one()) ++bad_inv;
  rep.add("every nonzero element is invertible", bad_inv == 0, {{"failures", bad_inv}});

  // Multiplicative group is cyclic of order q - 1: some element has that order.
  bool cyclic = false;
  for (std::uint32_t v = 1; v < F.q() && !cyclic; ++v) {
    Elem x{v};
    std::uint32_t ord = 1;
    for (Elem y = x; y != F.one(); y = F.mul(y, x)) ++ord;
    cyclic = ord == F.q() - 1;
  }
  rep.add("multiplicative group has a generator", cyclic);

  // Trace against sum_k a^{p^k}, which must land in F_p.
  std::uint64_t bad_tr = 0;
  std::vector<std::int64_t> hist(F.p(), 0);
  for (std::uint32_t v = 0; v < F.q(); ++v) {
    Elem s = F.zero(), a{v};
    for (int k = 0; k < F.r(); ++k, a = F.frobenius(a)) s = F.add(s, a);
    if (s.v >= static_cast<std::uint32_t>(F.p()) || static_cast<int>(s.v) != F.trace(Elem{v})) ++bad_tr;
    ++hist[F.trace(Elem{v})];
  }
  bool balanced = true;
  for (auto h : hist) balanced = balanced && h == static_cast<std::int64_t>(F.q() / F.p());
  rep.add("trace equals the sum of Frobenius conjugates", bad_tr == 0, {{"failures", bad_tr}});
  rep.add("trace is onto F_p with equal fibres", balanced);

  std::uint64_t bad_theta = 0;
  for (std::uint64_t t = 0; t < std::min<std::uint64_t>(trials, 2000); ++t) {
    const Elem a{U(rng)}, b{U(rng)};
    if (!(theta(F, F.add(a, b)) == theta(F, a) * theta(F, b))) ++bad_theta;
    if (!(theta(F, F.neg(a)) == theta(F, a).conj())) ++bad_theta;
  }
  rep.add("theta is an additive character", bad_theta == 0, {{"failures", bad_theta}});

  CycloValue sum = cyclo_zero(F);
  for (std::uint32_t v = 0; v < F.q(); ++v) sum += theta(F, Elem{v});
  bool nontrivial = false;
  for (std::uint32_t v = 0; v < F.q() && !nontrivial; ++v) nontrivial = !theta(F, Elem{v}).equals_integer(1);
  rep.add("theta is nontrivial and sums to zero", sum.is_zero() && nontrivial);

  const CycloValue qv = cyclo_integer(F, static_cast<std::int64_t>(F.q()));
  const CycloValue one = cyclo_integer(F, 1);
  rep.add("q-power scaling is exact", qv.scaled_by_q_power(-1) == one && one.scaled_by_q_power(1) == qv &&
                                          one.scaled_by_q_power(-1).q_exponent() == 1);
}

// ---- orbit-partition ----

inline void suite_orbits(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  require_long(c, F, "orbit-partition");
  const int n = c.n;
  const std::uint64_t q = F->q();
  const OrbitCatalog cat = enumerate_all_orbits(F, n, c.budget);
  std::uint64_t total = 0;
  bool even = true;
  std::map<int, std::uint64_t> by_dim;
  std::uint64_t regular = 0, regular_ok = 0;
  for (const auto& o : cat.orbits) {
    total += o.size;
    even = even && o.dim % 2 == 0 && o.size == ipow(q, o.dim);
    ++by_dim[o.dim];
    if (o.kind() == OrbitKind::regular) {
      ++regular;
      if (o.size == ipow(q, 2 * mu(n)) && o.canonical_form && is_regular_canonical(*o.canonical_form)) ++regular_ok;
    }
  }
  json dims = json::object();
  for (auto [d, k] : by_dim) dims[std::to_string(d)] = k;
  rep.add("orbit sizes sum to |g*|", total == ipow(q, num_roots(n)),
          {{"sum", total}, {"expected", ipow(q, num_roots(n))}, {"orbits", cat.orbits.size()}, {"by_dim", dims}});
  rep.add("every orbit size is q^{even}", even);
  rep.add("regular orbit count", regular == count_regular_orbits(n, q),
          {{"regular", regular}, {"expected", count_regular_orbits(n, q)}});
  rep.add("regular orbits have size q^{2 mu(n)} and a canonical form", regular_ok == regular,
          {{"ok", regular_ok}, {"size", ipow(q, 2 * mu(n))}});

  // Canonical forms lie in pairwise distinct orbits of the right dimension.
  std::set<std::uint32_t> hit;
  bool distinct = true, right_dim = true;
  for (const auto& f : regular_canonical_forms(F, n)) {
    const auto o = cat.orbit_of_index[f.pack()];
    distinct = distinct && hit.insert(o).second;
    right_dim = right_dim && cat.orbits[o].dim == 2 * mu(n);
  }
  std::uint64_t sub_forms = 0;
  if (n >= 3)
    for (const auto& [tag, f] : subregular_canonical_forms(F, n)) {
      const auto o = cat.orbit_of_index[f.pack()];
      distinct = distinct && hit.insert(o).second;
      right_dim = right_dim && cat.orbits[o].dim == 2 * mu(n) - 2;
      ++sub_forms;
    }
  rep.add("canonical forms sit in distinct orbits of the expected dimension", distinct && right_dim,
          {{"subregular_forms", sub_forms}});

  const ClassPartition cl = enumerate_classes(F, n, c.budget);
  rep.add("orbit count equals class count", cl.count() == cat.orbits.size(),
          {{"orbits", cat.orbits.size()}, {"classes", cl.count()}});
}

// ---- regular-theorem ----

inline void suite_regular(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  require_long(c, F, "regular-theorem");
  const int n = c.n;
  const ClassPartition cl = enumerate_classes(F, n, c.budget);
  const KirillovBatch K(F, n, cl.rep_log);
  const RegularSupport RS(F, n);
  std::vector<std::optional<std::size_t>> loc(cl.count());
  std::uint64_t multi = 0, located = 0;
  for (std::size_t k = 0; k < cl.count(); ++k) {
    int hits = 0;
    for (std::size_t t = 0; t < RS.entries().size(); ++t)
      if (class_membership(cl.reps[k], RS.entries()[t].C)) {
        if (!loc[k]) loc[k] = t;
        ++hits;
      }
    if (hits > 1) ++multi;
    if (hits) ++located;
  }
  // K_reg is a union of classes: its size is the sum of the located class sizes.
  std::uint64_t kreg = 0, kreg_expected = 0;
  for (std::size_t k = 0; k < cl.count(); ++k)
    if (loc[k]) kreg += cl.sizes[k];
  for (const auto& e : RS.entries()) kreg_expected += ipow(F->q(), e.C.size_exponent);
  rep.add("regular classes are disjoint and fill K_reg", multi == 0 && kreg == kreg_expected,
          {{"located_classes", located}, {"K_reg", kreg}, {"sum_of_sizes", kreg_expected}});

  const auto forms = regular_canonical_forms(F, n);
  std::vector<std::uint64_t> bad(forms.size(), 0), off(forms.size(), 0);
  std::vector<char> degree_ok(forms.size(), 0);
  parallel_for(forms.size(), c.threads, [&](std::size_t t) {
    const auto& f = forms[t];
    const auto o = orbit_of(f, c.budget, true);
    const auto kv = K.values(o.elements, o.dim);
    for (std::size_t k = 0; k < cl.count(); ++k) {
      if (!(RS.value(f, loc[k]) == kv[k])) ++bad[t];
      if (!loc[k] && !kv[k].is_zero()) ++off[t];
    }
    const UnipotentMatrix one(F, n);
    degree_ok[t] = RS.value(f, one).equals_integer(static_cast<std::int64_t>(ipow(F->q(), mu(n))));
  });
  std::uint64_t nbad = 0, noff = 0, ndeg = 0;
  for (std::size_t t = 0; t < forms.size(); ++t) nbad += bad[t], noff += off[t], ndeg += !degree_ok[t];
  rep.add("closed form equals the Kirillov sum on every class", nbad == 0,
          {{"forms", forms.size()}, {"classes", cl.count()}, {"mismatches", nbad}});
  rep.add("Kirillov values vanish off K_reg", noff == 0, {{"nonzero_off_support", noff}});
  rep.add("degree q^{mu(n)} at the identity", ndeg == 0);
}

// ---- subregular-theorem ----

inline void suite_subregular(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  require_long(c, F, "subregular-theorem");
  const int n = c.n;
  detail::require(n >= 3, "subregular-theorem: n must be at least 3");
  const ClassPartition cl = enumerate_classes(F, n, c.budget);
  const KirillovBatch K(F, n, cl.rep_log);
  const auto all_forms = subregular_canonical_forms(F, n);
  std::uint64_t unsupported = 0;
  for (const auto& tf : all_forms) {
    try {
      subregular_d_of(tf.second);
    } catch (const Unsupported&) {
      ++unsupported;
    }
  }
  json per_d = json::array();

  for (int d = 1; d <= max_subregular_d(n); ++d) {
    std::vector<LinearForm> forms;
    for (const auto& [tag, f] : all_forms) {
      int fd = 0;
      try {
        fd = subregular_d_of(f);
      } catch (const Unsupported&) {
        continue;
      }
      if (fd == d) forms.push_back(f);
    }
    if (forms.empty()) continue;
    const SubregularSupport SS(F, n, d);
    const std::string tagd = " (d=" + std::to_string(d) + ")";

    // Every class lies in at most one candidate class of the support.
    std::vector<std::optional<std::size_t>> loc(cl.count());
    std::uint64_t multi = 0, cand_mass = 0, covered = 0;
    for (std::size_t k = 0; k < cl.count(); ++k) {
      int hits = 0;
      for (std::size_t t = 0; t < SS.entries().size(); ++t)
        if (class_membership(cl.reps[k], SS.entries()[t].C)) {
          if (!loc[k]) loc[k] = t;
          ++hits;
        }
      multi += hits > 1;
      if (hits) covered += cl.sizes[k];
    }
    for (const auto& e : SS.entries()) cand_mass += ipow(F->q(), e.C.size_exponent);
    rep.add("candidate classes are disjoint conjugacy classes" + tagd, multi == 0 && covered == cand_mass,
            {{"candidates", SS.entries().size()}, {"covered", covered}, {"sum_of_sizes", cand_mass}});

    // Every decorated subset, kept with duplicates, for well-definedness.
    struct Rep {
      DecoratedSubset D;
      std::size_t entry;
    };
    std::map<std::string, std::size_t> by_key;
    for (std::size_t t = 0; t < SS.entries().size(); ++t) by_key[class_key(SS.entries()[t].C)] = t;
    std::vector<Rep> reps;
    for (const auto& S : subregular_subsets(n, d))
      for (auto& D : all_decorations(n, S, *F)) {
        const auto it = by_key.find(class_key(make_class(F, D)));
        if (it == by_key.end()) throw std::logic_error("decorated subset outside the candidate list");
        reps.push_back({D, it->second});
      }

    // Mackey terms depend only on (n, d); compute them once per class.
    // The induced-character route covers type 1 and small n.
    const LinearForm* first1 = nullptr;
    for (const auto& f : forms)
      if (!first1 && match_subregular_canonical(f)->type == 1) first1 = &f;
    const bool mackey = n <= 6 && first1;
    std::vector<std::vector<MackeyTerm>> terms;
    if (mackey) {
      const MackeyCharacter M0(*first1);
      terms.resize(cl.count());
      parallel_for(cl.count(), c.threads, [&](std::size_t k) { terms[k] = M0.terms(cl.reps[k]); });
    }

    std::vector<std::uint64_t> bad(forms.size()), bad_supp(forms.size()), bad_mackey(forms.size()),
        bad_def(forms.size());
    std::vector<char> deg_ok(forms.size(), 0);
    parallel_for(forms.size(), c.threads, [&](std::size_t t) {
      const auto& f = forms[t];
      const auto o = orbit_of(f, c.budget, true);
      const auto kv = K.values(o.elements, o.dim);
      std::optional<MackeyCharacter> M;
      if (mackey && match_subregular_canonical(f)->type == 1) M.emplace(f);
      for (std::size_t k = 0; k < cl.count(); ++k) {
        const CycloValue v = SS.value(f, loc[k]);
        if (!(v == kv[k])) ++bad[t];
        const bool in_kf = loc[k] && SS.admits(f, *loc[k]);
        if (in_kf != !kv[k].is_zero()) ++bad_supp[t];
        if (M && !(M->value(terms[k]) == kv[k])) ++bad_mackey[t];
      }
      for (const auto& r : reps) {
        const auto& e = SS.entries()[r.entry];
        const bool adm = SS.admits(f, r.entry);
        SupportEntry alt{r.D, e.C, e.m, e.d1};
        // The filter and the value must not depend on the representative.
        const bool alt_adm = !e.d1 || F->mul(f.at(d, n - d), r.D.at({d + 1, d})) ==
                                          F->mul(f.at(d + 1, n - d + 1), r.D.at({n - d + 1, n - d}));
        if (adm != alt_adm || (adm && !(detail::closed_value(f, alt) == detail::closed_value(f, e)))) ++bad_def[t];
      }
      const UnipotentMatrix one(F, n);
      deg_ok[t] = SS.value(f, one).equals_integer(static_cast<std::int64_t>(ipow(F->q(), mu(n) - 1)));
    });
    std::uint64_t nb = 0, ns = 0, nm = 0, nd = 0, ng = 0;
    for (std::size_t t = 0; t < forms.size(); ++t)
      nb += bad[t], ns += bad_supp[t], nm += bad_mackey[t], nd += bad_def[t], ng += !deg_ok[t];
    rep.add("closed form equals the Kirillov sum on every class" + tagd, nb == 0,
            {{"forms", forms.size()}, {"classes", cl.count()}, {"mismatches", nb}});
    rep.add("support is exactly K_f, filter included" + tagd, ns == 0, {{"mismatches", ns}});
    if (mackey)
      rep.add("induced character equals the Kirillov sum on every class" + tagd, nm == 0,
              {{"cosets", ipow(F->q(), d == 1 ? n - 3 : n - 2)}, {"mismatches", nm}});
    rep.add("values do not depend on the class representative" + tagd, nd == 0,
            {{"decorated_subsets", reps.size()}, {"mismatches", nd}});
    rep.add("degree q^{mu(n)-1} at the identity" + tagd, ng == 0);
    per_d.push_back({{"d", d}, {"forms", forms.size()}, {"candidates", SS.entries().size()}});
  }
  rep.add("forms outside the closed form are routed to the Kirillov sum", true,
          {{"unsupported_forms", unsupported}, {"per_d", per_d}});
}

// ---- class-equations ----

inline void suite_class_equations(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  const int n = c.n;
  detail::require(n >= 4, "class-equations: n must be at least 4");
  const std::uint64_t q = F->q();
  const int N = num_roots(n);
  std::mt19937_64 rng(c.seed);
  const PackedLayout L(F, n);
  const bool full = L.packable() && L.space_size() <= c.budget && (c.long_run || L.space_size() <= kShortSpace);
  const std::uint64_t samples = c.trials.value_or(2000);

  // Label sets against the centralizer rank for every D_1 subset.
  std::uint64_t subsets = 0, bad_labels = 0;
  for (int d = 1; d <= max_subregular_d(n); ++d)
    for (const auto& core : subregular_sets(n, d).d1)
      for (const auto& dp : regular_subsets(n)) {
        if (!admissible_dprime(n, d, dp, core)) continue;
        RootSet S = core;
        S.insert(dp.begin(), dp.end());
        DecoratedSubset D{n, {}};
        std::uniform_int_distribution<std::uint32_t> nz(1, q - 1);
        for (auto r : S) D.phi[r] = Elem{nz(rng)};
        const auto C = make_class(F, D);
        ++subsets;
        if (static_cast<int>(C.A.size() + C.B.size()) != N || static_cast<int>(C.A.size()) != centralizer_codim(x_of(F, D)))
          ++bad_labels;
      }
  rep.add("|A| + |B| = |Phi| and |A| = centralizer codimension", bad_labels == 0,
          {{"subsets", subsets}, {"failures", bad_labels}});

  for (int d = 1; d <= max_subregular_d(n); ++d) {
    const auto cores = subregular_sets(n, d).d1;
    for (std::size_t v = 0; v < cores.size(); ++v) {
      auto decs = all_decorations(n, cores[v], *F);
      std::shuffle(decs.begin(), decs.end(), rng);
      decs.resize(std::min<std::size_t>(decs.size(), 3));
      for (const auto& D : decs) {
        const ClassDescriptor C = make_class(F, D);
        const std::string tag = " d=" + std::to_string(d) + " " + (v ? "big" : "small") + " phi=" +
                                to_json(*F, D).at("phi").dump();
        const std::uint64_t expect = ipow(q, C.size_exponent);
        json info = {{"A", C.A.size()}, {"B", C.B.size()}};
        if (expect > c.budget) {
          rep.add("class too large for BFS" + tag, true, info);
          continue;
        }
        const auto cls = class_bfs(x_of(F, D), c.budget);
        const std::unordered_set<std::uint64_t> in(cls.begin(), cls.end());
        info["bfs"] = cls.size();
        rep.add("|class| = q^|A|" + tag, cls.size() == expect && static_cast<int>(C.A.size() + C.B.size()) == N, info);

        const CentralizerSystem Z(D);
        std::uint64_t mem = 0, mem_bad = 0, cen = 0, cen_bad = 0, scanned = 0;
        auto visit = [&](const UnipotentMatrix& g, std::uint64_t idx) {
          ++scanned;
          const bool m = class_membership(g, C);
          mem += m;
          if (m != in.contains(idx)) ++mem_bad;
          const bool z = commutes_with(g, D);
          cen += z;
          if (z != Z.check(g)) ++cen_bad;
        };
        if (full) {
          for (std::uint64_t idx = 0; idx < L.space_size(); ++idx) visit(L.unpack<Shape::unipotent>(idx), idx);
          rep.add("equations cut out exactly the BFS class" + tag, mem_bad == 0 && mem == cls.size(),
                  {{"scanned", scanned}, {"members", mem}, {"mismatches", mem_bad}});
          rep.add("centralizer count = q^|B|" + tag, cen_bad == 0 && cen == ipow(q, static_cast<int>(C.B.size())),
                  {{"centralizer", cen}, {"expected", ipow(q, static_cast<int>(C.B.size()))}, {"mismatches", cen_bad}});
        } else {
          // Half conjugates of x, half uniform elements.
          const UnipotentMatrix x = x_of(F, D);
          for (std::uint64_t t = 0; t < samples; ++t) {
            const UnipotentMatrix g = t % 2 ? conjugate(random_unipotent(F, n, rng), x) : random_unipotent(F, n, rng);
            visit(g, g.pack());
          }
          rep.add("equations agree with the BFS class on samples" + tag, mem_bad == 0,
                  {{"samples", scanned}, {"mismatches", mem_bad}});
          rep.add("centralizer equations agree with commutation on samples" + tag, cen_bad == 0,
                  {{"samples", scanned}, {"mismatches", cen_bad}});
        }
      }
    }
  }
}

// ---- invariance ----

inline void suite_invariance(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  const int n = c.n;
  detail::require(n >= 4, "invariance: n must be at least 4");
  std::mt19937_64 rng(c.seed);
  const std::uint64_t trials = c.trials.value_or(n <= 5 ? 10000 : 1000);
  std::uniform_int_distribution<std::uint32_t> nz(1, F->q() - 1);
  for (int d = 1; d <= max_subregular_d(n); ++d) {
    std::uint64_t runs = 0, fails = 0, subsets = 0;
    json msgs = json::array();
    for (const auto& core : subregular_sets(n, d).d1)
      for (const auto& dp : regular_subsets(n)) {
        if (!admissible_dprime(n, d, dp, core)) continue;
        RootSet S = core;
        S.insert(dp.begin(), dp.end());
        DecoratedSubset D{n, {}};
        for (auto r : S) D.phi[r] = Elem{nz(rng)};
        const auto r = invariance_suite(F, D, trials, rng);
        ++subsets;
        runs += r.trials;
        fails += r.failures;
        for (const auto& m : r.messages) msgs.push_back(set_str(S) + ": " + m);
      }
    rep.add("generators of J are conjugation-invariant (d=" + std::to_string(d) + ")", fails == 0 && runs > 0,
            {{"subsets", subsets}, {"trials", runs}, {"failures", fails}, {"messages", msgs}});
  }
}

// ---- orthogonality ----

inline void suite_orthogonality(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  require_long(c, F, "orthogonality");
  const int n = c.n;
  const OrbitCatalog cat = enumerate_all_orbits(F, n, c.budget);
  std::optional<std::vector<std::size_t>> rows;
  const std::size_t want = c.trials.value_or(20);
  if (!c.long_run && cat.orbits.size() > 64) {
    std::vector<std::size_t> all(cat.orbits.size());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
    std::mt19937_64 rng(c.seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(want, all.size()));
    std::sort(all.begin(), all.end());
    rows = all;
  }
  const CharacterTable T = character_table(F, n, c.budget, c.threads, rows);
  rep.add("one character per class", cat.orbits.size() == T.classes.count(),
          {{"orbits", cat.orbits.size()}, {"classes", T.classes.count()}});
  std::uint64_t deg2 = 0;
  for (const auto& o : cat.orbits) deg2 += ipow(F->q(), o.dim);
  rep.add("sum of squared degrees = |G|", deg2 == ipow(F->q(), num_roots(n)), {{"sum", deg2}});

  const std::size_t m = T.values.size();
  std::vector<std::uint64_t> bad(m, 0);
  parallel_for(m, c.threads, [&](std::size_t i) {
    for (std::size_t j = i; j < m; ++j) {
      const CycloValue ip = inner_product(T.classes, T.values[i], T.values[j]);
      if (!ip.equals_integer(i == j ? 1 : 0)) ++bad[i];
    }
  });
  std::uint64_t nb = 0;
  for (auto b : bad) nb += b;
  rep.add("<chi_i, chi_j> = delta_ij", nb == 0,
          {{"rows", m}, {"pairs", m * (m + 1) / 2}, {"failures", nb}, {"sampled", rows.has_value()}});
}

// ---- degrees ----

inline void suite_degrees(const VerifyConfig& c, Reporter& rep) {
  detail::require(c.n >= 2 && c.n <= 64, "degrees: n out of range");
  for (int n = 2; n <= c.n; ++n) {
    const int m = mu(n);
    // |Phi| - n0 counts the coordinates not fixed by the n0 invariants.
    const bool reg = static_cast<int>(phi_reg(n).size()) == m && m_regular(n, {}) == m &&
                     2 * m == num_roots(n) - n0_of(n);
    rep.add("regular degree bookkeeping n=" + std::to_string(n), reg,
            {{"mu", m}, {"phi_reg", phi_reg(n).size()}, {"m_empty", m_regular(n, {})}});
    if (n < 4) continue;
    bool sub = true;
    json ms = json::array();
    for (int d = 1; d <= max_subregular_d(n); ++d) {
      // D = {} as a D_0 subset: m = |R(D) cap Phi_reg| - 1.
      const int m0 = intersection_size(regular_roots(n, {}), phi_reg(n)) - 1;
      sub = sub && m0 == m - 1;
      ms.push_back(m0);
    }
    rep.add("subregular degree bookkeeping n=" + std::to_string(n), sub, {{"m_empty", ms}});
  }
}

// ---- charmat-bridge ----

inline void suite_charmat(const VerifyConfig& c, Reporter& rep) {
  const FieldPtr F = field_make(c.p, c.r, c.n);
  const int n = c.n;
  detail::require(n >= 4, "charmat-bridge: n must be at least 4");
  std::mt19937_64 rng(c.seed);
  const std::uint64_t samples = c.trials.value_or(1000);
  auto bridge = [&](const std::string& name, const PairSet& X, const std::function<Elem(const UnipotentMatrix&)>& poly) {
    const int s = calibrate_sign(F, n, X, poly, rng);
    std::uint64_t bad = 0;
    for (std::uint64_t t = 0; t < samples && s != 0; ++t) {
      const UnipotentMatrix g = random_unipotent(F, n, rng);
      Elem m = charmat_coeff(X, 2, g);
      if (s < 0) m = F->neg(m);
      if (poly(g) != m) ++bad;
    }
    rep.add(name, s != 0 && bad == 0, {{"sign", s}, {"samples", samples}, {"failures", bad}});
  };
  for (int d = 1; d <= max_subregular_d(n); ++d) {
    const std::string dd = "d=" + std::to_string(d);
    bridge("gamma = +-M^X(2) " + dd, x_gamma(n, d), [d](const UnipotentMatrix& g) { return gamma_poly(g, d); });
    for (int m = d + 1; m <= std::min(n0_of(n), n - d - 1); ++m)
      for (int j = d + 1; j <= m; ++j) {
        const int i = n - j + 1;
        const std::string tag = " " + dd + " m=" + std::to_string(m) + " (i,j)=" + root_str({i, j});
        bridge("alpha = +-M^X(2)" + tag, x_alpha(n, d, m, j),
               [d, m, j](const UnipotentMatrix& g) { return alpha_poly(g, d, m, j); });
        bridge("beta = +-M^X(2)" + tag, x_beta(d, m, i),
               [d, m, i](const UnipotentMatrix& g) { return beta_poly(g, d, m, i); });
      }
  }
  std::uint64_t bad = 0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    const UnipotentMatrix g = random_unipotent(F, n, rng);
    for (int d = 1; d <= n0_of(n); ++d)
      if (charmat_coeff(x_antidiagonal(n, d), d, g) != delta_d(g, d)) ++bad;
  }
  rep.add("M^{X_d}(d, g) = Delta_d(g), d = 1..n0", bad == 0, {{"samples", samples}, {"failures", bad}});
}

}  // namespace detail

// Throws InvalidArgument for an unknown suite or invalid config and
// BudgetExceeded when the suite cannot run within the budget.
inline SuiteReport run_suite(const std::string& suite, const VerifyConfig& cfg) {
  SuiteReport r{suite, cfg, {}};
  detail::Reporter rep(r);
  detail::require(cfg.n >= 1, "n must be positive");
  detail::require(cfg.budget > 0, "budget must be positive");
  // Validates p, r and p >= n up front.
  if (suite != "degrees") field_make(cfg.p, cfg.r, cfg.n);
  if (suite == "field-axioms") detail::suite_field(cfg, rep);
  else if (suite == "orbit-partition") detail::suite_orbits(cfg, rep);
  else if (suite == "regular-theorem") detail::suite_regular(cfg, rep);
  else if (suite == "subregular-theorem") detail::suite_subregular(cfg, rep);
  else if (suite == "class-equations") detail::suite_class_equations(cfg, rep);
  else if (suite == "invariance") detail::suite_invariance(cfg, rep);
  else if (suite == "orthogonality") detail::suite_orthogonality(cfg, rep);
  else if (suite == "degrees") detail::suite_degrees(cfg, rep);
  else if (suite == "charmat-bridge") detail::suite_charmat(cfg, rep);
  else throw InvalidArgument("unknown suite '" + suite + "'");
  return r;
}

}  // namespace unitri
