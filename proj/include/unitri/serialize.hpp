#pragma once

// JSON (nlohmann) and CSV encodings. Parsers throw InvalidArgument on any
// malformed input, so the CLI can map them to exit code 2.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitri/characters.hpp"
#include "unitri/classes.hpp"
#include "unitri/cyclo.hpp"
#include "unitri/error.hpp"
#include "unitri/field.hpp"
#include "unitri/matrix.hpp"
#include "unitri/orbits.hpp"
#include "unitri/roots.hpp"

namespace unitri {

using json = nlohmann::json;

namespace detail {

template <class Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

// ---- field, elements, values ----

inline json to_json(const Field& F) { return {{"p", F.p()}, {"r", F.r()}, {"modulus", F.modulus()}}; }

inline FieldPtr field_from_json(const json& j, int n_hint = 0) {
  return detail::guarded("field json", [&] {
    const int p = j.at("p").get<int>();
    const int r = j.value("r", 1);
    FieldPtr F = field_make(p, r, n_hint);
    if (j.contains("modulus") && !j.at("modulus").is_null() && j.at("modulus").get<std::vector<int>>() != F->modulus())
      throw InvalidArgument("field json: modulus differs from the canonical choice");
    return F;
  });
}

inline json to_json(const Field& F, Elem a) { return F.coeffs(a); }

inline Elem elem_from_json(const Field& F, const json& j) {
  return detail::guarded("element json", [&] {
    if (j.is_number_integer() && F.r() == 1) {
      const long long v = j.get<long long>();
      detail::require(v >= 0 && v < F.p(), "element outside [0, p)");
      return Elem{static_cast<std::uint32_t>(v)};
    }
    const auto c = j.get<std::vector<int>>();
    return F.from_coeffs(c);
  });
}

inline json to_json(const CycloValue& c) { return {{"num", c.numerator()}, {"qexp", c.q_exponent()}}; }

inline CycloValue cyclo_from_json(const Field& F, const json& j) {
  return detail::guarded("cyclo json", [&] {
    return CycloValue::from_parts(F.p(), F.q(), j.at("num").get<std::vector<std::int64_t>>(), j.at("qexp").get<int>());
  });
}

// Coefficient tuple "(c_0;...;c_{p-2})/q^e" for CSV cells.
inline std::string csv_cell(const CycloValue& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.numerator().size(); ++i) {
    if (i) s += ";";
    s += std::to_string(c.numerator()[i]);
  }
  return s + ")/q^" + std::to_string(c.q_exponent());
}

// ---- matrices and forms ----

// Row-major list of nonzero entries. Group and algebra elements use (i, j)
// with i > j, forms use (i, j) with i < j.
template <Shape S>
json to_json(const TriArray<S>& a) {
  json entries = json::array();
  const int n = a.n();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if constexpr (S == Shape::form) {
        if (j <= i) continue;
      } else if (j >= i) {
        continue;
      }
      const Elem e = a.at(i, j);
      if (!e.is_zero()) entries.push_back({i, j, to_json(a.F(), e)});
    }
  return {{"n", n}, {"entries", entries}};
}

template <Shape S>
TriArray<S> tri_from_json(const FieldPtr& F, const json& j) {
  return detail::guarded("matrix json", [&] {
    const int n = j.at("n").get<int>();
    detail::require(n >= 1 && n <= 64, "n out of range");
    TriArray<S> a(F, n);
    for (const auto& e : j.at("entries")) {
      detail::require(e.is_array() && e.size() == 3, "entry must be [i, j, elem]");
      const int r = e[0].get<int>(), c = e[1].get<int>();
      const bool ok = S == Shape::form ? (1 <= r && r < c && c <= n) : (1 <= c && c < r && r <= n);
      detail::require(ok, "entry position outside the triangle");
      a.set(r, c, elem_from_json(*F, e[2]));
    }
    return a;
  });
}

inline UnipotentMatrix unipotent_from_json(const FieldPtr& F, const json& j) {
  return tri_from_json<Shape::unipotent>(F, j);
}
inline LinearForm form_from_json(const FieldPtr& F, const json& j) { return tri_from_json<Shape::form>(F, j); }

// ---- roots and decorated subsets ----

inline json to_json(Root r) { return {r.i, r.j}; }

inline json to_json(const RootSet& S) {
  json a = json::array();
  for (auto r : S) a.push_back(to_json(r));
  return a;
}

inline json to_json(const Field& F, const DecoratedSubset& D) {
  json phi = json::array();
  for (auto& [r, v] : D.phi) phi.push_back({r.i, r.j, to_json(F, v)});
  return {{"n", D.n}, {"D", to_json(D.roots())}, {"phi", phi}};
}

inline DecoratedSubset subset_from_json(const FieldPtr& F, const json& j) {
  return detail::guarded("subset json", [&] {
    DecoratedSubset D;
    D.n = j.at("n").get<int>();
    detail::require(D.n >= 1, "n must be positive");
    for (const auto& e : j.at("phi")) {
      detail::require(e.is_array() && e.size() == 3, "phi entry must be [i, j, elem]");
      D.phi[{e[0].get<int>(), e[1].get<int>()}] = elem_from_json(*F, e[2]);
    }
    if (j.contains("D")) {
      RootSet listed;
      for (const auto& r : j.at("D")) listed.insert({r.at(0).get<int>(), r.at(1).get<int>()});
      detail::require(listed == D.roots(), "D and phi list different roots");
    }
    validate(*F, D);
    return D;
  });
}

// ---- orbits ----

inline json to_json(const Field& F, const OrbitDescriptor& o) {
  json inv = json::array();
  for (auto e : o.invariants) inv.push_back(to_json(F, e));
  json j = {{"canonical_form", o.canonical_form ? to_json(*o.canonical_form) : json(nullptr)},
            {"size", o.size},
            {"dim", o.dim},
            {"kind", to_string(o.kind())},
            {"invariants", inv}};
  if (o.kind() == OrbitKind::subregular) {
    j["d"] = o.tag.d;
    if (o.tag.type) j["type"] = o.tag.type;
  }
  return j;
}

inline json to_json(const OrbitCatalog& cat) {
  json a = json::array();
  for (const auto& o : cat.orbits) a.push_back(to_json(*cat.field, o));
  return a;
}

// ---- classes ----

inline json to_json(const Field& F, const ClassDescriptor& C) {
  json consts = json::object();
  if (C.subregular) {
    const int n = C.sreg.n, d = C.sreg.d;
    consts["d"] = d;
    consts["c_alpha"] = {{"root", {n - d + 1, n - d}}, {"value", to_json(F, C.constants.c_alpha)}};
    consts["c_beta"] = {{"root", {d + 1, d}}, {"value", to_json(F, C.constants.c_beta)}};
    if (!C.sreg.drop_gamma) consts["c0"] = to_json(F, C.constants.c0);
    json c = json::array();
    for (auto& [r, v] : C.constants.c) c.push_back({r.i, r.j, to_json(F, v)});
    consts["c"] = c;
  } else {
    json eq = json::array();
    for (std::size_t k = 0; k < C.basic.X.size(); ++k) {
      json X = json::array();
      for (auto [i, j] : C.basic.X[k]) X.push_back({i, j});
      eq.push_back({{"X", X}, {"value", to_json(F, C.basic.target[k])}});
    }
    consts["minors"] = eq;
  }
  // q^e as an integer when it fits in 63 bits.
  json size = nullptr;
  std::uint64_t s = 1;
  bool fits = true;
  for (int k = 0; k < C.size_exponent && fits; ++k) {
    if (s > (std::uint64_t{1} << 62) / F.q()) fits = false;
    else s *= F.q();
  }
  if (fits) size = s;
  return {{"D", to_json(F, C.D)},
          {"kind", to_string(C.kind.kind)},
          {"constants", consts},
          {"size", size},
          {"size_exponent", C.size_exponent},
          {"A", to_json(C.A)},
          {"B", to_json(C.B)}};
}

// ---- character tables ----

inline json to_json(const CharacterTable& T) {
  const Field& F = *T.field;
  json classes = json::array();
  for (std::size_t k = 0; k < T.classes.count(); ++k) {
    json c = to_json(T.classes.reps[k]);
    c["size"] = T.classes.sizes[k];
    classes.push_back(c);
  }
  json rows = json::array();
  for (std::size_t r = 0; r < T.values.size(); ++r) {
    json vals = json::array();
    for (const auto& v : T.values[r]) vals.push_back(to_json(v));
    rows.push_back({{"orbit", to_json(F, T.orbits[r])}, {"values", vals}});
  }
  return {{"group", {{"n", T.n}, {"p", F.p()}, {"r", F.r()}}}, {"classes", classes}, {"rows", rows}};
}

// One line per orbit; the header lists class sizes.
inline std::string to_csv(const CharacterTable& T) {
  std::ostringstream os;
  os << "orbit,dim,kind";
  for (std::size_t k = 0; k < T.classes.count(); ++k) os << ",class" << k << ":" << T.classes.sizes[k];
  os << "\n";
  for (std::size_t r = 0; r < T.values.size(); ++r) {
    os << r << "," << T.orbits[r].dim << "," << to_string(T.orbits[r].kind());
    for (const auto& v : T.values[r]) os << "," << csv_cell(v);
    os << "\n";
  }
  return os.str();
}

}  // namespace unitri
