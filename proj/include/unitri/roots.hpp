#pragma once

// Combinatorics of the root set Phi(n): basic, regular and d-subregular
// subsets, D-regular roots, and the exponents m_D.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "unitri/error.hpp"
#include "unitri/matrix.hpp"

namespace unitri {

using RootSet = std::set<Root>;

inline int n0_of(int n) { return n / 2; }
inline int n1_of(int n) { return (n - 1) / 2; }

// mu(n) = (n-2) + (n-4) + ...
inline int mu(int n) {
  int s = 0;
  for (int k = n - 2; k > 0; k -= 2) s += k;
  return s;
}

inline std::vector<Root> phi_n(int n) {
  detail::require(n >= 1, "phi_n: n must be positive");
  std::vector<Root> r;
  r.reserve(num_roots(n));
  for (int k = 0; k < num_roots(n); ++k) r.push_back(root_at(n, k));
  return r;
}

inline bool in_phi(int n, Root r) { return 1 <= r.j && r.j < r.i && r.i <= n; }

inline bool is_antidiagonal(int n, Root r) { return r.i == n - r.j + 1; }

inline bool is_basic(const RootSet& D) {
  std::set<int> rows, cols;
  for (auto r : D)
    if (!rows.insert(r.i).second || !cols.insert(r.j).second) return false;
  return true;
}

inline bool is_regular(int n, const RootSet& D) {
  return is_basic(D) && std::all_of(D.begin(), D.end(), [n](Root r) { return is_antidiagonal(n, r); });
}

// R(D): roots with no D-root strictly inside their row or column span.
inline RootSet regular_roots(int n, const RootSet& D) {
  RootSet r;
  for (auto [i, j] : phi_n(n)) {
    bool ok = true;
    for (int k = j + 1; k < i && ok; ++k)
      if (D.contains({i, k}) || D.contains({k, j})) ok = false;
    if (ok) r.insert({i, j});
  }
  return r;
}

// R_D(i, j) = {(i, j)} u {(k, l) in D : l > j, k < i}.
inline std::vector<std::pair<int, int>> r_d_of(const RootSet& D, int i, int j) {
  std::vector<std::pair<int, int>> x{{i, j}};
  for (auto r : D)
    if (r.j > j && r.i < i) x.emplace_back(r.i, r.j);
  return x;
}

// Phi_reg = {(i, j) : i > n - j + 1}.
inline RootSet phi_reg(int n) {
  RootSet s;
  for (auto r : phi_n(n))
    if (r.i > n - r.j + 1) s.insert(r);
  return s;
}

inline int intersection_size(const RootSet& a, const RootSet& b) {
  int c = 0;
  for (auto r : a) c += b.contains(r);
  return c;
}

inline int m_regular(int n, const RootSet& D) {
  detail::require(is_regular(n, D), "m_regular: D is not regular");
  return intersection_size(regular_roots(n, D), phi_reg(n));
}

// Phi_d = {(i, j) : i > n-j+1, j not in {d, n-d}, i not in {n-d+1, n-d}}.
inline RootSet phi_d(int n, int d) {
  RootSet s;
  for (auto r : phi_reg(n))
    if (r.j != d && r.j != n - d && r.i != n - d + 1 && r.i != n - d) s.insert(r);
  return s;
}

// Highest d for which subregular subsets are built. For even n the value
// n_1 is admitted as well; it covers the third type.
inline int max_subregular_d(int n) { return n % 2 == 0 ? n1_of(n) : n1_of(n) - 1; }

struct SubregularCandidates {
  std::vector<RootSet> d0;  // five sets
  std::vector<RootSet> d1;  // two sets
};

inline SubregularCandidates subregular_sets(int n, int d) {
  detail::require(d >= 1 && d <= max_subregular_d(n), "subregular_sets: d out of range");
  SubregularCandidates c;
  c.d0 = {{}, {{n - d + 1, d}}, {{n - d, d}}, {{n - d + 1, d + 1}}, {{n - d, d}, {n - d + 1, d + 1}}};
  const RootSet small{{d + 1, d}, {n - d + 1, n - d}};
  RootSet big = small;
  big.insert({n - d, d});
  big.insert({n - d + 1, d + 1});
  c.d1 = {small, big};
  return c;
}

enum class SubsetKind { regular, d_subregular, basic, other };
enum class Variant { d0, d1 };

inline std::string to_string(SubsetKind k) {
  switch (k) {
    case SubsetKind::regular: return "regular";
    case SubsetKind::d_subregular: return "d_subregular";
    case SubsetKind::basic: return "basic";
    default: return "other";
  }
}

struct SubsetClassification {
  SubsetKind kind = SubsetKind::other;
  int d = 0;                   // for d_subregular
  Variant variant = Variant::d0;
  int variant_index = 0;       // position in the D_0 or D_1 list
  bool third_type = false;     // d = n_1 with n even
  RootSet core;                // the D_i(d) part
  RootSet dprime;              // D' = D \ D_i(d)
};

// D' must be regular, avoid (n-d+1, d) and (n-d, d+1), and be disjoint
// from the D_i(d) part.
inline bool admissible_dprime(int n, int d, const RootSet& dprime, const RootSet& core) {
  if (!is_regular(n, dprime)) return false;
  if (dprime.contains({n - d + 1, d}) || dprime.contains({n - d, d + 1})) return false;
  for (auto r : dprime)
    if (core.contains(r)) return false;
  return true;
}

// Tries d-subregular shapes for the given d only.
inline std::optional<SubsetClassification> match_subregular(int n, int d, const RootSet& D) {
  const auto cand = subregular_sets(n, d);
  auto try_list = [&](const std::vector<RootSet>& list, Variant v) -> std::optional<SubsetClassification> {
    // Prefer the largest matching core so that the split is unique.
    for (int idx = static_cast<int>(list.size()) - 1; idx >= 0; --idx) {
      const RootSet& core = list[idx];
      if (!std::includes(D.begin(), D.end(), core.begin(), core.end())) continue;
      RootSet rest;
      std::set_difference(D.begin(), D.end(), core.begin(), core.end(), std::inserter(rest, rest.end()));
      if (!admissible_dprime(n, d, rest, core)) continue;
      SubsetClassification c;
      c.kind = SubsetKind::d_subregular;
      c.d = d;
      c.variant = v;
      c.variant_index = idx;
      c.third_type = (n % 2 == 0 && d == n1_of(n));
      c.core = core;
      c.dprime = rest;
      return c;
    }
    return std::nullopt;
  };
  if (auto c = try_list(cand.d1, Variant::d1)) return c;
  return try_list(cand.d0, Variant::d0);
}

// Most specific kind: regular, then d-subregular (smallest d), then basic.
inline SubsetClassification classify_subset(int n, const RootSet& D) {
  for (auto r : D) detail::require(in_phi(n, r), "classify_subset: root outside Phi(n)");
  SubsetClassification c;
  if (is_regular(n, D)) {
    c.kind = SubsetKind::regular;
    c.dprime = D;
    return c;
  }
  for (int d = 1; d <= max_subregular_d(n); ++d)
    if (auto s = match_subregular(n, d, D)) return *s;
  c.kind = is_basic(D) ? SubsetKind::basic : SubsetKind::other;
  return c;
}

// A subset D of Phi(n) with nonzero values phi on it.
struct DecoratedSubset {
  int n = 0;
  std::map<Root, Elem> phi;

  RootSet roots() const {
    RootSet s;
    for (auto& [r, v] : phi) s.insert(r);
    return s;
  }
  Elem at(Root r) const {
    auto it = phi.find(r);
    return it == phi.end() ? Elem{0} : it->second;
  }
  friend bool operator==(const DecoratedSubset&, const DecoratedSubset&) = default;
};

inline void validate(const Field& F, const DecoratedSubset& D) {
  for (auto& [r, v] : D.phi) {
    detail::require(in_phi(D.n, r), "decorated subset: root outside Phi(n)");
    detail::require(F.contains(v) && !v.is_zero(), "decorated subset: phi must be nonzero");
  }
}

// x_D(phi) = 1 + sum phi(i, j) e_ij.
inline UnipotentMatrix x_of(const FieldPtr& F, const DecoratedSubset& D) {
  validate(*F, D);
  UnipotentMatrix x(F, D.n);
  for (auto& [r, v] : D.phi) x.set(r.i, r.j, v);
  return x;
}

inline NilpotentMatrix e_of(const FieldPtr& F, const DecoratedSubset& D) {
  validate(*F, D);
  NilpotentMatrix x(F, D.n);
  for (auto& [r, v] : D.phi) x.set(r.i, r.j, v);
  return x;
}

inline int m_subregular(int n, const RootSet& D) {
  const auto c = classify_subset(n, D);
  detail::require(c.kind == SubsetKind::d_subregular, "m_subregular: D is not d-subregular");
  const RootSet R = regular_roots(n, D);
  if (c.variant == Variant::d0) return intersection_size(R, phi_reg(n)) - 1;
  return intersection_size(R, phi_d(n, c.d)) + n - 2 * c.d - 1;
}

struct SubregularSplit {
  int d = 0;
  RootSet dminus, d1, dplus, dprime, ddprime;
  std::optional<int> m;  // max column of D^+, absent when D^+ is empty
};

inline SubregularSplit split_subregular(int n, const RootSet& D) {
  const auto c = classify_subset(n, D);
  detail::require(c.kind == SubsetKind::d_subregular && c.variant == Variant::d1,
                  "split_subregular: D must be d-subregular and contain D_1(d)");
  SubregularSplit s;
  s.d = c.d;
  s.d1 = c.core;
  s.dprime = c.dprime;
  // D^- = {j < d} and D^+ = {d < j < n-d} partition D'.
  for (auto r : c.dprime) (r.j < c.d ? s.dminus : s.dplus).insert(r);
  s.ddprime = D;
  s.ddprime.erase({n - c.d, c.d});
  s.ddprime.erase({n - c.d + 1, c.d + 1});
  for (auto r : s.dplus) s.m = std::max(s.m.value_or(0), r.j);
  return s;
}

// All regular subsets of Phi(n).
inline std::vector<RootSet> regular_subsets(int n) {
  std::vector<Root> anti;
  for (int j = 1; j <= n0_of(n); ++j) anti.push_back({n - j + 1, j});
  std::vector<RootSet> out;
  for (unsigned mask = 0; mask < (1u << anti.size()); ++mask) {
    RootSet s;
    for (std::size_t t = 0; t < anti.size(); ++t)
      if (mask >> t & 1) s.insert(anti[t]);
    out.push_back(s);
  }
  return out;
}

// Every (D_i(d) core, D') combination of d-subregular subsets for one d.
inline std::vector<RootSet> subregular_subsets(int n, int d) {
  const auto cand = subregular_sets(n, d);
  std::vector<RootSet> out;
  auto add = [&](const RootSet& core) {
    for (const auto& dp : regular_subsets(n)) {
      if (!admissible_dprime(n, d, dp, core)) continue;
      RootSet D = core;
      D.insert(dp.begin(), dp.end());
      out.push_back(D);
    }
  };
  for (const auto& c : cand.d0) add(c);
  for (const auto& c : cand.d1) add(c);
  return out;
}

// All maps D -> F_q^*, in lexicographic order of values along D.
inline std::vector<DecoratedSubset> all_decorations(int n, const RootSet& D, const Field& F) {
  std::vector<Root> rs(D.begin(), D.end());
  std::vector<DecoratedSubset> out;
  std::vector<std::uint32_t> v(rs.size(), 1);
  while (true) {
    DecoratedSubset ds{n, {}};
    for (std::size_t t = 0; t < rs.size(); ++t) ds.phi[rs[t]] = Elem{v[t]};
    out.push_back(std::move(ds));
    std::size_t t = 0;
    while (t < v.size() && ++v[t] == F.q()) v[t++] = 1;
    if (t == v.size()) break;
  }
  return out;
}

}  // namespace unitri
