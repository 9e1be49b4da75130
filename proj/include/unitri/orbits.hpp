#pragma once

// Coadjoint orbits: BFS closure, the full partition of the dual space,
// canonical forms of regular and subregular orbits, and the invariants
// Delta_d of the transposed form.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unitri/error.hpp"
#include "unitri/matrix.hpp"
#include "unitri/packed.hpp"
#include "unitri/roots.hpp"

namespace unitri {

enum class OrbitKind { regular, subregular, other };

inline std::string to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::regular: return "regular";
    case OrbitKind::subregular: return "subregular";
    default: return "other";
  }
}

// Which canonical shape a form has. For the third type, variant is 'a'
// when xi_{n1,n0+1} is the nonzero anchor and 'b' otherwise.
struct CanonicalTag {
  OrbitKind kind = OrbitKind::other;
  int d = 0;
  int type = 0;
  char variant = 0;
};

struct OrbitDescriptor {
  std::optional<LinearForm> canonical_form;
  CanonicalTag tag;
  std::uint64_t size = 0;
  int dim = 0;
  std::vector<Elem> invariants;         // Delta_d(^t f), d = 1..n0
  std::vector<std::uint64_t> elements;  // packed, sorted; empty unless materialized
  std::uint64_t min_element = 0;
  bool materialized = false;

  OrbitKind kind() const { return tag.kind; }
};

inline std::vector<Elem> orbit_invariants(const LinearForm& f) {
  std::vector<Elem> v;
  const NilpotentMatrix t = transpose(f);
  for (int d = 1; d <= n0_of(f.n()); ++d) v.push_back(delta_d(t, d));
  return v;
}

// ---- regular canonical forms ----

inline LinearForm regular_canonical_form(const FieldPtr& F, int n, const std::vector<Elem>& betas) {
  const int n0 = n0_of(n);
  detail::require(static_cast<int>(betas.size()) == n0, "regular form: need n0 betas");
  for (int d = 1; d <= n0; ++d) {
    const bool must = d < n0 || n % 2 == 1;
    detail::require(!must || !betas[d - 1].is_zero(), "regular form: beta_" + std::to_string(d) + " must be nonzero");
  }
  LinearForm f(F, n);
  if (n0 == 0) return f;
  f.set(1, n, betas[0]);
  for (int d = 2; d <= n0; ++d) f.set(d, n - d + 1, F->div(betas[d - 1], betas[d - 2]));
  return f;
}

// Returns beta_d = prod_{k<=d} xi_{k,n-k+1} when f has the regular
// canonical shape. These agree with Delta_d(^t f) up to the sign
// (-1)^{d(d-1)/2} of the antidiagonal permutation.
inline std::optional<std::vector<Elem>> is_regular_canonical(const LinearForm& f) {
  const int n = f.n(), n0 = n0_of(n);
  const Field& F = f.F();
  for (int k = 0; k < num_roots(n); ++k) {
    const Root r = root_at(n, k);
    if (!f.coord(k).is_zero() && !is_antidiagonal(n, r)) return std::nullopt;
  }
  std::vector<Elem> betas;
  Elem prod = F.one();
  for (int d = 1; d <= n0; ++d) {
    const Elem x = f.at(d, n - d + 1);
    const bool must = d < n0 || n % 2 == 1;
    if (must && x.is_zero()) return std::nullopt;
    prod = F.mul(prod, x);
    betas.push_back(prod);
  }
  return betas;
}

inline std::uint64_t count_regular_orbits(int n, std::uint64_t q) {
  const int n0 = n0_of(n);
  std::uint64_t c = 1;
  for (int d = 1; d < n0; ++d) c *= q - 1;
  if (n0 >= 1) c *= (n % 2 == 1) ? q - 1 : q;
  return c;
}

// ---- subregular canonical forms ----

namespace detail {

struct Slot {
  int i, j;
  bool nonzero;
};

// Support pattern of a subregular canonical shape.
inline std::vector<Slot> subregular_slots(int n, int type, int d, char variant) {
  const int n0 = n0_of(n), n1 = n1_of(n);
  std::vector<Slot> s;
  if (type == 1) {
    for (int j = 1; j <= d - 1; ++j) s.push_back({j, n - j + 1, true});
    for (int j = d + 2; j <= n0; ++j) s.push_back({j, n - j + 1, j < n0 || n % 2 == 1});
    s.push_back({d, n - d, true});
    s.push_back({d + 1, n - d + 1, true});
    s.push_back({n - d, n - d + 1, false});
  } else if (type == 2) {
    for (int j = 1; j <= n1 - 1; ++j) s.push_back({j, n - j + 1, true});
    s.push_back({n1, n0 + 1, false});
    s.push_back({n1 + 1, n0 + 2, false});
  } else {
    for (int j = 1; j <= n1 - 1; ++j) s.push_back({j, n - j + 1, true});
    if (variant == 'a') {
      s.push_back({n1, n0 + 1, true});
      s.push_back({n1 + 1, n0 + 2, false});
      s.push_back({n1 + 2, n0 + 2, false});
    } else {
      s.push_back({n1, n0, false});
      s.push_back({n1 + 1, n0 + 2, true});
    }
  }
  return s;
}

inline std::vector<CanonicalTag> subregular_shapes(int n) {
  std::vector<CanonicalTag> tags;
  for (int d = 1; d < n1_of(n); ++d) tags.push_back({OrbitKind::subregular, d, 1, 0});
  if (n >= 3 && n % 2 == 1) tags.push_back({OrbitKind::subregular, n1_of(n), 2, 0});
  if (n >= 4 && n % 2 == 0) {
    tags.push_back({OrbitKind::subregular, n1_of(n), 3, 'a'});
    tags.push_back({OrbitKind::subregular, n1_of(n), 3, 'b'});
  }
  return tags;
}

}  // namespace detail

// Builds a subregular canonical form from the values of its slots, listed
// in the slot order of the shape: antidiagonal betas, then the extra
// entries (type 1: beta', beta'', beta; type 2: beta', beta'';
// type 3a: beta, beta', beta''; type 3b: beta', beta).
inline LinearForm subregular_canonical_form(const FieldPtr& F, int n, const CanonicalTag& tag,
                                            const std::vector<Elem>& values) {
  const auto slots = detail::subregular_slots(n, tag.type, tag.d, tag.variant);
  detail::require(values.size() == slots.size(), "subregular form: wrong number of parameters");
  LinearForm f(F, n);
  for (std::size_t t = 0; t < slots.size(); ++t) {
    detail::require(!slots[t].nonzero || !values[t].is_zero(), "subregular form: parameter must be nonzero");
    f.set(slots[t].i, slots[t].j, values[t]);
  }
  return f;
}

inline std::optional<CanonicalTag> match_subregular_canonical(const LinearForm& f) {
  const int n = f.n();
  for (const auto& tag : detail::subregular_shapes(n)) {
    const auto slots = detail::subregular_slots(n, tag.type, tag.d, tag.variant);
    std::vector<int> allowed(num_roots(n), 0);
    bool ok = true;
    for (const auto& s : slots) {
      allowed[root_pos(n, s.j, s.i)] = 1;
      if (s.nonzero && f.at(s.i, s.j).is_zero()) ok = false;
    }
    for (int k = 0; k < num_roots(n) && ok; ++k)
      if (!allowed[k] && !f.coord(k).is_zero()) ok = false;
    if (ok) return tag;
  }
  return std::nullopt;
}

// Slot values of a form that matches the given shape.
inline std::vector<Elem> subregular_parameters(const LinearForm& f, const CanonicalTag& tag) {
  std::vector<Elem> v;
  for (const auto& s : detail::subregular_slots(f.n(), tag.type, tag.d, tag.variant)) v.push_back(f.at(s.i, s.j));
  return v;
}

// Every subregular canonical form of degree n, each tagged.
inline std::vector<std::pair<CanonicalTag, LinearForm>> subregular_canonical_forms(const FieldPtr& F, int n) {
  std::vector<std::pair<CanonicalTag, LinearForm>> out;
  for (const auto& tag : detail::subregular_shapes(n)) {
    const auto slots = detail::subregular_slots(n, tag.type, tag.d, tag.variant);
    std::vector<std::uint32_t> v(slots.size());
    for (std::size_t t = 0; t < slots.size(); ++t) v[t] = slots[t].nonzero ? 1 : 0;
    while (true) {
      std::vector<Elem> vals;
      for (auto x : v) vals.push_back(Elem{x});
      out.emplace_back(tag, subregular_canonical_form(F, n, tag, vals));
      std::size_t t = 0;
      while (t < v.size() && ++v[t] == F->q()) v[t] = slots[t].nonzero ? 1 : 0, ++t;
      if (t == v.size()) break;
    }
  }
  return out;
}

inline std::vector<LinearForm> regular_canonical_forms(const FieldPtr& F, int n) {
  const int n0 = n0_of(n);
  std::vector<LinearForm> out;
  std::vector<std::uint32_t> v(n0, 1);
  auto lo = [&](int d) -> std::uint32_t { return (d < n0 - 1 || n % 2 == 1) ? 1 : 0; };
  for (int d = 0; d < n0; ++d) v[d] = lo(d);
  while (true) {
    std::vector<Elem> b;
    for (auto x : v) b.push_back(Elem{x});
    out.push_back(regular_canonical_form(F, n, b));
    int t = 0;
    while (t < n0 && ++v[t] == F->q()) v[t] = lo(t), ++t;
    if (t == n0) break;
  }
  return out;
}

// ---- orbit construction ----

namespace detail {

inline int log_q_exact(std::uint64_t size, std::uint64_t q) {
  int e = 0;
  while (size > 1) {
    require(size % q == 0, "orbit size is not a power of q");
    size /= q;
    ++e;
  }
  return e;
}

inline CanonicalTag tag_of(const LinearForm& f) {
  if (is_regular_canonical(f)) return {OrbitKind::regular, 0, 0, 0};
  if (auto t = match_subregular_canonical(f)) return *t;
  return {};
}

}  // namespace detail

// Fills kind, canonical form and invariants from the sorted element list.
inline void seal_orbit(const PackedLayout& L, OrbitDescriptor& o, const std::vector<std::uint64_t>& elems) {
  const int n = L.n();
  o.dim = detail::log_q_exact(o.size, L.q());
  if (o.dim % 2 != 0) throw std::logic_error("odd-dimensional orbit");
  o.invariants = orbit_invariants(L.unpack<Shape::form>(o.min_element));
  // Positions any canonical shape may occupy; other digits must vanish.
  std::vector<char> allowed(L.coords(), 0);
  for (int k = 0; k < L.coords(); ++k) allowed[k] = is_antidiagonal(n, root_at(n, k));
  for (const auto& t : detail::subregular_shapes(n))
    for (const auto& s : detail::subregular_slots(n, t.type, t.d, t.variant)) allowed[root_pos(n, s.j, s.i)] = 1;
  std::vector<std::uint32_t> dg(L.coords());
  std::optional<LinearForm> found;
  CanonicalTag tag;
  int matches = 0;
  for (auto idx : elems) {
    L.decode(idx, dg.data());
    bool maybe = true;
    for (int k = 0; k < L.coords() && maybe; ++k)
      if (!allowed[k] && dg[k] != 0) maybe = false;
    if (!maybe) continue;
    const LinearForm f = L.unpack<Shape::form>(idx);
    const auto t = detail::tag_of(f);
    if (t.kind == OrbitKind::other) continue;
    ++matches;
    if (!found) {
      found = f;
      tag = t;
    }
  }
  if (matches > 1) throw std::logic_error("orbit has more than one canonical form");
  const int m = mu(n);
  if (o.dim == 2 * m) {
    o.tag = {OrbitKind::regular, 0, 0, 0};
  } else if (o.dim == 2 * m - 2 && n >= 3) {
    o.tag = found ? tag : CanonicalTag{OrbitKind::subregular, 0, 0, 0};
    if (o.tag.d == 0)
      for (int d = 1; d <= n1_of(n); ++d)
        if (o.invariants[d - 1].is_zero()) {
          o.tag.d = d;
          break;
        }
  } else {
    o.tag = {};
  }
  if (found && tag.kind == o.tag.kind) o.canonical_form = found;
}

// BFS orbit of f under the coadjoint action.
inline OrbitDescriptor orbit_of(const LinearForm& f, std::uint64_t budget, bool materialize = true) {
  const PackedLayout L(f.field(), f.n());
  const auto gens = coadjoint_generators(f.F(), f.n());
  auto elems = bfs_closure(L, gens, L.pack(f), budget);
  std::sort(elems.begin(), elems.end());
  OrbitDescriptor o;
  o.size = elems.size();
  o.min_element = elems.front();
  seal_orbit(L, o, elems);
  if (materialize) {
    o.elements = std::move(elems);
    o.materialized = true;
  }
  return o;
}

// Unique canonical member of a materialized regular or subregular orbit.
inline LinearForm canonical_form_of(const FieldPtr& F, int n, const OrbitDescriptor& o) {
  detail::require(o.materialized, "canonical_form_of: orbit not materialized");
  const PackedLayout L(F, n);
  std::optional<LinearForm> found;
  for (auto idx : o.elements) {
    const LinearForm f = L.unpack<Shape::form>(idx);
    if (detail::tag_of(f).kind == OrbitKind::other) continue;
    if (found) throw std::logic_error("canonical_form_of: canonical form is not unique");
    found = f;
  }
  if (!found) throw Unsupported("canonical_form_of: orbit has no regular or subregular canonical form");
  return *found;
}

struct OrbitCatalog {
  FieldPtr field;
  int n = 0;
  std::vector<OrbitDescriptor> orbits;
  std::vector<std::uint32_t> orbit_of_index;  // packed form -> position in orbits
};

// Partition of the whole dual space. Output order: dim descending, then
// invariants, then smallest element.
inline OrbitCatalog enumerate_all_orbits(const FieldPtr& F, int n, std::uint64_t budget, bool materialize = false) {
  const PackedLayout L(F, n);
  auto P = partition_space(L, coadjoint_generators(*F, n), budget);
  const std::size_t m = P.size.size();
  std::vector<std::vector<std::uint64_t>> elems(m);
  for (std::size_t o = 0; o < m; ++o) elems[o].reserve(P.size[o]);
  for (std::uint64_t x = 0; x < P.id.size(); ++x) elems[P.id[x]].push_back(x);
  std::vector<OrbitDescriptor> orbits(m);
  for (std::size_t o = 0; o < m; ++o) {
    orbits[o].size = P.size[o];
    orbits[o].min_element = P.min_elem[o];
    seal_orbit(L, orbits[o], elems[o]);
  }
  std::vector<std::uint32_t> order(m);
  for (std::uint32_t o = 0; o < m; ++o) order[o] = o;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& x = orbits[a];
    const auto& y = orbits[b];
    if (x.dim != y.dim) return x.dim > y.dim;
    auto key = [](const OrbitDescriptor& z) {
      std::vector<std::uint32_t> k;
      for (auto e : z.invariants) k.push_back(e.v);
      return k;
    };
    if (auto kx = key(x), ky = key(y); kx != ky) return kx < ky;
    return x.min_element < y.min_element;
  });
  std::vector<std::uint32_t> rank(m);
  for (std::uint32_t r = 0; r < m; ++r) rank[order[r]] = r;
  OrbitCatalog cat;
  cat.field = F;
  cat.n = n;
  cat.orbits.resize(m);
  for (std::uint32_t o = 0; o < m; ++o) {
    cat.orbits[rank[o]] = std::move(orbits[o]);
    if (materialize) {
      cat.orbits[rank[o]].elements = std::move(elems[o]);
      cat.orbits[rank[o]].materialized = true;
    }
  }
  cat.orbit_of_index = std::move(P.id);
  for (auto& x : cat.orbit_of_index) x = rank[x];
  return cat;
}

}  // namespace unitri
