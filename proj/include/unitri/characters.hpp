#pragma once

// Irreducible characters of G_n(q) by three routes: the Kirillov orbit
// sum, the closed forms for regular and subregular orbits, and an
// induced-character (Mackey) oracle. Class partition, character tables and
// the exact inner product live here too.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unitri/classes.hpp"
#include "unitri/cyclo.hpp"
#include "unitri/error.hpp"
#include "unitri/matrix.hpp"
#include "unitri/orbits.hpp"
#include "unitri/packed.hpp"
#include "unitri/parallel.hpp"
#include "unitri/roots.hpp"

namespace unitri {

// ---- conjugacy classes of the whole group ----

// Classes are computed on the algebra: g ~ h iff log g and log h are
// Ad-conjugate (p >= n).
struct ClassPartition {
  FieldPtr field;
  int n = 0;
  std::vector<std::uint32_t> id;  // packed log g -> class number
  std::vector<NilpotentMatrix> rep_log;
  std::vector<UnipotentMatrix> reps;
  std::vector<std::uint64_t> sizes;

  std::size_t count() const { return sizes.size(); }
  std::uint32_t class_of(const UnipotentMatrix& g) const { return id[log_unipotent(g).pack()]; }
};

// Representatives have the fewest nonzero coordinates, ties broken by the
// packed index; classes are listed in that order.
inline ClassPartition enumerate_classes(const FieldPtr& F, int n, std::uint64_t budget) {
  const PackedLayout L(F, n);
  auto P = partition_space(L, conjugation_generators(*F, n), budget);
  const std::size_t m = P.size.size();
  std::vector<int> best_w(m, INT_MAX);
  std::vector<std::uint64_t> best(m, 0);
  std::vector<std::uint32_t> dg(L.coords(), 0);
  int weight = 0;
  for (std::uint64_t x = 0; x < P.id.size(); ++x) {
    const auto c = P.id[x];
    if (weight < best_w[c]) {
      best_w[c] = weight;
      best[c] = x;
    }
    // odometer step
    for (int k = 0; k < L.coords(); ++k) {
      if (dg[k] == 0) ++weight;
      if (++dg[k] < L.q()) break;
      dg[k] = 0;
      --weight;
    }
  }
  std::vector<std::uint32_t> order(m);
  for (std::uint32_t c = 0; c < m; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::pair(best_w[a], best[a]) < std::pair(best_w[b], best[b]);
  });
  std::vector<std::uint32_t> rank(m);
  for (std::uint32_t r = 0; r < m; ++r) rank[order[r]] = r;
  ClassPartition C;
  C.field = F;
  C.n = n;
  for (auto c : order) {
    C.rep_log.push_back(L.unpack<Shape::nilpotent>(best[c]));
    C.reps.push_back(exp_nilpotent(C.rep_log.back()));
    C.sizes.push_back(P.size[c]);
  }
  C.id = std::move(P.id);
  for (auto& x : C.id) x = rank[x];
  return C;
}

// ---- Kirillov orbit sums ----

// chi(exp a) = q^{-dim/2} sum_{f in orbit} theta(f(a)).
inline CycloValue kirillov_value(const OrbitDescriptor& o, const UnipotentMatrix& g) {
  detail::require(o.materialized, "kirillov_value: orbit not materialized");
  const Field& F = g.F();
  const PackedLayout L(g.field(), g.n());
  const NilpotentMatrix a = log_unipotent(g);
  std::vector<std::pair<int, Elem>> sup;
  for (int k = 0; k < L.coords(); ++k)
    if (!a.coord(k).is_zero()) sup.emplace_back(k, a.coord(k));
  std::vector<std::int64_t> counts(F.p(), 0);
  for (auto idx : o.elements) {
    Elem s = F.zero();
    for (auto [k, v] : sup) s = F.add(s, F.mul(Elem{L.digit(idx, k)}, v));
    ++counts[F.trace(s)];
  }
  return CycloValue::from_residue_counts(F.p(), F.q(), counts).scaled_by_q_power(-o.dim / 2);
}

// Kirillov values of many orbits at a fixed list of points exp(a_k).
// Points are grouped by support; per group the orbit is projected onto the
// support and either summed directly or Fourier-transformed over F_q^|S|.
class KirillovBatch {
 public:
  KirillovBatch(FieldPtr F, int n, const std::vector<NilpotentMatrix>& points)
      : F_(std::move(F)), L_(F_, n), npoints_(points.size()) {
    std::map<std::vector<int>, std::size_t> where;
    for (std::size_t t = 0; t < points.size(); ++t) {
      std::vector<int> pos;
      std::uint64_t bin = 0, w = 1;
      for (int k = 0; k < L_.coords(); ++k)
        if (!points[t].coord(k).is_zero()) pos.push_back(k);
      for (int k : pos) {
        bin += points[t].coord(k).v * w;
        w *= F_->q();
      }
      auto [it, fresh] = where.try_emplace(pos, groups_.size());
      if (fresh) groups_.push_back({pos, {}, {}});
      groups_[it->second].members.push_back(t);
      groups_[it->second].bins.push_back(bin);
    }
  }

  std::size_t size() const { return npoints_; }

  std::vector<CycloValue> values(std::span<const std::uint64_t> elems, int dim) const {
    const Field& F = *F_;
    const int p = F.p();
    const std::uint64_t q = F.q();
    std::vector<CycloValue> out(npoints_);
    std::vector<std::vector<std::int64_t>> hist(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g) hist[g].assign(ipow(q, groups_[g].pos.size()), 0);
    std::vector<std::uint32_t> dg(L_.coords());
    for (auto idx : elems) {
      L_.decode(idx, dg.data());
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        std::uint64_t b = 0;
        const auto& pos = groups_[g].pos;
        for (std::size_t k = pos.size(); k-- > 0;) b = b * q + dg[pos[k]];
        ++hist[g][b];
      }
    }
    std::vector<std::int64_t> counts(p);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const auto& G = groups_[g];
      const std::size_t s = G.pos.size();
      const std::uint64_t bins = hist[g].size();
      const double direct = static_cast<double>(bins) * G.members.size() * std::max<std::size_t>(s, 1);
      const double fourier = static_cast<double>(s) * bins * q * p;
      if (direct <= fourier) {
        for (std::size_t t = 0; t < G.members.size(); ++t) {
          std::fill(counts.begin(), counts.end(), 0);
          const auto ad = digits(G.bins[t], s, q);
          for (std::uint64_t b = 0; b < bins; ++b) {
            if (hist[g][b] == 0) continue;
            std::uint64_t x = b;
            Elem v = F.zero();
            for (std::size_t k = 0; k < s; ++k, x /= q)
              v = F.add(v, F.mul(Elem{static_cast<std::uint32_t>(x % q)}, Elem{ad[k]}));
            counts[F.trace(v)] += hist[g][b];
          }
          out[G.members[t]] = CycloValue::from_residue_counts(p, q, counts).scaled_by_q_power(-dim / 2);
        }
      } else {
        const auto A = fourier_counts(hist[g], s);
        for (std::size_t t = 0; t < G.members.size(); ++t) {
          std::span<const std::int64_t> c(A.data() + G.bins[t] * p, p);
          out[G.members[t]] = CycloValue::from_residue_counts(p, q, c).scaled_by_q_power(-dim / 2);
        }
      }
    }
    return out;
  }

 private:
  struct Group {
    std::vector<int> pos;
    std::vector<std::size_t> members;
    std::vector<std::uint64_t> bins;  // point coordinates on pos, packed
  };

  static std::uint64_t ipow(std::uint64_t q, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= q;
    return r;
  }
  static std::vector<std::uint32_t> digits(std::uint64_t x, std::size_t s, std::uint64_t q) {
    std::vector<std::uint32_t> d(s);
    for (std::size_t k = 0; k < s; ++k, x /= q) d[k] = static_cast<std::uint32_t>(x % q);
    return d;
  }

  // A[a][t] = #{xi : Tr(sum_k xi_k a_k) = t}, weighted by the histogram.
  std::vector<std::int64_t> fourier_counts(const std::vector<std::int64_t>& hist, std::size_t s) const {
    const Field& F = *F_;
    const int p = F.p();
    const std::uint64_t q = F.q();
    const std::uint64_t bins = hist.size();
    std::vector<std::int64_t> A(bins * p, 0), B(bins * p);
    for (std::uint64_t b = 0; b < bins; ++b) A[b * p] = hist[b];
    std::vector<int> tr(q * q);
    for (std::uint32_t x = 0; x < q; ++x)
      for (std::uint32_t y = 0; y < q; ++y) tr[x * q + y] = F.trace(F.mul(Elem{x}, Elem{y}));
    std::uint64_t w = 1;
    for (std::size_t k = 0; k < s; ++k, w *= q) {
      std::fill(B.begin(), B.end(), 0);
      for (std::uint64_t base = 0; base < bins; ++base) {
        if (base / w % q != 0) continue;
        for (std::uint64_t a = 0; a < q; ++a) {
          std::int64_t* dst = B.data() + (base + a * w) * p;
          for (std::uint64_t x = 0; x < q; ++x) {
            const std::int64_t* src = A.data() + (base + x * w) * p;
            const int sh = tr[x * q + a];
            for (int t = 0; t < p; ++t) dst[(t + sh) % p] += src[t];
          }
        }
      }
      std::swap(A, B);
    }
    return A;
  }

  FieldPtr F_;
  PackedLayout L_;
  std::size_t npoints_;
  std::vector<Group> groups_;
};

// ---- closed forms ----

struct SupportEntry {
  DecoratedSubset D;
  ClassDescriptor C;
  int m = 0;           // m_D
  bool d1 = false;     // D contains D_1(d)
};

namespace detail {

inline CycloValue closed_value(const LinearForm& f, const SupportEntry& e) {
  return theta_f(f, e_of(f.field(), e.D)).scaled_by_q_power(e.m);
}

}  // namespace detail

// d of a form covered by the subregular closed form: type 1, or type 3
// with xi_{n1,n0+1} and xi_{n1+1,n0+2} both nonzero (then d = n1). The
// remaining type-3 forms and type 2 have basic support.
inline int subregular_d_of(const LinearForm& f) {
  const auto tag = match_subregular_canonical(f);
  if (!tag) throw InvalidArgument("form is not a subregular canonical form");
  if (tag->type == 1) return tag->d;
  const int n = f.n(), d = n1_of(n);
  if (tag->type == 3 && tag->variant == 'a' && !f.at(d + 1, n - d + 1).is_zero()) return d;
  throw Unsupported("subregular closed form covers type 1 and type 3 with xi_{d,n-d}, xi_{d+1,n-d+1} nonzero");
}

// K_reg: the classes K_D(phi) over regular decorated subsets.
class RegularSupport {
 public:
  RegularSupport(FieldPtr F, int n) : F_(std::move(F)), n_(n) {
    for (const auto& S : regular_subsets(n)) {
      const int m = m_regular(n, S);
      for (auto& D : all_decorations(n, S, *F_)) entries_.push_back({D, make_class(F_, D), m, false});
    }
  }

  int n() const { return n_; }
  const std::vector<SupportEntry>& entries() const { return entries_; }

  std::optional<std::size_t> locate(const UnipotentMatrix& g) const {
    for (std::size_t t = 0; t < entries_.size(); ++t)
      if (class_membership(g, entries_[t].C)) return t;
    return std::nullopt;
  }

  CycloValue value(const LinearForm& f, std::optional<std::size_t> where) const {
    check(f);
    if (!where) return cyclo_zero(f.F());
    return detail::closed_value(f, entries_.at(*where));
  }
  CycloValue value(const LinearForm& f, const UnipotentMatrix& g) const { return value(f, locate(g)); }

  void check(const LinearForm& f) const {
    detail::require(f.n() == n_, "regular character: dimension mismatch");
    detail::require(is_regular_canonical(f).has_value(), "regular character: form is not a regular canonical form");
  }

 private:
  FieldPtr F_;
  int n_;
  std::vector<SupportEntry> entries_;
};

inline CycloValue regular_value(const LinearForm& f, const UnipotentMatrix& g) {
  return RegularSupport(f.field(), f.n()).value(f, g);
}

// Candidate classes of K_f for one d: every d-subregular (D, phi), one entry
// per distinct class. The filter (dop_usl) depends on f and is applied in
// admits().
class SubregularSupport {
 public:
  SubregularSupport(FieldPtr F, int n, int d) : F_(std::move(F)), n_(n), d_(d) {
    const auto cand = subregular_sets(n, d);
    std::map<std::string, std::size_t> seen;
    auto add = [&](const RootSet& core, bool d1) {
      for (const auto& dp : regular_subsets(n)) {
        if (!admissible_dprime(n, d, dp, core)) continue;
        RootSet S = core;
        S.insert(dp.begin(), dp.end());
        const int m = d1 ? intersection_size(regular_roots(n, S), phi_d(n, d)) + n - 2 * d - 1
                         : intersection_size(regular_roots(n, S), phi_reg(n)) - 1;
        for (auto& D : all_decorations(n, S, *F_)) {
          ClassDescriptor C = make_class(F_, D);
          if (d1 && (!C.subregular || C.sreg.d != d)) throw std::logic_error("subregular support: misclassified D");
          if (!seen.try_emplace(class_key(C), entries_.size()).second) continue;
          entries_.push_back({D, std::move(C), m, d1});
        }
      }
    };
    for (const auto& c : cand.d1) add(c, true);
    for (const auto& c : cand.d0) add(c, false);
  }

  int n() const { return n_; }
  int d() const { return d_; }
  const std::vector<SupportEntry>& entries() const { return entries_; }

  std::optional<std::size_t> locate(const UnipotentMatrix& g) const {
    for (std::size_t t = 0; t < entries_.size(); ++t)
      if (class_membership(g, entries_[t].C)) return t;
    return std::nullopt;
  }

  // xi_{d,n-d} phi(d+1,d) = xi_{d+1,n-d+1} phi(n-d+1,n-d) for D_1 classes.
  bool admits(const LinearForm& f, std::size_t t) const {
    const auto& e = entries_.at(t);
    if (!e.d1) return true;
    const Field& F = f.F();
    const int n = n_, d = d_;
    return F.mul(f.at(d, n - d), e.D.at({d + 1, d})) == F.mul(f.at(d + 1, n - d + 1), e.D.at({n - d + 1, n - d}));
  }

  std::vector<const SupportEntry*> support(const LinearForm& f) const {
    check(f);
    std::vector<const SupportEntry*> out;
    for (std::size_t t = 0; t < entries_.size(); ++t)
      if (admits(f, t)) out.push_back(&entries_[t]);
    return out;
  }

  CycloValue value(const LinearForm& f, std::optional<std::size_t> where) const {
    check(f);
    if (!where || !admits(f, *where)) return cyclo_zero(f.F());
    return detail::closed_value(f, entries_[*where]);
  }
  CycloValue value(const LinearForm& f, const UnipotentMatrix& g) const { return value(f, locate(g)); }

  void check(const LinearForm& f) const {
    detail::require(f.n() == n_, "subregular character: dimension mismatch");
    if (subregular_d_of(f) != d_) throw InvalidArgument("subregular character: form has a different d");
  }

 private:
  FieldPtr F_;
  int n_, d_;
  std::vector<SupportEntry> entries_;
};


inline std::vector<ClassDescriptor> subregular_support(const LinearForm& f) {
  const SubregularSupport S(f.field(), f.n(), subregular_d_of(f));
  std::vector<ClassDescriptor> out;
  for (auto* e : S.support(f)) out.push_back(e->C);
  return out;
}

inline CycloValue subregular_value(const LinearForm& f, const UnipotentMatrix& g) {
  return SubregularSupport(f.field(), f.n(), subregular_d_of(f)).value(f, g);
}

// ---- induced-character oracle ----

namespace detail {

template <Shape S>
TriArray<S> restrict_to(const TriArray<S>& a, const std::vector<int>& idx) {
  const int m = static_cast<int>(idx.size());
  TriArray<S> r(a.field(), m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j < i; ++j) {
      if constexpr (S == Shape::form) r.set(j, i, a.at(idx[j - 1], idx[i - 1]));
      else r.set(i, j, a.at(idx[i - 1], idx[j - 1]));
    }
  return r;
}

}  // namespace detail

// One admissible coset term: k = h^{-1} g h in the inducing subgroup.
struct MackeyTerm {
  Elem a;                 // k_{n-1,1} (d = 1) or k_{n,1} (d > 1)
  Elem b;                 // k_{n,n-1} (d = 1 only)
  UnipotentMatrix small;  // k on the smaller index set
};

// Type-1 subregular character as an induced character:
//   d = 1: from P_n x| G~_{n-2}, cosets 1 + sum_{2<=j<=n-2} c_j e_{n-1,j};
//   d > 1: from P_n x| G_{n-2}, cosets 1 + sum_{2<=j<=n-1} c_j e_{n,j}.
class MackeyCharacter {
 public:
  explicit MackeyCharacter(const LinearForm& f, std::uint64_t table_budget = 1u << 20)
      : f_(f), n_(f.n()) {
    const auto tag = match_subregular_canonical(f);
    if (!tag || tag->type != 1) throw Unsupported("mackey: only type-1 subregular forms");
    d_ = tag->d;
    const int n = n_;
    if (d_ == 1) {
      for (int j = 2; j <= n - 2; ++j) idx_.push_back(j);
      idx_.push_back(n);
      for (int j = 2; j <= n - 2; ++j) coset_roots_.push_back({n - 1, j});
    } else {
      for (int j = 2; j <= n - 1; ++j) idx_.push_back(j);
      for (int j = 2; j <= n - 1; ++j) coset_roots_.push_back({n, j});
    }
    const LinearForm fs = detail::restrict_to(f, idx_);
    std::function<CycloValue(const UnipotentMatrix&)> eval;
    if (d_ > 1) {
      auto inner = std::make_shared<MackeyCharacter>(fs, table_budget);
      eval = [inner](const UnipotentMatrix& x) { return inner->value(x); };
    } else if (is_regular_canonical(fs)) {
      auto reg = std::make_shared<RegularSupport>(fs.field(), fs.n());
      eval = [reg, fs](const UnipotentMatrix& x) { return reg->value(fs, x); };
    } else {
      auto orb = std::make_shared<OrbitDescriptor>(orbit_of(fs, table_budget, true));
      eval = [orb](const UnipotentMatrix& x) { return kirillov_value(*orb, x); };
    }
    const PackedLayout Ls(f.field(), static_cast<int>(idx_.size()));
    if (Ls.packable() && Ls.space_size() <= table_budget) {
      table_.reserve(Ls.space_size());
      for (std::uint64_t x = 0; x < Ls.space_size(); ++x) table_.push_back(eval(Ls.unpack<Shape::unipotent>(x)));
    } else {
      eval_ = std::move(eval);
    }
  }

  int d() const { return d_; }
  std::uint64_t coset_count() const {
    std::uint64_t c = 1;
    for (std::size_t t = 0; t < coset_roots_.size(); ++t) c *= f_.F().q();
    return c;
  }

  // Conjugates h^{-1} g h lying in the inducing subgroup; independent of f
  // beyond (n, d).
  std::vector<MackeyTerm> terms(const UnipotentMatrix& g) const {
    detail::require(g.n() == n_, "mackey: dimension mismatch");
    const Field& F = g.F();
    const int n = n_;
    std::vector<MackeyTerm> out;
    std::vector<std::uint32_t> c(coset_roots_.size(), 0);
    while (true) {
      UnipotentMatrix h(g.field(), n);
      for (std::size_t t = 0; t < c.size(); ++t) h.set(coset_roots_[t].i, coset_roots_[t].j, Elem{c[t]});
      const UnipotentMatrix k = group_mul(group_inv(h), group_mul(g, h));
      bool inside = true;
      for (auto r : coset_roots_)
        if (!k.at(r.i, r.j).is_zero()) inside = false;
      if (inside) {
        if (d_ == 1) out.push_back({k.at(n - 1, 1), k.at(n, n - 1), detail::restrict_to(k, idx_)});
        else out.push_back({k.at(n, 1), F.zero(), detail::restrict_to(k, idx_)});
      }
      std::size_t t = 0;
      while (t < c.size() && ++c[t] == F.q()) c[t++] = 0;
      if (t == c.size()) break;
    }
    return out;
  }

  CycloValue value(const std::vector<MackeyTerm>& terms) const {
    const Field& F = f_.F();
    const int n = n_;
    CycloValue sum = cyclo_zero(F);
    for (const auto& t : terms) {
      CycloValue v = small_value(t.small);
      if (d_ == 1) v *= theta(F, F.add(F.mul(f_.at(1, n - 1), t.a), F.mul(f_.at(n - 1, n), t.b)));
      else v *= theta(F, F.mul(f_.at(1, n), t.a));
      sum += v;
    }
    return sum;
  }

  CycloValue value(const UnipotentMatrix& g) const { return value(terms(g)); }

 private:
  CycloValue small_value(const UnipotentMatrix& x) const {
    if (!table_.empty()) return table_[x.pack()];
    return eval_(x);
  }

  LinearForm f_;
  int n_;
  int d_ = 0;
  std::vector<int> idx_;
  std::vector<Root> coset_roots_;
  std::vector<CycloValue> table_;
  std::function<CycloValue(const UnipotentMatrix&)> eval_;
};

inline CycloValue mackey_value(const LinearForm& f, const UnipotentMatrix& g) {
  return MackeyCharacter(f).value(g);
}

// ---- character tables ----

struct CharacterTable {
  FieldPtr field;
  int n = 0;
  ClassPartition classes;
  std::vector<OrbitDescriptor> orbits;          // element lists dropped
  std::vector<std::vector<CycloValue>> values;  // [row][class]
};

// Kirillov table over all orbits, or the listed orbit positions of the
// catalog order.
inline CharacterTable character_table(const FieldPtr& F, int n, std::uint64_t budget, unsigned threads = 1,
                                      std::optional<std::vector<std::size_t>> rows = std::nullopt) {
  CharacterTable T;
  T.field = F;
  T.n = n;
  T.classes = enumerate_classes(F, n, budget);
  OrbitCatalog cat = enumerate_all_orbits(F, n, budget, true);
  std::vector<std::size_t> pick;
  if (rows) pick = *rows;
  else
    for (std::size_t r = 0; r < cat.orbits.size(); ++r) pick.push_back(r);
  const KirillovBatch K(F, n, T.classes.rep_log);
  T.values.resize(pick.size());
  parallel_for(pick.size(), threads, [&](std::size_t r) {
    const auto& o = cat.orbits.at(pick[r]);
    T.values[r] = K.values(o.elements, o.dim);
  });
  const int m = mu(n);
  for (auto& row : T.values)
    for (auto& v : row)
      if (v.q_exponent() > m) throw std::logic_error("character value exceeds the q-exponent bound");
  for (auto r : pick) {
    OrbitDescriptor o = cat.orbits[r];
    o.elements.clear();
    o.elements.shrink_to_fit();
    o.materialized = false;
    T.orbits.push_back(std::move(o));
  }
  return T;
}

// (1/|G|) sum over classes |K| u(K) conj(v(K)); must be integral.
inline CycloValue inner_product(const ClassPartition& C, std::span<const CycloValue> u,
                                std::span<const CycloValue> v) {
  detail::require(u.size() == C.count() && v.size() == C.count(), "inner_product: length mismatch");
  const Field& F = *C.field;
  CycloValue s = cyclo_zero(F);
  for (std::size_t k = 0; k < C.count(); ++k)
    s += cyclo_integer(F, static_cast<std::int64_t>(C.sizes[k])) * u[k] * v[k].conj();
  s = s.scaled_by_q_power(-num_roots(C.n));
  if (s.q_exponent() != 0) throw std::logic_error("inner product is not integral: " + s.to_string());
  return s;
}

}  // namespace unitri
