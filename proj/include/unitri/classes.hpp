#pragma once

// Conjugacy classes K_D(phi). Basic subsets use the minor equations
// Delta^{R_D(i,j)}(g) = Delta^{R_D(i,j)}(x_D(phi)), (i,j) in R(D).
// Subregular subsets containing D_1(d) use the ideal generated by
// y_alpha - c_alpha, y_beta - c_beta, gamma - c_0, alpha_ij, beta_ij,
// Delta_ij - c_ij and Delta_ij over R(D'') \ D''.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "unitri/error.hpp"
#include "unitri/matrix.hpp"
#include "unitri/packed.hpp"
#include "unitri/roots.hpp"

namespace unitri {

using PairSet = std::vector<std::pair<int, int>>;

// ---- basic classes ----

struct BasicEquations {
  std::vector<PairSet> X;
  std::vector<Elem> target;
};

inline BasicEquations basic_equations(const FieldPtr& F, const DecoratedSubset& D) {
  const RootSet S = D.roots();
  detail::require(is_basic(S), "basic equations: D is not basic");
  const UnipotentMatrix x = x_of(F, D);
  BasicEquations eq;
  for (auto r : regular_roots(D.n, S)) {
    eq.X.push_back(r_d_of(S, r.i, r.j));
    eq.target.push_back(delta_x(x, eq.X.back()));
  }
  return eq;
}

inline bool satisfies(const BasicEquations& eq, const UnipotentMatrix& g) {
  for (std::size_t t = 0; t < eq.X.size(); ++t)
    if (delta_x(g, eq.X[t]) != eq.target[t]) return false;
  return true;
}

inline bool basic_class_membership(const UnipotentMatrix& g, const DecoratedSubset& D) {
  detail::require(g.n() == D.n, "membership: dimension mismatch");
  return satisfies(basic_equations(g.field(), D), g);
}

// ---- subregular polynomials ----

struct SregData {
  int n = 0, d = 0;
  bool third_type = false;  // d = n1, n even
  bool drop_gamma = false;  // literal third-type ideal without gamma - c0; not a single class
  RootSet D, dplus, dprime, ddprime;
  std::optional<int> m;
};

inline SregData sreg_data(int n, const RootSet& D) {
  const auto c = classify_subset(n, D);
  detail::require(c.kind == SubsetKind::d_subregular && c.variant == Variant::d1,
                  "subregular classes need a d-subregular D containing D_1(d)");
  const auto s = split_subregular(n, D);
  SregData r{n, c.d, c.third_type, false, D, s.dplus, s.dprime, s.ddprime, s.m};
  return r;
}

struct SregValues {
  Elem y_alpha, y_beta, gamma;
  std::map<Root, Elem> alpha, beta;  // keyed by (i, j) in D^+
  std::map<Root, Elem> delta;        // Delta_ij over D' and R(D'') \ D''
};

inline Elem alpha_poly(const UnipotentMatrix& g, int d, int m, int j) {
  const Field& F = g.F();
  const int n = g.n();
  Elem s = F.zero();
  for (int l = n - m + 1; l <= n - d; ++l) s = F.add(s, F.mul(g.at(n - d + 1, l), g.at(l, j)));
  return s;
}

inline Elem beta_poly(const UnipotentMatrix& g, int d, int m, int i) {
  const Field& F = g.F();
  Elem s = F.zero();
  for (int l = d + 1; l <= m; ++l) s = F.add(s, F.mul(g.at(i, l), g.at(l, d)));
  return s;
}

inline Elem gamma_poly(const UnipotentMatrix& g, int d) {
  const Field& F = g.F();
  const int n = g.n();
  Elem s = F.zero();
  for (int l = d + 1; l <= n - d; ++l) s = F.add(s, F.mul(g.at(n - d + 1, l), g.at(l, d)));
  return s;
}

inline SregValues sreg_polynomials(const UnipotentMatrix& g, const SregData& S) {
  detail::require(g.n() == S.n, "sreg polynomials: dimension mismatch");
  const int n = S.n, d = S.d;
  SregValues v;
  v.y_alpha = g.at(n - d + 1, n - d);
  v.y_beta = g.at(d + 1, d);
  v.gamma = gamma_poly(g, d);
  for (auto r : S.dplus) {
    v.alpha[r] = alpha_poly(g, d, *S.m, r.j);
    v.beta[r] = beta_poly(g, d, *S.m, r.i);
  }
  for (auto r : regular_roots(n, S.ddprime))
    if (S.dprime.contains(r) || !S.ddprime.contains(r)) v.delta[r] = delta_x(g, r_d_of(S.ddprime, r.i, r.j));
  return v;
}

// ---- class descriptors ----

struct SregConstants {
  Elem c_alpha, c_beta, c0;
  std::map<Root, Elem> c;  // over D'
  friend bool operator==(const SregConstants&, const SregConstants&) = default;
};

struct ClassDescriptor {
  DecoratedSubset D;
  SubsetClassification kind;
  bool subregular = false;  // D contains D_1(d)
  SregData sreg;
  SregConstants constants;
  BasicEquations basic;
  RootSet A, B;           // subregular case only
  int size_exponent = 0;  // |class| = q^size_exponent
};

inline SregConstants sreg_constants(const FieldPtr& F, const DecoratedSubset& D, const SregData& S) {
  const UnipotentMatrix x = x_of(F, D);
  const int n = S.n, d = S.d;
  SregConstants c;
  c.c_alpha = D.at({n - d + 1, n - d});
  c.c_beta = D.at({d + 1, d});
  c.c0 = gamma_poly(x, d);
  for (auto r : S.dprime) c.c[r] = delta_x(x, r_d_of(S.ddprime, r.i, r.j));
  return c;
}

// Label sets: A indexes the centralizer equations, B the ideal generators.
inline std::pair<RootSet, RootSet> class_label_sets(const SregData& S) {
  const int n = S.n, d = S.d;
  RootSet A, B;
  for (auto [i, j] : S.dplus) {
    A.insert({n - d + 1, i});
    A.insert({i, d + 1});
  }
  // Without (n-d, d) and (n-d+1, d+1) in D the equations (alpha~) and
  // (beta~) read y_{n-d,j} = 0 and y_{i,d+1} = 0; label them by that
  // variable so they merge with (delta) instead of being counted twice.
  const bool big = S.D.contains({n - d, d});
  for (int j = 1; j < d; ++j) A.insert(big ? Root{n - d + 1, j} : Root{n - d, j});
  for (int i = n - d + 2; i <= n; ++i) A.insert(big ? Root{i, d} : Root{i, d + 1});
  if (!S.drop_gamma) A.insert({n - d, d});
  const RootSet R = regular_roots(n, S.D);
  RootSet lines;  // column i and row j of every (i, j) in D
  for (auto [i, j] : S.D) {
    for (int k = i + 1; k <= n; ++k) lines.insert({k, i});
    for (int l = 1; l < j; ++l) lines.insert({j, l});
  }
  for (auto r : lines)
    if (R.contains(r) && !S.D.contains(r)) A.insert(r);

  B.insert({n - d + 1, n - d});
  B.insert({d + 1, d});
  if (!S.drop_gamma) B.insert({n - d + 1, d + 1});
  for (auto [i, j] : S.dplus) {
    B.insert({n - d + 1, i});
    B.insert({i, d + 1});
  }
  for (auto r : regular_roots(n, S.ddprime)) B.insert(r);
  return {A, B};
}

// Codimension of the centralizer of x. The condition g (x - 1) = (x - 1) g
// is linear in the entries of g, so |class of x| = q^rank.
inline int centralizer_codim(const UnipotentMatrix& x) {
  const Field& F = x.F();
  const int n = x.n(), N = num_roots(n);
  auto e = [&](int i, int j) { return i > j ? x.at(i, j) : F.zero(); };
  std::vector<std::vector<Elem>> rows;
  for (int k = 0; k < N; ++k) {
    const Root ij = root_at(n, k);
    std::vector<Elem> row(N, F.zero());
    for (int t = 0; t < N; ++t) {
      const Root v = root_at(n, t);
      Elem c = F.zero();
      if (v.i == ij.i) c = F.add(c, e(v.j, ij.j));
      if (v.j == ij.j) c = F.sub(c, e(ij.i, v.i));
      row[t] = c;
    }
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < N && rank < N; ++col) {
    int piv = -1;
    for (int r = rank; r < N && piv < 0; ++r)
      if (!rows[r][col].is_zero()) piv = r;
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    const Elem inv = F.inv(rows[rank][col]);
    for (auto& z : rows[rank]) z = F.mul(z, inv);
    for (int r = 0; r < N; ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const Elem f = rows[r][col];
      for (int t = 0; t < N; ++t) rows[r][t] = F.sub(rows[r][t], F.mul(f, rows[rank][t]));
    }
    ++rank;
  }
  return rank;
}

inline ClassDescriptor make_class(const FieldPtr& F, const DecoratedSubset& D) {
  validate(*F, D);
  ClassDescriptor C;
  C.D = D;
  const RootSet S = D.roots();
  C.kind = classify_subset(D.n, S);
  if (C.kind.kind == SubsetKind::d_subregular && C.kind.variant == Variant::d1) {
    C.subregular = true;
    C.sreg = sreg_data(D.n, S);
    C.constants = sreg_constants(F, D, C.sreg);
    std::tie(C.A, C.B) = class_label_sets(C.sreg);
    C.size_exponent = static_cast<int>(C.A.size());
  } else {
    detail::require(is_basic(S), "class: D is neither basic nor subregular with D_1(d)");
    C.basic = basic_equations(F, D);
    C.size_exponent = centralizer_codim(x_of(F, D));
  }
  return C;
}

inline bool sreg_class_membership(const UnipotentMatrix& g, const ClassDescriptor& C) {
  detail::require(C.subregular, "sreg membership: descriptor is not subregular");
  const auto& S = C.sreg;
  const int n = S.n, d = S.d;
  const Field& F = g.F();
  if (g.at(n - d + 1, n - d) != C.constants.c_alpha) return false;
  if (g.at(d + 1, d) != C.constants.c_beta) return false;
  if (!S.drop_gamma && gamma_poly(g, d) != C.constants.c0) return false;
  for (auto r : S.dplus) {
    if (!alpha_poly(g, d, *S.m, r.j).is_zero()) return false;
    if (!beta_poly(g, d, *S.m, r.i).is_zero()) return false;
  }
  for (auto r : regular_roots(n, S.ddprime)) {
    const Elem v = delta_x(g, r_d_of(S.ddprime, r.i, r.j));
    if (S.dprime.contains(r)) {
      if (v != C.constants.c.at(r)) return false;
    } else if (!S.ddprime.contains(r)) {
      if (!v.is_zero()) return false;
    }
  }
  (void)F;
  return true;
}

inline bool class_membership(const UnipotentMatrix& g, const ClassDescriptor& C) {
  return C.subregular ? sreg_class_membership(g, C) : satisfies(C.basic, g);
}

// Key identifying the class V(J): the same key means the same class.
inline std::string class_key(const ClassDescriptor& C) {
  std::string k;
  auto put = [&k](int x) { k += std::to_string(x) + ","; };
  if (C.subregular) {
    k = "s:";
    put(C.sreg.d);
    for (auto r : C.sreg.ddprime) {
      put(r.i);
      put(r.j);
    }
    k += "|";
    put(C.constants.c_alpha.v);
    put(C.constants.c_beta.v);
    if (!C.sreg.drop_gamma) put(C.constants.c0.v);
    for (auto& [r, v] : C.constants.c) put(v.v);
  } else {
    k = "b:";
    for (auto& [r, v] : C.D.phi) {
      put(r.i);
      put(r.j);
      put(v.v);
    }
  }
  return k;
}

// ---- centralizer ----

// The linear equations (alpha), (beta), (alpha~), (beta~), (gamma), (delta)
// of the centralizer of x_D(phi), with a_ij = phi(i, j) (zero off D).
class CentralizerSystem {
 public:
  explicit CentralizerSystem(const DecoratedSubset& Dphi) : D_(Dphi), S_(sreg_data(Dphi.n, Dphi.roots())) {
    const RootSet R = regular_roots(S_.n, S_.D);
    for (auto [i, j] : S_.D) {
      for (int k = i + 1; k <= S_.n; ++k) delta_.insert({k, i});
      for (int l = 1; l < j; ++l) delta_.insert({j, l});
    }
    std::erase_if(delta_, [&](Root r) { return !R.contains(r) || S_.D.contains(r); });
  }

  const SregData& data() const { return S_; }

  bool check(const UnipotentMatrix& g) const {
    const Field& F = g.F();
    const int n = S_.n, d = S_.d;
    auto a = [&](int i, int j) { return D_.at({i, j}); };
    auto y = [&](int i, int j) { return i > j ? g.at(i, j) : F.zero(); };
    auto mul = [&](Elem x, Elem z) { return F.mul(x, z); };
    const Elem aA = a(n - d + 1, n - d), aB = a(d + 1, d);
    for (auto [i, j] : S_.dplus) {
      if (mul(y(n - d + 1, i), a(i, j)) != mul(aA, y(n - d, j))) return false;
      if (mul(y(i, d + 1), aB) != mul(a(i, j), y(j, d))) return false;
    }
    for (int j = 1; j < d; ++j)
      if (!F.add(mul(aA, y(n - d, j)), mul(a(n - d + 1, d + 1), y(d + 1, j))).is_zero()) return false;
    for (int i = n - d + 2; i <= n; ++i)
      if (!F.add(mul(y(i, d + 1), aB), mul(y(i, n - d), a(n - d, d))).is_zero()) return false;
    const Elem lhs = F.add(mul(y(n - d + 1, n - d), a(n - d, d)), mul(y(n - d + 1, d + 1), aB));
    const Elem rhs = F.add(mul(aA, y(n - d, d)), mul(a(n - d + 1, d + 1), y(d + 1, d)));
    if (lhs != rhs) return false;
    for (auto r : delta_)
      if (!y(r.i, r.j).is_zero()) return false;
    return true;
  }

 private:
  DecoratedSubset D_;
  SregData S_;
  RootSet delta_;
};

inline bool centralizer_check(const UnipotentMatrix& g, const DecoratedSubset& Dphi) {
  return CentralizerSystem(Dphi).check(g);
}

// g x_D(phi) = x_D(phi) g, read off the sparse part of x_D(phi).
inline bool commutes_with(const UnipotentMatrix& g, const DecoratedSubset& Dphi) {
  const Field& F = g.F();
  const int n = g.n();
  for (int i = 2; i <= n; ++i)
    for (int j = 1; j < i; ++j) {
      Elem ge = F.zero(), eg = F.zero();
      for (auto& [r, v] : Dphi.phi) {
        if (r.j == j) ge = F.add(ge, F.mul(g.entry(i, r.i), v));
        if (r.i == i) eg = F.add(eg, F.mul(v, g.entry(r.j, j)));
      }
      if (ge != eg) return false;
    }
  return true;
}

// ---- brute-force classes ----

// Conjugacy class of x by BFS over conjugation by x_rs(lambda); sorted.
inline std::vector<std::uint64_t> class_bfs(const UnipotentMatrix& x, std::uint64_t budget) {
  const PackedLayout L(x.field(), x.n());
  auto v = bfs_closure(L, conjugation_generators(x.F(), x.n()), L.pack(x), budget);
  std::sort(v.begin(), v.end());
  return v;
}

// ---- invariance ----

struct InvarianceReport {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> messages;  // first few failures
};

template <class Rng>
InvarianceReport invariance_suite(const FieldPtr& F, const DecoratedSubset& D, std::uint64_t trials, Rng& rng) {
  const ClassDescriptor C = make_class(F, D);
  detail::require(C.subregular, "invariance suite: D must contain D_1(d)");
  const UnipotentMatrix x0 = x_of(F, D);
  InvarianceReport rep;
  auto fail = [&](const std::string& m) {
    ++rep.failures;
    if (rep.messages.size() < 5) rep.messages.push_back(m);
  };
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++rep.trials;
    const UnipotentMatrix g = conjugate(random_unipotent(F, D.n, rng), x0);
    const UnipotentMatrix x = random_unipotent(F, D.n, rng);
    const UnipotentMatrix h = conjugate(x, g);
    if (!sreg_class_membership(h, C)) {
      fail("conjugate left the class");
      continue;
    }
    const SregValues a = sreg_polynomials(g, C.sreg), b = sreg_polynomials(h, C.sreg);
    if (a.y_alpha != b.y_alpha || a.y_beta != b.y_beta) fail("y_alpha or y_beta changed");
    if (a.gamma != b.gamma) fail("gamma changed");
    if (a.alpha != b.alpha) fail("alpha changed");
    if (a.beta != b.beta) fail("beta changed");
    if (a.delta != b.delta) fail("Delta changed");
  }
  return rep;
}

// ---- characteristic-matrix bridge ----

inline PairSet x_gamma(int n, int d) {
  PairSet X{{n - d + 1, d}};
  for (int i = d + 1; i < n - d + 1; ++i) X.emplace_back(i, i);
  return X;
}

inline PairSet x_alpha(int n, int d, int m, int j) {
  PairSet X{{n - d + 1, j}};
  for (int l = n - m + 1; l <= n - d; ++l) X.emplace_back(l, l);
  return X;
}

inline PairSet x_beta(int d, int m, int i) {
  PairSet X{{i, d}};
  for (int l = d + 1; l <= m; ++l) X.emplace_back(l, l);
  return X;
}

// X_d = {(n, 1), (n-1, 2), ..., (n-d+1, d)}.
inline PairSet x_antidiagonal(int n, int d) {
  PairSet X;
  for (int k = 1; k <= d; ++k) X.emplace_back(n - k + 1, k);
  return X;
}

// Sign s with poly(g) = s * M^X(2, g), fixed on random samples.
// Returns 0 if the samples disagree or never separate the sign.
template <class Poly, class Rng>
int calibrate_sign(const FieldPtr& F, int n, const PairSet& X, Poly poly, Rng& rng, int samples = 64) {
  int sign = 0;
  for (int t = 0; t < samples; ++t) {
    const UnipotentMatrix g = random_unipotent(F, n, rng);
    const Elem p = poly(g), m = charmat_coeff(X, 2, g);
    if (m.is_zero() && p.is_zero()) continue;
    int s;
    if (p == m) s = 1;
    else if (p == F->neg(m)) s = -1;
    else return 0;
    if (p == m && p == F->neg(m)) continue;  // characteristic 2
    if (sign != 0 && s != sign) return 0;
    sign = s;
  }
  return sign;
}

}  // namespace unitri
