#pragma once

// Triangular matrices over F_q: the group G_n of unipotent lower-triangular
// matrices, its Lie algebra of nilpotent lower-triangular matrices, and the
// dual space of strictly upper-triangular forms.
//
// All three share one storage layout: a vector of n(n-1)/2 field elements
// indexed by root position. A lower entry (i, j), i > j, lives at the
// position of the root (i, j); an upper form entry xi_{ij}, i < j, lives at
// the position of the root (j, i). With this layout the pairing
// f(x) = sum xi_{ji} x_{ij} is a coordinate-wise dot product.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "unitri/cyclo.hpp"
#include "unitri/error.hpp"
#include "unitri/field.hpp"

namespace unitri {

struct Root {
  int i = 0;
  int j = 0;

  int level() const { return i - j; }

  friend bool operator==(const Root&, const Root&) = default;
  // Level first, then column: the complete order on roots.
  friend std::strong_ordering operator<=>(const Root& a, const Root& b) {
    if (auto c = a.level() <=> b.level(); c != 0) return c;
    return a.j <=> b.j;
  }
};

inline int num_roots(int n) { return n * (n - 1) / 2; }

// Position of the root (i, j) in the level-then-column order.
inline int root_pos(int n, int i, int j) {
  const int u = i - j;
  return (u - 1) * n - u * (u - 1) / 2 + (j - 1);
}

inline Root root_at(int n, int k) {
  int u = 1;
  while (k >= n - u) {
    k -= n - u;
    ++u;
  }
  return {k + 1 + u, k + 1};
}

enum class Shape { unipotent, nilpotent, form };

template <Shape S>
class TriArray {
 public:
  TriArray() = default;
  TriArray(FieldPtr F, int n) : F_(std::move(F)), n_(n), v_(num_roots(n)) {
    detail::require(F_ != nullptr, "matrix: null field");
    detail::require(n >= 1, "matrix: n must be positive");
  }

  // Identity for the group, zero otherwise.
  static TriArray identity(FieldPtr F, int n) { return TriArray(std::move(F), n); }
  static TriArray zero(FieldPtr F, int n) { return TriArray(std::move(F), n); }

  int n() const { return n_; }
  const FieldPtr& field() const { return F_; }
  const Field& F() const { return *F_; }

  // Stored entry. Lower shapes take i > j, forms take i < j.
  Elem at(int i, int j) const { return v_[pos(i, j)]; }
  void set(int i, int j, Elem e) {
    detail::require(F_->contains(e), "matrix: element not in field");
    v_[pos(i, j)] = e;
  }

  // Full n x n matrix entry, 1-based, diagonal included.
  Elem entry(int i, int j) const {
    if (i == j) return S == Shape::unipotent ? F_->one() : F_->zero();
    if constexpr (S == Shape::form) {
      return i < j ? v_[root_pos(n_, j, i)] : F_->zero();
    } else {
      return i > j ? v_[root_pos(n_, i, j)] : F_->zero();
    }
  }

  std::span<const Elem> coords() const { return v_; }
  Elem& coord(int k) { return v_[k]; }
  Elem coord(int k) const { return v_[k]; }

  // Mixed-radix index over q in root order; requires q^{n(n-1)/2} < 2^64.
  std::uint64_t pack() const {
    std::uint64_t idx = 0;
    for (int k = static_cast<int>(v_.size()) - 1; k >= 0; --k) idx = idx * F_->q() + v_[k].v;
    return idx;
  }
  static TriArray unpack(FieldPtr F, int n, std::uint64_t idx) {
    TriArray a(std::move(F), n);
    const std::uint64_t q = a.F_->q();
    for (auto& e : a.v_) {
      e.v = static_cast<std::uint32_t>(idx % q);
      idx /= q;
    }
    return a;
  }

  // Entries that are nonzero, as roots (form entries reported as roots too).
  std::vector<Root> support() const {
    std::vector<Root> s;
    for (int k = 0; k < static_cast<int>(v_.size()); ++k)
      if (!v_[k].is_zero()) s.push_back(root_at(n_, k));
    return s;
  }

  friend bool operator==(const TriArray& a, const TriArray& b) {
    return a.n_ == b.n_ && a.v_ == b.v_ && (a.F_ == b.F_ || *a.F_ == *b.F_);
  }

 private:
  int pos(int i, int j) const {
    detail::require(1 <= std::min(i, j) && std::max(i, j) <= n_, "matrix: index out of range");
    if constexpr (S == Shape::form) {
      detail::require(i < j, "form: entry must be strictly upper");
      return root_pos(n_, j, i);
    } else {
      detail::require(i > j, "matrix: entry must be strictly lower");
      return root_pos(n_, i, j);
    }
  }

  FieldPtr F_;
  int n_ = 0;
  std::vector<Elem> v_;
};

using UnipotentMatrix = TriArray<Shape::unipotent>;
using NilpotentMatrix = TriArray<Shape::nilpotent>;
using LinearForm = TriArray<Shape::form>;

// Dense square matrix, 0-based, used internally for products and minors.
struct DenseMatrix {
  int n = 0;
  std::vector<Elem> a;

  DenseMatrix() = default;
  explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}
  Elem& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  Elem operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {

template <Shape S>
void require_compatible(const TriArray<S>& a, const auto& b) {
  require(a.n() == b.n(), "matrix: dimension mismatch");
  require_same_field(a.field(), b.field());
}

template <Shape S>
DenseMatrix to_dense(const TriArray<S>& m) {
  DenseMatrix d(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) d(i, j) = m.entry(i + 1, j + 1);
  return d;
}

inline DenseMatrix dense_mul(const Field& F, const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const Elem a = x(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) = F.add(r(i, j), F.mul(a, y(k, j)));
    }
  return r;
}

template <Shape S>
TriArray<S> from_dense_lower(FieldPtr F, const DenseMatrix& d) {
  TriArray<S> m(std::move(F), d.n);
  for (int i = 2; i <= d.n; ++i)
    for (int j = 1; j < i; ++j) m.set(i, j, d(i - 1, j - 1));
  return m;
}

// Determinant by Gaussian elimination.
inline Elem determinant(const Field& F, DenseMatrix m) {
  Elem det = F.one();
  for (int c = 0; c < m.n; ++c) {
    int piv = -1;
    for (int r = c; r < m.n; ++r)
      if (!m(r, c).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return F.zero();
    if (piv != c) {
      for (int j = 0; j < m.n; ++j) std::swap(m(c, j), m(piv, j));
      det = F.neg(det);
    }
    det = F.mul(det, m(c, c));
    const Elem inv = F.inv(m(c, c));
    for (int r = c + 1; r < m.n; ++r) {
      const Elem f = F.mul(m(r, c), inv);
      if (f.is_zero()) continue;
      for (int j = c; j < m.n; ++j) m(r, j) = F.sub(m(r, j), F.mul(f, m(c, j)));
    }
  }
  return det;
}

}  // namespace detail

inline UnipotentMatrix group_mul(const UnipotentMatrix& g, const UnipotentMatrix& h) {
  detail::require_compatible(g, h);
  const Field& F = g.F();
  const int n = g.n();
  UnipotentMatrix r(g.field(), n);
  for (int i = 2; i <= n; ++i)
    for (int j = 1; j < i; ++j) {
      Elem s = F.add(g.at(i, j), h.at(i, j));
      for (int k = j + 1; k < i; ++k) s = F.add(s, F.mul(g.at(i, k), h.at(k, j)));
      r.set(i, j, s);
    }
  return r;
}

// Forward substitution on g h = 1.
inline UnipotentMatrix group_inv(const UnipotentMatrix& g) {
  const Field& F = g.F();
  const int n = g.n();
  UnipotentMatrix h(g.field(), n);
  for (int j = 1; j <= n; ++j)
    for (int i = j + 1; i <= n; ++i) {
      Elem s = g.at(i, j);
      for (int k = j + 1; k < i; ++k) s = F.add(s, F.mul(g.at(i, k), h.at(k, j)));
      h.set(i, j, F.neg(s));
    }
  return h;
}

inline UnipotentMatrix conjugate(const UnipotentMatrix& x, const UnipotentMatrix& g) {
  return group_mul(group_mul(x, g), group_inv(x));
}

inline bool commute(const UnipotentMatrix& a, const UnipotentMatrix& b) {
  return group_mul(a, b) == group_mul(b, a);
}

// Elementary matrix 1 + lambda e_{rs}.
inline UnipotentMatrix elementary(FieldPtr F, int n, int r, int s, Elem lambda) {
  UnipotentMatrix x(std::move(F), n);
  x.set(r, s, lambda);
  return x;
}

inline UnipotentMatrix exp_nilpotent(const NilpotentMatrix& a) {
  const Field& F = a.F();
  const int n = a.n();
  detail::require(F.p() >= n, "exp: requires p >= n");
  const DenseMatrix A = detail::to_dense(a);
  DenseMatrix sum(n), term(n);
  for (int i = 0; i < n; ++i) sum(i, i) = term(i, i) = F.one();
  Elem fact = F.one();
  for (int k = 1; k < n; ++k) {
    term = detail::dense_mul(F, term, A);
    fact = F.mul(fact, F.from_int(k));
    const Elem c = F.inv(fact);
    for (std::size_t t = 0; t < sum.a.size(); ++t) sum.a[t] = F.add(sum.a[t], F.mul(c, term.a[t]));
  }
  return detail::from_dense_lower<Shape::unipotent>(a.field(), sum);
}

inline NilpotentMatrix log_unipotent(const UnipotentMatrix& g) {
  const Field& F = g.F();
  const int n = g.n();
  detail::require(F.p() >= n, "log: requires p >= n");
  DenseMatrix N = detail::to_dense(g);
  for (int i = 0; i < n; ++i) N(i, i) = F.zero();
  DenseMatrix sum(n), term = N;
  for (int k = 1; k < n; ++k) {
    if (k > 1) term = detail::dense_mul(F, term, N);
    Elem c = F.inv(F.from_int(k));
    if (k % 2 == 0) c = F.neg(c);
    for (std::size_t t = 0; t < sum.a.size(); ++t) sum.a[t] = F.add(sum.a[t], F.mul(c, term.a[t]));
  }
  return detail::from_dense_lower<Shape::nilpotent>(g.field(), sum);
}

// Minor with the given 1-based rows and columns, in the given order.
template <Shape S>
Elem minor(const TriArray<S>& g, std::span<const int> rows, std::span<const int> cols) {
  detail::require(rows.size() == cols.size(), "minor: rows and cols differ in length");
  const int k = static_cast<int>(rows.size());
  DenseMatrix m(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      detail::require(rows[a] >= 1 && rows[a] <= g.n() && cols[b] >= 1 && cols[b] <= g.n(),
                      "minor: index out of range");
      m(a, b) = g.entry(rows[a], cols[b]);
    }
  if (k == 0) return g.F().one();
  return detail::determinant(g.F(), std::move(m));
}

// Delta_d(g): rows n-d+1..n, columns 1..d.
template <Shape S>
Elem delta_d(const TriArray<S>& g, int d) {
  detail::require(d >= 1 && d <= g.n(), "delta_d: d out of range");
  std::vector<int> rows, cols;
  for (int t = 1; t <= d; ++t) {
    rows.push_back(g.n() - d + t);
    cols.push_back(t);
  }
  return minor(g, rows, cols);
}

namespace detail {

inline void split_pairs(std::span<const std::pair<int, int>> X, std::vector<int>& rows,
                        std::vector<int>& cols) {
  rows.clear();
  cols.clear();
  for (auto [i, j] : X) {
    rows.push_back(i);
    cols.push_back(j);
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  require(std::adjacent_find(rows.begin(), rows.end()) == rows.end() &&
              std::adjacent_find(cols.begin(), cols.end()) == cols.end(),
          "pair set: rows and columns must be distinct");
}

}  // namespace detail

// Delta^X(g): rows and columns of X, each sorted ascending.
template <Shape S>
Elem delta_x(const TriArray<S>& g, std::span<const std::pair<int, int>> X) {
  std::vector<int> rows, cols;
  detail::split_pairs(X, rows, cols);
  return minor(g, rows, cols);
}

// Coefficient of t^d in the minor Delta^X of M(t), where M(t) has unit
// diagonal and strictly lower entries t * y_ij. Expanded exactly as a
// polynomial in t by a determinant recursion over column subsets.
inline Elem charmat_coeff(std::span<const std::pair<int, int>> X, int d, const UnipotentMatrix& g) {
  const Field& F = g.F();
  std::vector<int> rows, cols;
  detail::split_pairs(X, rows, cols);
  const int k = static_cast<int>(rows.size());
  detail::require(k <= 20, "charmat_coeff: pair set too large");
  for (int t = 0; t < k; ++t)
    detail::require(rows[t] >= 1 && rows[t] <= g.n() && cols[t] >= 1 && cols[t] <= g.n(),
                    "charmat_coeff: index out of range");
  if (d < 0 || d > k) return F.zero();
  using Poly = std::vector<Elem>;  // coefficients in t, degree <= k
  std::vector<Poly> dp(std::size_t{1} << k, Poly(k + 1, F.zero()));
  dp[0][0] = F.one();
  for (std::size_t mask = 0; mask + 1 < dp.size(); ++mask) {
    const int r = std::popcount(mask);
    bool empty = true;
    for (auto e : dp[mask])
      if (!e.is_zero()) empty = false;
    if (empty) continue;
    for (int c = 0; c < k; ++c) {
      if (mask >> c & 1) continue;
      const int i = rows[r], j = cols[c];
      // Entry of M(t): 1 on the diagonal, t*y_ij below, 0 above.
      int shift;
      Elem coef;
      if (i == j) {
        shift = 0;
        coef = F.one();
      } else if (i > j) {
        shift = 1;
        coef = g.at(i, j);
      } else {
        continue;
      }
      if (coef.is_zero()) continue;
      // Inversions against already chosen columns greater than c.
      const int inv = std::popcount(mask >> (c + 1));
      if (inv % 2) coef = F.neg(coef);
      Poly& out = dp[mask | (std::size_t{1} << c)];
      for (int t = 0; t + shift <= k; ++t)
        if (!dp[mask][t].is_zero()) out[t + shift] = F.add(out[t + shift], F.mul(coef, dp[mask][t]));
    }
  }
  return dp.back()[d];
}

// f(x) = sum_{i>j} xi_{ji} x_{ij}.
inline Elem eval_form(const LinearForm& f, const NilpotentMatrix& x) {
  detail::require_compatible(f, x);
  const Field& F = f.F();
  Elem s = F.zero();
  for (int k = 0; k < num_roots(f.n()); ++k) s = F.add(s, F.mul(f.coord(k), x.coord(k)));
  return s;
}

// K(g) f = strictly upper part of g f g^{-1}.
inline LinearForm coadjoint(const UnipotentMatrix& g, const LinearForm& f) {
  detail::require_compatible(g, f);
  const Field& F = g.F();
  const DenseMatrix prod =
      detail::dense_mul(F, detail::dense_mul(F, detail::to_dense(g), detail::to_dense(f)),
                        detail::to_dense(group_inv(g)));
  LinearForm r(g.field(), g.n());
  for (int i = 1; i <= g.n(); ++i)
    for (int j = i + 1; j <= g.n(); ++j) r.set(i, j, prod(i - 1, j - 1));
  return r;
}

// K(1 + lambda e_{rs}) applied in place.
inline void coadjoint_elementary(LinearForm& f, int r, int s, Elem lambda) {
  const Field& F = f.F();
  const int n = f.n();
  for (int j = r + 1; j <= n; ++j) f.set(r, j, F.add(f.at(r, j), F.mul(lambda, f.at(s, j))));
  for (int i = 1; i < s; ++i) f.set(i, s, F.sub(f.at(i, s), F.mul(lambda, f.at(i, r))));
}

// Ad(1 + lambda e_{rs}) x, the same formula for group and algebra elements.
template <Shape S>
void conjugate_elementary(TriArray<S>& x, int r, int s, Elem lambda) {
  static_assert(S != Shape::form);
  const Field& F = x.F();
  const int n = x.n();
  for (int j = 1; j < s; ++j) x.set(r, j, F.add(x.at(r, j), F.mul(lambda, x.at(s, j))));
  for (int i = r + 1; i <= n; ++i) x.set(i, s, F.sub(x.at(i, s), F.mul(lambda, x.at(i, r))));
}

inline NilpotentMatrix adjoint(const UnipotentMatrix& g, const NilpotentMatrix& x) {
  detail::require_compatible(g, x);
  const Field& F = g.F();
  const DenseMatrix prod =
      detail::dense_mul(F, detail::dense_mul(F, detail::to_dense(g), detail::to_dense(x)),
                        detail::to_dense(group_inv(g)));
  return detail::from_dense_lower<Shape::nilpotent>(g.field(), prod);
}

inline CycloValue theta_f(const LinearForm& f, const NilpotentMatrix& x) {
  return theta(f.F(), eval_form(f, x));
}

// prod_{(i,j)} theta(xi_{ji} x_{ij}); agrees with theta_f.
inline CycloValue theta_f_product(const LinearForm& f, const NilpotentMatrix& x) {
  detail::require_compatible(f, x);
  const Field& F = f.F();
  CycloValue v = cyclo_integer(F, 1);
  for (int k = 0; k < num_roots(f.n()); ++k) v *= theta(F, F.mul(f.coord(k), x.coord(k)));
  return v;
}

// Transpose of a form as a lower matrix (same coordinates).
inline NilpotentMatrix transpose(const LinearForm& f) {
  NilpotentMatrix x(f.field(), f.n());
  for (int k = 0; k < num_roots(f.n()); ++k) x.coord(k) = f.coord(k);
  return x;
}

template <Shape S, class Rng>
TriArray<S> random_tri(const FieldPtr& F, int n, Rng& rng) {
  TriArray<S> m(F, n);
  std::uniform_int_distribution<std::uint32_t> dist(0, F->q() - 1);
  for (int k = 0; k < num_roots(n); ++k) m.coord(k) = Elem{dist(rng)};
  return m;
}

template <class Rng>
UnipotentMatrix random_unipotent(const FieldPtr& F, int n, Rng& rng) {
  return random_tri<Shape::unipotent>(F, n, rng);
}
template <class Rng>
NilpotentMatrix random_nilpotent(const FieldPtr& F, int n, Rng& rng) {
  return random_tri<Shape::nilpotent>(F, n, rng);
}
template <class Rng>
LinearForm random_form(const FieldPtr& F, int n, Rng& rng) {
  return random_tri<Shape::form>(F, n, rng);
}

}  // namespace unitri
