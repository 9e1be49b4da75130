#pragma once

// Finite fields F_q, q = p^r, with precomputed operation tables.
//
// An element is stored as its index v = c_0 + c_1 p + ... + c_{r-1} p^{r-1},
// where (c_0, ..., c_{r-1}) is the coefficient vector in the power basis
// 1, x, ..., x^{r-1} of F_p[x]/(m(x)). The prime subfield is exactly the
// indices below p.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "unitri/error.hpp"

namespace unitri {

struct Elem {
  std::uint32_t v = 0;

  constexpr bool is_zero() const { return v == 0; }
  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace detail {

// Dense polynomials over F_p, low degree first, no trailing zeros.
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  long long r = 1, b = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

// Remainder of a modulo b (b nonzero).
inline Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const int lead_inv = inv_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int c = static_cast<int>(1LL * a.back() * lead_inv % p);
    for (int i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<int>((a[shift + i] - 1LL * c * b[i] % p + p) % p);
    }
    trim(a);
  }
  return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly& m, int p) {
  const int deg = static_cast<int>(m.size()) - 1;
  for (int k = 1; 2 * k <= deg; ++k) {
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long long idx = 0; idx < count; ++idx) {
      Poly d(k + 1);
      long long t = idx;
      for (int i = 0; i < k; ++i) {
        d[i] = static_cast<int>(t % p);
        t /= p;
      }
      d[k] = 1;
      if (poly_mod(m, d, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

class Field {
 public:
  // Largest q for which the multiplication table is materialized.
  static constexpr std::uint32_t kMaxOrder = 4096;

  // Builds F_{p^r}. For r > 1 the modulus is the lexicographically smallest
  // monic irreducible, comparing lower-degree coefficients first.
  // n_hint is the intended matrix degree; p < n_hint is rejected.
  static std::shared_ptr<const Field> make(int p, int r = 1, int n_hint = 0) {
    detail::require(r >= 1, "field: r must be at least 1");
    detail::require(is_prime(p), "field: p = " + std::to_string(p) + " is not prime");
    detail::require(p >= n_hint, "field: p = " + std::to_string(p) +
                                     " is smaller than the group degree n = " +
                                     std::to_string(n_hint));
    std::uint64_t q = 1;
    for (int i = 0; i < r; ++i) {
      q *= static_cast<std::uint64_t>(p);
      detail::require(q <= kMaxOrder, "field: q = p^r exceeds the supported order");
    }
    return std::shared_ptr<const Field>(new Field(p, r, static_cast<std::uint32_t>(q)));
  }

  int p() const { return p_; }
  int r() const { return r_; }
  std::uint32_t q() const { return q_; }

  // Full coefficient list of the modulus, low degree first, including the
  // leading 1. Empty for prime fields.
  const std::vector<int>& modulus() const { return modulus_; }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }

  Elem add(Elem a, Elem b) const {
    if (r_ == 1) {
      const std::uint32_t s = a.v + b.v;
      return {s >= q_ ? s - q_ : s};
    }
    return {add_[a.v * q_ + b.v]};
  }
  Elem neg(Elem a) const { return {neg_[a.v]}; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const { return {mul_[a.v * q_ + b.v]}; }
  Elem inv(Elem a) const {
    detail::require(!a.is_zero(), "field: inverse of zero");
    return {inv_[a.v]};
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  // Image of an integer in the prime subfield.
  Elem from_int(long long k) const {
    long long m = k % p_;
    if (m < 0) m += p_;
    return {static_cast<std::uint32_t>(m)};
  }

  bool contains(Elem a) const { return a.v < q_; }

  // Element with index v; throws when v is out of range.
  Elem element(std::uint64_t v) const {
    detail::require(v < q_, "field: element index out of range");
    return {static_cast<std::uint32_t>(v)};
  }

  std::vector<int> coeffs(Elem a) const {
    std::vector<int> c(r_);
    std::uint32_t v = a.v;
    for (int i = 0; i < r_; ++i) {
      c[i] = static_cast<int>(v % p_);
      v /= p_;
    }
    return c;
  }

  Elem from_coeffs(std::span<const int> c) const {
    detail::require(static_cast<int>(c.size()) == r_,
                    "field: element must have exactly r coefficients");
    std::uint32_t v = 0;
    for (int i = r_ - 1; i >= 0; --i) {
      detail::require(c[i] >= 0 && c[i] < p_, "field: coefficient outside [0, p)");
      v = v * p_ + static_cast<std::uint32_t>(c[i]);
    }
    return {v};
  }

  // Tr_{F_q/F_p}(a) as a residue in [0, p).
  int trace(Elem a) const { return trace_[a.v]; }

  Elem frobenius(Elem a) const { return pow(a, static_cast<std::uint64_t>(p_)); }

  // F_p-basis 1, x, ..., x^{r-1} of F_q.
  std::vector<Elem> prime_basis() const {
    std::vector<Elem> b;
    std::uint32_t v = 1;
    for (int i = 0; i < r_; ++i, v *= p_) b.push_back({v});
    return b;
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.p_ == b.p_ && a.r_ == b.r_ && a.modulus_ == b.modulus_;
  }

 private:
  Field(int p, int r, std::uint32_t q) : p_(p), r_(r), q_(q) {
    if (r_ > 1) choose_modulus();
    build_tables();
  }

  void choose_modulus() {
    std::uint64_t count = 1;
    for (int i = 0; i < r_; ++i) count *= p_;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      // idx enumerates (m_0, ..., m_{r-1}) with m_0 as the most significant digit.
      detail::Poly m(r_ + 1);
      std::uint64_t t = idx;
      for (int i = r_ - 1; i >= 0; --i) {
        m[i] = static_cast<int>(t % p_);
        t /= p_;
      }
      m[r_] = 1;
      if (m[0] == 0) continue;
      if (detail::is_irreducible(m, p_)) {
        modulus_ = m;
        return;
      }
    }
    throw InvalidArgument("field: no irreducible polynomial found");
  }

  std::uint32_t poly_to_index(const detail::Poly& a) const {
    std::uint32_t v = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) v = v * p_ + a[i];
    return v;
  }

  detail::Poly index_to_poly(std::uint32_t v) const {
    detail::Poly a(r_);
    for (int i = 0; i < r_; ++i) {
      a[i] = static_cast<int>(v % p_);
      v /= p_;
    }
    return a;
  }

  void build_tables() {
    const std::size_t qq = static_cast<std::size_t>(q_) * q_;
    mul_.resize(qq);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    trace_.resize(q_);
    if (r_ > 1) add_.resize(qq);
    for (std::uint32_t a = 0; a < q_; ++a) {
      const auto pa = index_to_poly(a);
      detail::Poly na(r_);
      for (int i = 0; i < r_; ++i) na[i] = (p_ - pa[i]) % p_;
      neg_[a] = poly_to_index(na);
      for (std::uint32_t b = 0; b < q_; ++b) {
        const auto pb = index_to_poly(b);
        if (r_ > 1) {
          detail::Poly s(r_);
          for (int i = 0; i < r_; ++i) s[i] = (pa[i] + pb[i]) % p_;
          add_[a * q_ + b] = poly_to_index(s);
        }
        detail::Poly prod(2 * r_ - 1, 0);
        for (int i = 0; i < r_; ++i)
          for (int j = 0; j < r_; ++j)
            prod[i + j] = static_cast<int>((prod[i + j] + 1LL * pa[i] * pb[j]) % p_);
        if (r_ > 1) prod = detail::poly_mod(prod, modulus_, p_);
        prod.resize(r_, 0);
        mul_[a * q_ + b] = poly_to_index(prod);
      }
    }
    for (std::uint32_t a = 1; a < q_; ++a)
      for (std::uint32_t b = 1; b < q_; ++b)
        if (mul_[a * q_ + b] == 1) {
          inv_[a] = b;
          break;
        }
    for (std::uint32_t a = 0; a < q_; ++a) {
      Elem x{a}, s = zero();
      for (int i = 0; i < r_; ++i) {
        s = add(s, x);
        x = frobenius(x);
      }
      trace_[a] = static_cast<int>(s.v);  // lies in the prime subfield
    }
  }

  int p_;
  int r_;
  std::uint32_t q_;
  std::vector<int> modulus_;
  std::vector<std::uint32_t> add_;
  std::vector<std::uint32_t> mul_;
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> inv_;
  std::vector<int> trace_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr field_make(int p, int r = 1, int n_hint = 0) { return Field::make(p, r, n_hint); }

inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
  detail::require(a && b && (a == b || *a == *b), "field mismatch");
}

}  // namespace unitri
