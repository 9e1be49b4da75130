#pragma once

// Exact values in Z[zeta_p][1/q].
//
// A value is numerator / q^e with the numerator written in the integral
// basis 1, zeta, ..., zeta^{p-2}. The representation is kept normalized:
// e is minimal, and e = 0 for the zero value. Two values are equal iff
// their normalized representations agree component-wise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "unitri/error.hpp"
#include "unitri/field.hpp"

namespace unitri {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("cyclotomic value overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("cyclotomic value overflow");
  return r;
}

}  // namespace detail

class CycloValue {
 public:
  CycloValue() = default;

  // Zero in Z[zeta_p][1/q].
  CycloValue(int p, std::int64_t q) : p_(p), q_(q), num_(p - 1, 0) {
    detail::require(p >= 2 && q >= p, "cyclo: invalid (p, q)");
  }

  static CycloValue integer(int p, std::int64_t q, std::int64_t k) {
    CycloValue c(p, q);
    c.num_[0] = k;
    return c;
  }

  // zeta_p^k.
  static CycloValue zeta_power(int p, std::int64_t q, long long k) {
    CycloValue c(p, q);
    long long t = k % p;
    if (t < 0) t += p;
    c.add_zeta_power(static_cast<int>(t), 1);
    return c;
  }

  // Sum_t counts[t] * zeta^t for t in [0, p).
  static CycloValue from_residue_counts(int p, std::int64_t q, std::span<const std::int64_t> counts) {
    detail::require(static_cast<int>(counts.size()) == p, "cyclo: need p residue counts");
    CycloValue c(p, q);
    for (int t = 0; t < p; ++t) c.add_zeta_power(t, counts[t]);
    c.normalize();
    return c;
  }

  // Builds numerator / q^e from raw coordinates and normalizes.
  static CycloValue from_parts(int p, std::int64_t q, std::vector<std::int64_t> num, int qexp) {
    detail::require(static_cast<int>(num.size()) == p - 1, "cyclo: numerator must have p-1 entries");
    detail::require(qexp >= 0, "cyclo: negative q exponent");
    CycloValue c(p, q);
    c.num_ = std::move(num);
    c.e_ = qexp;
    c.normalize();
    return c;
  }

  int p() const { return p_; }
  std::int64_t q() const { return q_; }
  const std::vector<std::int64_t>& numerator() const { return num_; }
  int q_exponent() const { return e_; }

  bool is_zero() const {
    for (auto x : num_)
      if (x != 0) return false;
    return true;
  }

  // True iff the value is the rational integer k.
  bool equals_integer(std::int64_t k) const {
    if (e_ != 0 || num_.empty() || num_[0] != k) return false;
    for (std::size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) return false;
    return true;
  }

  CycloValue operator-() const {
    CycloValue c = *this;
    for (auto& x : c.num_) x = -x;
    return c;
  }

  friend CycloValue operator+(const CycloValue& a, const CycloValue& b) {
    a.check_compatible(b);
    const int e = std::max(a.e_, b.e_);
    CycloValue c(a.p_, a.q_);
    c.e_ = e;
    const std::int64_t sa = pow_q(a.q_, e - a.e_), sb = pow_q(a.q_, e - b.e_);
    for (int i = 0; i < a.p_ - 1; ++i)
      c.num_[i] = detail::checked_add(detail::checked_mul(a.num_[i], sa),
                                      detail::checked_mul(b.num_[i], sb));
    c.normalize();
    return c;
  }

  friend CycloValue operator-(const CycloValue& a, const CycloValue& b) { return a + (-b); }

  friend CycloValue operator*(const CycloValue& a, const CycloValue& b) {
    a.check_compatible(b);
    const int p = a.p_;
    // Multiply in Z[x]/(x^p - 1), then reduce by 1 + x + ... + x^{p-1}.
    std::vector<std::int64_t> full(p, 0);
    for (int i = 0; i < p - 1; ++i) {
      if (a.num_[i] == 0) continue;
      for (int j = 0; j < p - 1; ++j) {
        if (b.num_[j] == 0) continue;
        const int k = (i + j) % p;
        full[k] = detail::checked_add(full[k], detail::checked_mul(a.num_[i], b.num_[j]));
      }
    }
    CycloValue c(p, a.q_);
    c.e_ = a.e_ + b.e_;
    for (int i = 0; i < p - 1; ++i) c.num_[i] = detail::checked_add(full[i], -full[p - 1]);
    c.normalize();
    return c;
  }

  CycloValue& operator+=(const CycloValue& o) { return *this = *this + o; }
  CycloValue& operator*=(const CycloValue& o) { return *this = *this * o; }

  // Complex conjugation zeta -> zeta^{p-1}.
  CycloValue conj() const {
    std::vector<std::int64_t> full(p_, 0);
    for (int i = 0; i < p_ - 1; ++i) full[(p_ - i) % p_] = num_[i];
    CycloValue c(p_, q_);
    c.e_ = e_;
    for (int i = 0; i < p_ - 1; ++i) c.num_[i] = full[i] - full[p_ - 1];
    c.normalize();
    return c;
  }

  // Multiplies by q^k (k may be negative).
  CycloValue scaled_by_q_power(int k) const {
    CycloValue c = *this;
    const int e = c.e_ - k;
    if (e >= 0) {
      c.e_ = e;
    } else {
      const std::int64_t s = pow_q(q_, -e);
      for (auto& x : c.num_) x = detail::checked_mul(x, s);
      c.e_ = 0;
    }
    c.normalize();
    return c;
  }

  friend bool operator==(const CycloValue& a, const CycloValue& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.e_ == b.e_ && a.num_ == b.num_;
  }

  // Display only.
  std::complex<double> to_complex() const {
    std::complex<double> z = 0.0;
    for (int k = 0; k < p_ - 1; ++k) {
      const double ang = 2.0 * std::numbers::pi * k / p_;
      z += static_cast<double>(num_[k]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    double scale = 1.0;
    for (int i = 0; i < e_; ++i) scale *= static_cast<double>(q_);
    return z / scale;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < p_ - 1; ++k) {
      if (num_[k] == 0) continue;
      if (!first) os << (num_[k] > 0 ? " + " : " - ");
      else if (num_[k] < 0) os << "-";
      const auto m = num_[k] < 0 ? -num_[k] : num_[k];
      if (k == 0) os << m;
      else {
        if (m != 1) os << m << "*";
        os << "z^" << k;
      }
      first = false;
    }
    if (first) os << "0";
    if (e_ > 0) os << " / " << q_ << "^" << e_;
    return os.str();
  }

 private:
  static std::int64_t pow_q(std::int64_t q, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r = detail::checked_mul(r, q);
    return r;
  }

  void check_compatible(const CycloValue& o) const {
    detail::require(p_ == o.p_ && q_ == o.q_, "cyclo: operands over different p");
  }

  void add_zeta_power(int t, std::int64_t c) {
    if (t < p_ - 1) {
      num_[t] = detail::checked_add(num_[t], c);
    } else {
      for (auto& x : num_) x = detail::checked_add(x, -c);
    }
  }

  void normalize() {
    if (is_zero()) {
      e_ = 0;
      return;
    }
    while (e_ > 0) {
      for (auto x : num_)
        if (x % q_ != 0) return;
      for (auto& x : num_) x /= q_;
      --e_;
    }
  }

  int p_ = 0;
  std::int64_t q_ = 0;
  std::vector<std::int64_t> num_;
  int e_ = 0;
};

// theta(x) = zeta_p^{Tr(x)}.
inline CycloValue theta(const Field& F, Elem x) {
  return CycloValue::zeta_power(F.p(), F.q(), F.trace(x));
}

inline CycloValue cyclo_zero(const Field& F) { return CycloValue(F.p(), F.q()); }
inline CycloValue cyclo_integer(const Field& F, std::int64_t k) {
  return CycloValue::integer(F.p(), F.q(), k);
}

}  // namespace unitri
