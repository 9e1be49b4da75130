#pragma once

// Mixed-radix packing of triangular arrays and BFS closures under the
// elementary generators x_rs(lambda), lambda running over an F_p-basis
// of F_q. Both the coadjoint action on forms and conjugation on group
// (or algebra) elements are linear in the coordinates, and no updated
// coordinate is read by the same generator, so each generator is a list
// of independent "target += coef * source" updates.

#include <cstdint>
#include <limits>
#include <unordered_set>
#include <vector>

#include "unitri/error.hpp"
#include "unitri/field.hpp"
#include "unitri/matrix.hpp"

namespace unitri {

class PackedLayout {
 public:
  PackedLayout(FieldPtr F, int n) : F_(std::move(F)), n_(n), N_(num_roots(n)), q_(F_->q()) {
    pw_.assign(N_ + 1, 0);
    pw_[0] = 1;
    for (int k = 0; k < N_ && !overflow_; ++k) {
      if (pw_[k] > (std::uint64_t{1} << 63) / q_) overflow_ = true;
      else pw_[k + 1] = pw_[k] * q_;
    }
  }

  const FieldPtr& field() const { return F_; }
  int n() const { return n_; }
  int coords() const { return N_; }
  std::uint64_t q() const { return q_; }
  bool packable() const { return !overflow_; }

  // q^{n(n-1)/2}; throws when the space does not fit in 63 bits.
  std::uint64_t space_size() const {
    if (overflow_) throw BudgetExceeded("packed space exceeds 63 bits");
    return pw_[N_];
  }
  std::uint64_t weight(int k) const { return pw_[k]; }

  void decode(std::uint64_t idx, std::uint32_t* d) const {
    for (int k = 0; k < N_; ++k) {
      d[k] = static_cast<std::uint32_t>(idx % q_);
      idx /= q_;
    }
  }
  std::uint64_t encode(const std::uint32_t* d) const {
    std::uint64_t idx = 0;
    for (int k = N_ - 1; k >= 0; --k) idx = idx * q_ + d[k];
    return idx;
  }
  std::uint32_t digit(std::uint64_t idx, int k) const {
    return static_cast<std::uint32_t>(idx / pw_[k] % q_);
  }

  template <Shape S>
  std::uint64_t pack(const TriArray<S>& a) const {
    if (overflow_) throw BudgetExceeded("packed space exceeds 63 bits");
    return a.pack();
  }
  template <Shape S>
  TriArray<S> unpack(std::uint64_t idx) const {
    return TriArray<S>::unpack(F_, n_, idx);
  }

 private:
  FieldPtr F_;
  int n_;
  int N_;
  std::uint64_t q_;
  std::vector<std::uint64_t> pw_;
  bool overflow_ = false;
};

struct DigitUpdate {
  int target;
  int source;
  Elem coef;
};
using Generator = std::vector<DigitUpdate>;

// K(x_rs(lambda)) on forms: xi_{rj} += lambda xi_{sj} (j > r),
// xi_{is} -= lambda xi_{ir} (i < s).
inline std::vector<Generator> coadjoint_generators(const Field& F, int n) {
  std::vector<Generator> gens;
  for (auto lambda : F.prime_basis())
    for (int k = 0; k < num_roots(n); ++k) {
      const Root rs = root_at(n, k);
      Generator g;
      for (int j = rs.i + 1; j <= n; ++j)
        g.push_back({root_pos(n, j, rs.i), root_pos(n, j, rs.j), lambda});
      for (int i = 1; i < rs.j; ++i)
        g.push_back({root_pos(n, rs.j, i), root_pos(n, rs.i, i), F.neg(lambda)});
      if (!g.empty()) gens.push_back(std::move(g));
    }
  return gens;
}

// Ad(x_rs(lambda)) on lower entries: y_{rj} += lambda y_{sj} (j < s),
// y_{is} -= lambda y_{ir} (i > r). Valid for group and algebra alike.
inline std::vector<Generator> conjugation_generators(const Field& F, int n) {
  std::vector<Generator> gens;
  for (auto lambda : F.prime_basis())
    for (int k = 0; k < num_roots(n); ++k) {
      const Root rs = root_at(n, k);
      Generator g;
      for (int j = 1; j < rs.j; ++j) g.push_back({root_pos(n, rs.i, j), root_pos(n, rs.j, j), lambda});
      for (int i = rs.i + 1; i <= n; ++i)
        g.push_back({root_pos(n, i, rs.j), root_pos(n, i, rs.i), F.neg(lambda)});
      if (!g.empty()) gens.push_back(std::move(g));
    }
  return gens;
}

inline std::uint64_t apply_generator(const PackedLayout& L, const Generator& g, std::uint64_t idx,
                                     const std::uint32_t* d) {
  const Field& F = *L.field();
  for (const auto& u : g) {
    const Elem src{d[u.source]};
    if (src.is_zero()) continue;
    const Elem old{d[u.target]};
    const Elem nw = F.add(old, F.mul(u.coef, src));
    idx = idx - static_cast<std::uint64_t>(old.v) * L.weight(u.target) +
          static_cast<std::uint64_t>(nw.v) * L.weight(u.target);
  }
  return idx;
}

// Flat bitset over the whole packed space.
class DenseVisited {
 public:
  explicit DenseVisited(std::uint64_t size) : bits_((size + 63) / 64, 0) {}
  bool insert(std::uint64_t x) {
    auto& w = bits_[x >> 6];
    const std::uint64_t m = std::uint64_t{1} << (x & 63);
    if (w & m) return false;
    w |= m;
    return true;
  }
  bool contains(std::uint64_t x) const { return bits_[x >> 6] >> (x & 63) & 1; }

 private:
  std::vector<std::uint64_t> bits_;
};

class HashVisited {
 public:
  bool insert(std::uint64_t x) { return set_.insert(x).second; }
  bool contains(std::uint64_t x) const { return set_.contains(x); }

 private:
  std::unordered_set<std::uint64_t> set_;
};

// Closure of {start}; elements returned in discovery order.
template <class Visited>
std::vector<std::uint64_t> bfs_closure(const PackedLayout& L, const std::vector<Generator>& gens,
                                       std::uint64_t start, Visited& visited, std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint32_t> d(L.coords());
  visited.insert(start);
  out.push_back(start);
  for (std::size_t head = 0; head < out.size(); ++head) {
    const std::uint64_t cur = out[head];
    L.decode(cur, d.data());
    for (const auto& g : gens) {
      const std::uint64_t nx = apply_generator(L, g, cur, d.data());
      if (nx != cur && visited.insert(nx)) {
        if (out.size() >= budget) throw BudgetExceeded("orbit exceeds the element budget");
        out.push_back(nx);
      }
    }
  }
  return out;
}

inline std::vector<std::uint64_t> bfs_closure(const PackedLayout& L, const std::vector<Generator>& gens,
                                              std::uint64_t start, std::uint64_t budget) {
  HashVisited v;
  return bfs_closure(L, gens, start, v, budget);
}

// Partition of the whole packed space into orbits. Orbits are numbered by
// their smallest element, which is also the BFS start.
struct SpacePartition {
  std::vector<std::uint32_t> id;         // orbit number per packed index
  std::vector<std::uint64_t> min_elem;   // per orbit
  std::vector<std::uint64_t> size;       // per orbit
};

inline SpacePartition partition_space(const PackedLayout& L, const std::vector<Generator>& gens,
                                      std::uint64_t budget) {
  const std::uint64_t total = L.space_size();
  if (total > budget) throw BudgetExceeded("space of size " + std::to_string(total) + " exceeds the budget");
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  SpacePartition P;
  P.id.assign(total, kNone);
  std::vector<std::uint64_t> queue;
  std::vector<std::uint32_t> d(L.coords());
  for (std::uint64_t s = 0; s < total; ++s) {
    if (P.id[s] != kNone) continue;
    const auto o = static_cast<std::uint32_t>(P.size.size());
    queue.clear();
    queue.push_back(s);
    P.id[s] = o;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint64_t cur = queue[head];
      L.decode(cur, d.data());
      for (const auto& g : gens) {
        const std::uint64_t nx = apply_generator(L, g, cur, d.data());
        if (P.id[nx] == kNone) {
          P.id[nx] = o;
          queue.push_back(nx);
        }
      }
    }
    P.min_elem.push_back(s);
    P.size.push_back(queue.size());
  }
  return P;
}

}  // namespace unitri
