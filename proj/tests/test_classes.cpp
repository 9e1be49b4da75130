#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "oracles.hpp"
#include "unitri/classes.hpp"

using namespace unitri;

namespace {

constexpr std::uint64_t kBudget = std::uint64_t{1} << 24;

DecoratedSubset deco(int n, std::initializer_list<std::pair<Root, int>> phi) {
  DecoratedSubset D{n, {}};
  for (auto [r, v] : phi) D.phi[r] = Elem{static_cast<std::uint32_t>(v)};
  return D;
}

std::vector<RootSet> basic_subsets(int n) {
  const auto phi = phi_n(n);
  std::vector<RootSet> out;
  for (std::uint32_t mask = 0; mask < (1u << phi.size()); ++mask) {
    RootSet s;
    for (std::size_t t = 0; t < phi.size(); ++t)
      if (mask >> t & 1) s.insert(phi[t]);
    if (is_basic(s)) out.push_back(s);
  }
  return out;
}

// Packed indices of every g in the group satisfying the descriptor.
std::vector<std::uint64_t> member_scan(const FieldPtr& F, int n, const ClassDescriptor& C) {
  const PackedLayout L(F, n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < L.space_size(); ++k)
    if (class_membership(L.unpack<Shape::unipotent>(k), C)) out.push_back(k);
  return out;
}

}  // namespace

TEST(BasicClasses, CentralElementIsItsOwnClass) {
  auto F = field_make(5);
  const auto D = deco(4, {{{4, 1}, 1}});
  const auto C = make_class(F, D);
  EXPECT_FALSE(C.subregular);
  EXPECT_EQ(C.size_exponent, 0);
  EXPECT_EQ(class_bfs(x_of(F, D), kBudget).size(), 1u);
  EXPECT_EQ(member_scan(F, 4, C), class_bfs(x_of(F, D), kBudget));
}

// Each basic D at n = 4 with two decorations: the equations cut out exactly
// the conjugacy class, and the rank-based size matches.
TEST(BasicClasses, MembershipEqualsBfsClassAtN4) {
  auto F = field_make(5);
  std::mt19937_64 rng(7);
  int checked = 0, expected = 0;
  for (const auto& S : basic_subsets(4)) {
    const auto c = classify_subset(4, S);
    if (c.kind == SubsetKind::d_subregular && c.variant == Variant::d1) continue;
    auto decs = all_decorations(4, S, *F);
    std::vector<DecoratedSubset> pick{decs.front(), decs[rng() % decs.size()]};
    expected += 2;
    for (const auto& D : pick) {
      const auto C = make_class(F, D);
      const auto bfs = class_bfs(x_of(F, D), kBudget);
      ASSERT_EQ(member_scan(F, 4, C), bfs);
      std::uint64_t size = 1;
      for (int e = 0; e < C.size_exponent; ++e) size *= 5;
      ASSERT_EQ(size, bfs.size());
      ++checked;
    }
  }
  EXPECT_EQ(checked, expected);
  EXPECT_GT(checked, 20);
}

TEST(SubregularClasses, ConstantsExample) {
  auto F = field_make(5);
  const auto C = make_class(F, deco(5, {{{2, 1}, 2}, {{5, 4}, 3}}));
  ASSERT_TRUE(C.subregular);
  EXPECT_EQ(C.constants.c_beta, Elem{2});
  EXPECT_EQ(C.constants.c_alpha, Elem{3});
  EXPECT_EQ(C.constants.c0, Elem{0});
  EXPECT_TRUE(C.constants.c.empty());
  EXPECT_TRUE(C.sreg.dplus.empty());
  EXPECT_EQ(gamma_poly(x_of(F, C.D), 1), F->zero());
}

TEST(SubregularClasses, LabelSetsExample) {
  auto F = field_make(5);
  const auto C = make_class(F, deco(5, {{{2, 1}, 1}, {{5, 4}, 1}}));
  EXPECT_EQ(C.B, (RootSet{{5, 4}, {2, 1}, {5, 2}, {3, 2}, {4, 2}, {4, 3}}));
  EXPECT_EQ(C.A, (RootSet{{4, 1}, {3, 2}, {4, 2}, {4, 3}}));
  EXPECT_EQ(C.A.size() + C.B.size(), 10u);
  EXPECT_EQ(C.size_exponent, 4);
}

TEST(SubregularClasses, MembershipEqualsBfsClassAtN4) {
  auto F = field_make(5);
  for (const auto& D : all_decorations(4, {{2, 1}, {4, 3}}, *F)) {
    const auto C = make_class(F, D);
    ASSERT_TRUE(C.subregular);
    const auto bfs = class_bfs(x_of(F, D), kBudget);
    ASSERT_EQ(member_scan(F, 4, C), bfs);
    std::uint64_t size = 1;
    for (std::size_t e = 0; e < C.A.size(); ++e) size *= 5;
    ASSERT_EQ(bfs.size(), size);
  }
}

TEST(SubregularClasses, ClassSizeIsQToTheA) {
  auto F = field_make(5);
  const auto D = deco(5, {{{2, 1}, 1}, {{5, 4}, 2}});
  const auto bfs = class_bfs(x_of(F, D), kBudget);
  EXPECT_EQ(bfs.size(), 625u);
  const auto C = make_class(F, D);
  for (auto k : bfs) ASSERT_TRUE(class_membership(UnipotentMatrix::unpack(F, 5, k), C));
  EXPECT_FALSE(class_membership(UnipotentMatrix::identity(F, 5), C));
}

TEST(SubregularClasses, CodimMatchesLabelCountForAllD1Subsets) {
  auto F = field_make(7);
  std::mt19937_64 rng(3);
  for (int n = 5; n <= 8; ++n)
    for (int d = 1; d <= max_subregular_d(n); ++d)
      for (const auto& S : subregular_subsets(n, d)) {
        const auto c = classify_subset(n, S);
        if (c.kind != SubsetKind::d_subregular || c.variant != Variant::d1 || c.d != d) continue;
        DecoratedSubset D{n, {}};
        for (auto r : S) D.phi[r] = Elem{1 + static_cast<std::uint32_t>(rng() % 6)};
        const auto C = make_class(F, D);
        ASSERT_EQ(static_cast<int>(C.A.size()), centralizer_codim(x_of(F, D)));
        ASSERT_EQ(C.A.size() + C.B.size(), static_cast<std::size_t>(num_roots(n)));
        for (auto& [r, v] : C.constants.c) ASSERT_FALSE(v.is_zero());
      }
}

// The ideal for the third type without gamma - c0 is strictly larger than
// one class, which is why gamma is kept.
TEST(SubregularClasses, DroppingGammaMergesClasses) {
  auto F = field_make(5);
  auto C = make_class(F, deco(4, {{{2, 1}, 1}, {{4, 3}, 1}}));
  ASSERT_TRUE(C.sreg.third_type);
  const auto exact = member_scan(F, 4, C);
  C.sreg.drop_gamma = true;
  EXPECT_GT(member_scan(F, 4, C).size(), exact.size());
}

TEST(SubregularClasses, KeyIdentifiesClass) {
  auto F = field_make(5);
  std::map<std::string, std::uint64_t> by_key;
  std::map<std::uint64_t, std::string> by_min;
  for (const auto& D : all_decorations(5, {{2, 1}, {5, 4}, {4, 1}, {5, 2}}, *F)) {
    const auto C = make_class(F, D);
    const std::uint64_t m = class_bfs(x_of(F, D), kBudget).front();
    const std::string k = class_key(C);
    if (auto it = by_key.find(k); it != by_key.end()) {
      ASSERT_EQ(it->second, m);
    }
    if (auto it = by_min.find(m); it != by_min.end()) {
      ASSERT_EQ(it->second, k);
    }
    by_key[k] = m;
    by_min[m] = k;
  }
  EXPECT_LT(by_key.size(), 256u);
}

TEST(Centralizer, EquationsMatchCommutationExhaustivelyAtN4) {
  auto F = field_make(5);
  const auto D = deco(4, {{{2, 1}, 2}, {{4, 3}, 3}});
  const auto C = make_class(F, D);
  const auto xd = oracle::dense(x_of(F, D));
  std::uint64_t count = 0;
  for (std::uint64_t k = 0; k < 15625; ++k) {
    const auto g = UnipotentMatrix::unpack(F, 4, k);
    const auto gd = oracle::dense(g);
    const bool commute = oracle::mul(gd, xd, 5) == oracle::mul(xd, gd, 5);
    ASSERT_EQ(commutes_with(g, D), commute);
    ASSERT_EQ(centralizer_check(g, D), commute);
    count += commute;
  }
  std::uint64_t expect = 1;
  for (std::size_t e = 0; e < C.B.size(); ++e) expect *= 5;
  EXPECT_EQ(count, expect);
}

TEST(Centralizer, EquationsMatchCommutationSampledAtN5) {
  auto F = field_make(5);
  const auto D = deco(5, {{{2, 1}, 1}, {{5, 4}, 4}});
  EXPECT_TRUE(centralizer_check(UnipotentMatrix::identity(F, 5), D));
  const auto x = x_of(F, D);
  std::mt19937_64 rng(19);
  int hits = 0;
  for (int t = 0; t < 20000; ++t) {
    auto g = random_unipotent(F, 5, rng);
    // Half the samples are x^a times a central element.
    if (t % 2) {
      g = UnipotentMatrix::identity(F, 5);
      for (std::uint64_t a = rng() % 5; a > 0; --a) g = group_mul(g, x);
      g = group_mul(g, elementary(F, 5, 5, 1, Elem{static_cast<std::uint32_t>(rng() % 5)}));
    }
    const bool c = commute(g, x);
    ASSERT_EQ(centralizer_check(g, D), c);
    hits += c;
  }
  EXPECT_GT(hits, 1000);
}

TEST(ClassBfs, SmallExamples) {
  auto F = field_make(5);
  EXPECT_EQ(class_bfs(UnipotentMatrix::identity(F, 4), kBudget).size(), 1u);
  const auto x = elementary(F, 3, 2, 1, F->one());
  const auto cls = class_bfs(x, kBudget);
  std::vector<std::uint64_t> expect;
  for (std::uint32_t c = 0; c < 5; ++c) {
    auto y = x;
    y.set(3, 1, Elem{c});
    expect.push_back(y.pack());
  }
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(cls, expect);
  // Against full conjugation.
  const auto group = oracle::all_unitri(3, 5);
  EXPECT_EQ(oracle::class_by_full_conjugation(oracle::dense(x), group, 5).size(), 5u);
}

TEST(ClassBfs, BasicCodimMatchesBfsAtN5) {
  auto F = field_make(5);
  std::mt19937_64 rng(23);
  const auto all = basic_subsets(5);
  for (int t = 0; t < 40; ++t) {
    const RootSet& S = all[rng() % all.size()];
    const auto decs = all_decorations(5, S, *F);
    const auto x = x_of(F, decs[rng() % decs.size()]);
    std::uint64_t size = 1;
    for (int e = 0; e < centralizer_codim(x); ++e) size *= 5;
    ASSERT_EQ(class_bfs(x, kBudget).size(), size);
  }
}

TEST(Invariance, N5ZeroFailures) {
  auto F = field_make(5);
  std::mt19937_64 rng(29);
  const auto rep = invariance_suite(F, deco(5, {{{2, 1}, 3}, {{5, 4}, 2}}), 10000, rng);
  EXPECT_EQ(rep.trials, 10000u);
  EXPECT_EQ(rep.failures, 0u);
}

TEST(Invariance, N7WithNonemptyDPlus) {
  auto F = field_make(7);
  std::mt19937_64 rng(31);
  // d = 1, D^+ = {(5,3)}.
  const auto D = deco(7, {{{2, 1}, 2}, {{7, 6}, 5}, {{5, 3}, 3}});
  ASSERT_EQ(make_class(F, D).sreg.dplus.size(), 1u);
  const auto rep = invariance_suite(F, D, 1000, rng);
  EXPECT_EQ(rep.failures, 0u);
}

TEST(Invariance, PerturbedConstantRejectsRepresentative) {
  auto F = field_make(5);
  const auto D = deco(5, {{{2, 1}, 3}, {{5, 4}, 2}});
  const auto x = x_of(F, D);
  auto C = make_class(F, D);
  EXPECT_TRUE(class_membership(x, C));
  C.constants.c_beta = F->add(C.constants.c_beta, F->one());
  EXPECT_FALSE(class_membership(x, C));
  C = make_class(F, D);
  C.constants.c0 = F->add(C.constants.c0, F->one());
  EXPECT_FALSE(class_membership(x, C));
}

TEST(Charmat, AlphaBetaBridgeAtN7) {
  auto F = field_make(7);
  std::mt19937_64 rng(37);
  const int n = 7, d = 1, m = 3;
  const int sa = calibrate_sign(F, n, x_alpha(n, d, m, 3), [&](const UnipotentMatrix& g) { return alpha_poly(g, d, m, 3); }, rng);
  const int sb = calibrate_sign(F, n, x_beta(d, m, 5), [&](const UnipotentMatrix& g) { return beta_poly(g, d, m, 5); }, rng);
  const int sg = calibrate_sign(F, n, x_gamma(n, d), [&](const UnipotentMatrix& g) { return gamma_poly(g, d); }, rng);
  ASSERT_NE(sa, 0);
  ASSERT_NE(sb, 0);
  ASSERT_NE(sg, 0);
  for (int t = 0; t < 1000; ++t) {
    const auto g = random_unipotent(F, n, rng);
    auto signed_coeff = [&](const PairSet& X, int s) {
      const Elem c = charmat_coeff(X, 2, g);
      return s > 0 ? c : F->neg(c);
    };
    ASSERT_EQ(alpha_poly(g, d, m, 3), signed_coeff(x_alpha(n, d, m, 3), sa));
    ASSERT_EQ(beta_poly(g, d, m, 5), signed_coeff(x_beta(d, m, 5), sb));
    ASSERT_EQ(gamma_poly(g, d), signed_coeff(x_gamma(n, d), sg));
  }
}
