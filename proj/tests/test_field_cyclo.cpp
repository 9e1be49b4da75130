#include <gtest/gtest.h>

#include <vector>

#include "unitri/cyclo.hpp"
#include "unitri/field.hpp"

using namespace unitri;

TEST(FieldMake, PrimeFieldHasNoModulus) {
  auto F = field_make(5, 1, 5);
  EXPECT_EQ(F->q(), 5u);
  EXPECT_TRUE(F->modulus().empty());
  EXPECT_EQ(field_make(7, 1, 6)->q(), 7u);
}

TEST(FieldMake, RejectsBadParameters) {
  EXPECT_THROW(field_make(6, 1), InvalidArgument);
  EXPECT_THROW(field_make(1, 1), InvalidArgument);
  EXPECT_THROW(field_make(3, 1, 4), InvalidArgument);
  EXPECT_THROW(field_make(5, 0), InvalidArgument);
  EXPECT_THROW(field_make(2, 20), InvalidArgument);
}

// Smallest monic irreducible quadratic over F_5, by root search.
TEST(FieldMake, Gf25ModulusIsLexSmallestIrreducible) {
  auto F = field_make(5, 2, 4);
  // Lower-degree coefficients compare first, so a0 is the outer loop.
  std::vector<int> best;
  for (int a0 = 0; a0 < 5 && best.empty(); ++a0)
    for (int a1 = 0; a1 < 5 && best.empty(); ++a1) {
      bool root = false;
      for (int x = 0; x < 5; ++x) root = root || (x * x + a1 * x + a0) % 5 == 0;
      if (!root) best = {a0, a1, 1};
    }
  EXPECT_EQ(F->modulus(), best);
}

// Multiplication in F_25 against schoolbook polynomial products mod m(x).
TEST(FieldAxioms, Gf25MultiplicationMatchesPolynomialOracle) {
  auto F = field_make(5, 2);
  const auto m = F->modulus();
  for (std::uint32_t a = 0; a < 25; ++a)
    for (std::uint32_t b = 0; b < 25; ++b) {
      const int a0 = a % 5, a1 = a / 5, b0 = b % 5, b1 = b / 5;
      // (a0 + a1 x)(b0 + b1 x) with x^2 = -(m1 x + m0)
      int c0 = a0 * b0, c1 = a0 * b1 + a1 * b0, c2 = a1 * b1;
      c0 -= c2 * m[0];
      c1 -= c2 * m[1];
      c0 = ((c0 % 5) + 5) % 5;
      c1 = ((c1 % 5) + 5) % 5;
      ASSERT_EQ(F->mul(Elem{a}, Elem{b}).v, static_cast<std::uint32_t>(c0 + 5 * c1));
      ASSERT_EQ(F->add(Elem{a}, Elem{b}).v, static_cast<std::uint32_t>((a0 + b0) % 5 + 5 * ((a1 + b1) % 5)));
    }
}

class FieldEnum : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(FieldEnum, AxiomsOnFullEnumeration) {
  auto [p, r] = GetParam();
  auto F = field_make(p, r);
  const std::uint32_t q = F->q();
  for (std::uint32_t a = 0; a < q; ++a) {
    const Elem x{a};
    if (a) {
      ASSERT_EQ(F->mul(x, F->inv(x)), F->one());
    }
    ASSERT_EQ(F->add(x, F->neg(x)), F->zero());
    for (std::uint32_t b = 0; b < q; ++b) {
      const Elem y{b};
      ASSERT_EQ(F->frobenius(F->add(x, y)), F->add(F->frobenius(x), F->frobenius(y)));
      for (std::uint32_t c = 0; c < q; c += (q > 25 ? 3 : 1)) {
        const Elem z{c};
        ASSERT_EQ(F->mul(F->mul(x, y), z), F->mul(x, F->mul(y, z)));
        ASSERT_EQ(F->add(F->add(x, y), z), F->add(x, F->add(y, z)));
        ASSERT_EQ(F->mul(x, F->add(y, z)), F->add(F->mul(x, y), F->mul(x, z)));
      }
    }
  }
}

TEST_P(FieldEnum, ThetaIsAdditiveAndSumsToZero) {
  auto [p, r] = GetParam();
  auto F = field_make(p, r);
  CycloValue s = cyclo_zero(*F);
  for (std::uint32_t a = 0; a < F->q(); ++a) {
    s += theta(*F, Elem{a});
    for (std::uint32_t b = 0; b < F->q(); ++b)
      ASSERT_EQ(theta(*F, F->add(Elem{a}, Elem{b})), theta(*F, Elem{a}) * theta(*F, Elem{b}));
  }
  EXPECT_TRUE(s.is_zero());
}

INSTANTIATE_TEST_SUITE_P(SmallFields, FieldEnum,
                         ::testing::Values(std::pair{2, 1}, std::pair{5, 1}, std::pair{7, 1}, std::pair{3, 2},
                                           std::pair{5, 2}, std::pair{7, 2}, std::pair{2, 3}));

TEST(FieldTrace, PrimeFieldTraceIsIdentity) {
  auto F = field_make(5);
  EXPECT_EQ(F->trace(Elem{3}), 3);
  EXPECT_EQ(F->trace(Elem{0}), 0);
}

// Tr(x) = x + x^5 on F_25, computed with repeated multiplication.
TEST(FieldTrace, Gf25TraceIsAdditiveAndSurjective) {
  auto F = field_make(5, 2);
  std::vector<int> hits(5, 0);
  for (std::uint32_t a = 0; a < 25; ++a) {
    Elem x5 = F->one();
    for (int k = 0; k < 5; ++k) x5 = F->mul(x5, Elem{a});
    const Elem t = F->add(Elem{a}, x5);
    ASSERT_LT(t.v, 5u);
    ASSERT_EQ(F->trace(Elem{a}), static_cast<int>(t.v));
    ++hits[t.v];
    for (std::uint32_t b = 0; b < 25; ++b)
      ASSERT_EQ(F->trace(F->add(Elem{a}, Elem{b})), (F->trace(Elem{a}) + F->trace(Elem{b})) % 5);
  }
  for (int h : hits) EXPECT_EQ(h, 5);
}

TEST(Theta, Values) {
  auto F = field_make(5);
  EXPECT_TRUE(theta(*F, Elem{0}).equals_integer(1));
  EXPECT_EQ(theta(*F, Elem{2}), CycloValue::zeta_power(5, 5, 2));
  EXPECT_EQ(theta(*F, Elem{2}).numerator(), (std::vector<std::int64_t>{0, 0, 1, 0}));
  for (std::uint32_t t = 1; t < 5; ++t) {
    CycloValue s = cyclo_zero(*F);
    for (std::uint32_t c = 0; c < 5; ++c) s += theta(*F, F->mul(Elem{c}, Elem{t}));
    EXPECT_TRUE(s.is_zero());
  }
}

TEST(Cyclo, RingOperations) {
  auto F = field_make(5);
  const CycloValue one = cyclo_integer(*F, 1);
  EXPECT_TRUE((one + (-one)).is_zero());
  EXPECT_TRUE((theta(*F, Elem{1}) * theta(*F, Elem{4})).equals_integer(1));
  CycloValue s = cyclo_zero(*F);
  for (int k = 0; k < 5; ++k) s += CycloValue::zeta_power(5, 5, k);
  EXPECT_TRUE(s.is_zero());
  EXPECT_EQ(s.q_exponent(), 0);
  // zeta^4 = -(1 + zeta + zeta^2 + zeta^3) in the basis.
  EXPECT_EQ(CycloValue::zeta_power(5, 5, 4).numerator(), (std::vector<std::int64_t>{-1, -1, -1, -1}));
}

TEST(Cyclo, ConjugationProperties) {
  auto F = field_make(7);
  for (std::uint32_t a = 0; a < 7; ++a) {
    const CycloValue x = theta(*F, Elem{a}) + cyclo_integer(*F, 3);
    EXPECT_EQ(theta(*F, Elem{a}).conj(), theta(*F, F->neg(Elem{a})));
    EXPECT_EQ(x.conj().conj(), x);
    for (std::uint32_t b = 0; b < 7; ++b) {
      const CycloValue y = theta(*F, Elem{b}) * cyclo_integer(*F, 2);
      EXPECT_EQ((x + y).conj(), x.conj() + y.conj());
      EXPECT_EQ((x * y).conj(), x.conj() * y.conj());
    }
  }
}

TEST(Cyclo, NormalFormIsMinimal) {
  auto F = field_make(5);
  const CycloValue z = theta(*F, Elem{1});
  const CycloValue a = (z * cyclo_integer(*F, 25)).scaled_by_q_power(-3);
  EXPECT_EQ(a.q_exponent(), 1);
  EXPECT_EQ(a, z.scaled_by_q_power(-1));
  EXPECT_EQ(cyclo_zero(*F).scaled_by_q_power(-4).q_exponent(), 0);
  // Numerator divisible by q only as a whole: 5 zeta - 5 reduces, 5 zeta + 1 does not.
  EXPECT_EQ(((z - cyclo_integer(*F, 1)) * cyclo_integer(*F, 5)).scaled_by_q_power(-2).q_exponent(), 1);
  EXPECT_EQ((z * cyclo_integer(*F, 5) + cyclo_integer(*F, 1)).scaled_by_q_power(-1).q_exponent(), 1);
}

TEST(Cyclo, MismatchedPrimeIsRejected) {
  const CycloValue a = CycloValue::integer(5, 5, 1), b = CycloValue::integer(7, 7, 1);
  EXPECT_THROW((void)(a + b), InvalidArgument);
}
