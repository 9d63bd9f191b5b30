#include <gtest/gtest.h>

#include "nacap/nacap.hpp"
#include "support/support.hpp"

using namespace nacap;

namespace {

LCElement eps(const Rational& q = 1) { return LCElement::epsilon(q); }

}  // namespace

TEST(LeviCivita, MonomialArithmeticIsExact) {
  const LCElement x = LCElement(2) + eps();
  const LCElement y = LCElement(1) - eps(Rational(1, 2));
  const LCElement p = x * y;
  EXPECT_TRUE(p.is_exact());
  EXPECT_EQ(format(p), "2 - 2*e^(1/2) + 1*e^(1) - 1*e^(3/2)");
  EXPECT_EQ(p.valuation(), ExtRational(Rational(0)));
  EXPECT_EQ(x - x, LCElement(0));
  EXPECT_TRUE((x - x).is_exact_zero());
}

TEST(LeviCivita, OrderFollowsLeadingTerm) {
  EXPECT_LT(eps(), LCElement(Rational(1, 1000000)));
  EXPECT_GT(eps(-1), LCElement(1000000));
  EXPECT_LT(LCElement(1) - eps(), LCElement(1));
  EXPECT_GT(eps(2), LCElement(0));
  EXPECT_LT(-eps(5), LCElement(0));
  EXPECT_EQ(eps().magnitude(), Magnitude::infinitesimal);
  EXPECT_EQ(eps(-1).magnitude(), Magnitude::infinitely_large);
  EXPECT_EQ(LCElement(3).magnitude(), Magnitude::finite_nonzero_standard_part);
  EXPECT_EQ(LCElement(0).magnitude(), Magnitude::zero);
}

TEST(LeviCivita, InverseOfOneMinusEpsIsGeometricSeries) {
  const LCElement inv = (LCElement(1) - eps()).inverse();
  ASSERT_TRUE(inv.guarantee());
  EXPECT_EQ(*inv.guarantee(), Rational(32));
  for (int k = 0; k < 32; ++k) EXPECT_EQ(inv.coefficient_at(k), 1) << k;
  EXPECT_THROW(inv.coefficient_at(32), PrecisionExhausted);
  EXPECT_TRUE(approx_equal(inv * (LCElement(1) - eps()), LCElement(1)));
}

TEST(LeviCivita, MonomialInverseIsExact) {
  const LCElement x = LCElement::monomial(Rational(3, 2), Rational(-5, 3));
  EXPECT_TRUE(x.inverse().is_exact());
  EXPECT_EQ(x * x.inverse(), LCElement(1));
  EXPECT_THROW(LCElement(0).inverse(), DomainError);
}

TEST(LeviCivita, WindowTruncationLowersGuarantee) {
  PrecisionScope scope(PrecisionConfig{4, 256});
  const LCElement x = LCElement(1) + eps(3) + eps(5);
  ASSERT_TRUE(x.guarantee());
  EXPECT_EQ(*x.guarantee(), Rational(4));
  EXPECT_EQ(format(x), "1 + 1*e^(3)");
  EXPECT_EQ(x.relative_precision(), ExtRational(Rational(4)));
}

TEST(LeviCivita, MaxTermsTruncation) {
  PrecisionScope scope(PrecisionConfig{100, 2});
  const LCElement x = LCElement(1) + eps(1) + eps(2);
  EXPECT_EQ(x.terms().size(), 2u);
  EXPECT_EQ(x.guarantee(), ExtRational(Rational(2)));
}

TEST(LeviCivita, ZeroLikeSignIsUndecidable) {
  PrecisionScope scope(PrecisionConfig{4, 256});
  const LCElement a = (LCElement(1) - eps()).inverse();
  const LCElement b = LCElement(1) + eps() + eps(2) + eps(3);
  const LCElement d = a - b;
  EXPECT_TRUE(d.is_zero_like());
  EXPECT_FALSE(d.is_exact_zero());
  EXPECT_THROW((void)d.sign(), PrecisionExhausted);
  EXPECT_FALSE(try_sign(d).has_value());
  EXPECT_FALSE(certified_positive(d));
  EXPECT_TRUE(approx_equal(a, b));
  EXPECT_EQ(d.valuation_lower_bound(), ExtRational(Rational(4)));
}

TEST(LeviCivita, PrecisionScopeRestores) {
  const Rational before = current_precision().window;
  {
    PrecisionScope outer(PrecisionConfig{8, 16});
    EXPECT_EQ(current_precision().window, 8);
    {
      PrecisionScope inner(PrecisionConfig{2, 16});
      EXPECT_EQ(current_precision().window, 2);
    }
    EXPECT_EQ(current_precision().window, 8);
  }
  EXPECT_EQ(current_precision().window, before);
  EXPECT_THROW(PrecisionScope(PrecisionConfig{0, 4}), PreconditionFailed);
}

TEST(Literal, RoundTrip) {
  for (const std::string s : {"0", "1", "-3/4", "1 - 1*e^(1)", "2*e^(-1/2) + 1*e^(3)", "-1*e^(2/3)"}) {
    const LCElement x = parse_lc(s);
    EXPECT_EQ(format(x), s);
    EXPECT_EQ(parse_lc(format(x)), x);
  }
  EXPECT_THROW((void)parse_lc("e^(1) + e^(1)"), ParseError);
  EXPECT_EQ(parse_lc("e^(2) + 1"), LCElement(1) + eps(2));
}

TEST(Literal, ErrorsCarryPosition) {
  try {
    (void)parse_lc("1 + e^(x)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
  EXPECT_THROW((void)parse_lc("1 +"), ParseError);
  EXPECT_THROW((void)parse_lc("e"), ParseError);
  EXPECT_THROW((void)parse_rational("1/0"), ParseError);
}

TEST(RationalFunction, ArithmeticAndEvaluation) {
  const RFElement r = RFElement::r();
  const RFElement f = (RFElement(1) + r) / (RFElement(1) - r);
  EXPECT_EQ(f.evaluate(Rational(1, 3)), 2);
  EXPECT_THROW((void)f.evaluate(1), DomainError);
  EXPECT_EQ(f * (RFElement(1) - r), RFElement(1) + r);
  EXPECT_EQ(f.valuation(), ExtRational(Rational(0)));
  EXPECT_EQ((r * r / (RFElement(3) + r)).valuation(), ExtRational(Rational(2)));
  EXPECT_LT(r, RFElement(Rational(1, 1000)));
  EXPECT_GT(RFElement(1) / r, RFElement(1000));
}

TEST(RationalFunction, EmbedIntoLeviCivita) {
  const RFElement r = RFElement::r();
  const LCElement e = (RFElement(1) / (RFElement(1) - r)).embed();
  EXPECT_TRUE(approx_equal(e, (LCElement(1) - eps()).inverse()));
  EXPECT_EQ((r * r).embed(), eps(2));
}

TEST(RationalFunction, LiteralRoundTrip) {
  const RFElement f = parse_rf("(1 + r)/(2 - r^(2))");
  EXPECT_EQ(parse_rf(format(f)), f);
  EXPECT_EQ(f.evaluate(0), Rational(1, 2));
}

TEST(FieldTraits, Helpers) {
  EXPECT_EQ(FieldOps<Rational>::sign(Rational(-2)), -1);
  EXPECT_FALSE(FieldOps<Rational>::guarantee(Rational(1)).has_value());
  EXPECT_EQ(FieldOps<LCElement>::monomial(3, 2), LCElement::monomial(3, 2));
  EXPECT_EQ(FieldOps<RFElement>::monomial(3, 2), RFElement::monomial(3, 2));
  EXPECT_EQ(field_max(eps(), eps(2)), eps());
  EXPECT_TRUE(certified_nonzero(eps(40)));
  EXPECT_TRUE(le_within_guarantee(LCElement(1), LCElement(1) + eps()));
}
