#include <gtest/gtest.h>

#include "gen.hpp"
#include "ndsid/errors.hpp"
#include "ndsid/ratpoly.hpp"

namespace ndsid {
namespace {

using testing::Gen;

const Poly s = Poly::lambda();

// Schoolbook product written independently of Poly::operator*.
Poly naive_mul(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rat> c(a.coeffs().size() + b.coeffs().size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return Poly(c);
}

TEST(ParseRat, Forms) {
  EXPECT_EQ(parse_rat("3/6"), Rat(1, 2));
  EXPECT_EQ(parse_rat("-7"), Rat(-7));
  EXPECT_EQ(parse_rat("0.4"), Rat(2, 5));
  EXPECT_EQ(parse_rat("-1.25e-3"), Rat(-1, 800));
  EXPECT_EQ(parse_rat("2E2"), Rat(200));
  EXPECT_EQ(to_string(Rat(-3, 4)), "-3/4");
  EXPECT_THROW(parse_rat("1/0"), ParseError);
  EXPECT_THROW(parse_rat("abc"), ParseError);
  EXPECT_THROW(parse_rat(""), ParseError);
}

TEST(Poly, ZeroHasNoDegree) {
  EXPECT_FALSE(Poly().degree().has_value());
  EXPECT_EQ(Poly(Rat(0)), Poly());
  EXPECT_EQ(*Poly(Rat(3)).degree(), 0);
  EXPECT_EQ(*(s * s - 1).degree(), 2);
}

TEST(PolyGcd, FactorCases) {
  EXPECT_EQ(gcd(s * s - 1, s - 1), s - 1);
  Poly p = 3 * s * s + 6;
  EXPECT_EQ(gcd(p, Poly()), p.monic());
  EXPECT_EQ(gcd(Poly(), p), p.monic());
  EXPECT_TRUE(gcd(Poly(), Poly()).is_zero());
}

TEST(PolyGcd, CommonFactorRecovered) {
  Gen g(11);
  for (int t = 0; t < 60; ++t) {
    Poly q = g.monic_poly(static_cast<int>(g.integer(0, 3)));
    Poly r = g.nonzero_poly(3), w = g.nonzero_poly(3);
    if (!gcd(r, w).is_one()) continue;
    Poly a = naive_mul(q, r), b = naive_mul(q, w);
    Poly d = gcd(a, b);
    EXPECT_EQ(d, q);
    EXPECT_TRUE(divmod(a, d).rem.is_zero());
    EXPECT_TRUE(divmod(b, d).rem.is_zero());
    EXPECT_EQ(naive_mul(divmod(a, d).quot, d), a);
  }
}

TEST(PolyGcd, DividesBoth) {
  Gen g(12);
  for (int t = 0; t < 100; ++t) {
    Poly a = g.poly(5), b = g.poly(4);
    Poly d = gcd(a, b);
    if (d.is_zero()) continue;
    EXPECT_TRUE(divides(d, a));
    EXPECT_TRUE(divides(d, b));
    EXPECT_EQ(d.lead(), 1);
  }
}

TEST(PolyEval, Horner) {
  EXPECT_EQ((s * s + 1).eval(Rat(2)), Rat(5));
  EXPECT_EQ(Poly().eval(Rat(7, 3)), Rat(0));
  Gen g(13);
  for (int t = 0; t < 30; ++t) {
    std::vector<Rat> c;
    for (int k = 0; k <= 5; ++k) c.push_back(g.rat());
    Poly p(c);
    Rat x(3, 7), sum(0), pw(1);
    for (const auto& ck : c) {
      sum += ck * pw;
      pw *= x;
    }
    EXPECT_EQ(p.eval(x), sum);
  }
}

TEST(PolyDivMod, Reconstructs) {
  Gen g(14);
  for (int t = 0; t < 50; ++t) {
    Poly a = g.poly(6), b = g.nonzero_poly(3);
    auto qr = divmod(a, b);
    EXPECT_EQ(naive_mul(qr.quot, b) + qr.rem, a);
    if (!qr.rem.is_zero()) EXPECT_LT(*qr.rem.degree(), *b.degree());
  }
  EXPECT_THROW(divmod(s, Poly()), DivisionByZeroFunction);
}

TEST(RatFunc, TrivialArithmetic) {
  RatFunc a(Poly(Rat(1)), s), b(s - 1, s);
  EXPECT_EQ(ratfunc_arith(RatFuncOp::kAdd, a, b), RatFunc(1L));
  Gen g(15);
  for (int t = 0; t < 20; ++t) {
    Poly p = g.nonzero_poly(3), q = g.nonzero_poly(3);
    EXPECT_EQ(ratfunc_arith(RatFuncOp::kMul, RatFunc(p, q), RatFunc(q, p)), RatFunc(1L));
  }
  EXPECT_THROW(ratfunc_arith(RatFuncOp::kInv, RatFunc()), DivisionByZeroFunction);
  EXPECT_EQ(ratfunc_arith(RatFuncOp::kInv, RatFunc(s)), RatFunc(Poly(Rat(1)), s));
}

TEST(RatFunc, CanonicalForm) {
  RatFunc f(2 * s * s - 2, 4 * s - 4);  // (s+1)/2
  EXPECT_EQ(f.den(), Poly(Rat(1)));
  EXPECT_EQ(f.num(), Rat(1, 2) * (s + 1));
  RatFunc h(s + 2, 3 * s * s + 1);
  EXPECT_EQ(h.den().lead(), 1);
  EXPECT_EQ(RatFunc(h.num(), h.den()), h);  // idempotent
  EXPECT_THROW(RatFunc(s, Poly()), DivisionByZeroFunction);
}

TEST(RatFunc, AddMatchesUnreducedForm) {
  Gen g(16);
  for (int t = 0; t < 80; ++t) {
    RatFunc a = g.ratfunc(3), b = g.ratfunc(3);
    RatFunc sum = a + b;
    RatFunc cross(naive_mul(a.num(), b.den()) + naive_mul(b.num(), a.den()), naive_mul(a.den(), b.den()));
    EXPECT_EQ(sum, cross);
    EXPECT_EQ(sum.den().lead(), 1);
    EXPECT_TRUE(gcd(sum.num(), sum.den()).is_one() || sum.is_zero());
  }
}

TEST(RatFunc, FieldLaws) {
  Gen g(17);
  for (int t = 0; t < 60; ++t) {
    RatFunc a = g.ratfunc(2), b = g.ratfunc(2), c = g.ratfunc(2);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a - a, RatFunc());
    if (!a.is_zero()) EXPECT_EQ(a / a, RatFunc(1L));
  }
}

TEST(RatFunc, EvalAndReflect) {
  RatFunc f(s + 1, s - 2);
  EXPECT_EQ(*f.eval(Rat(3)), Rat(4));
  EXPECT_FALSE(f.eval(Rat(2)).has_value());
  EXPECT_EQ(f.reflect(), RatFunc(-s + 1, -s - 2));
  auto z = f.eval(std::complex<double>(0.0, 1.0));
  EXPECT_NEAR(std::abs(z - std::complex<double>(1.0, 1.0) / std::complex<double>(-2.0, 1.0)), 0.0, 1e-15);
}

}  // namespace
}  // namespace ndsid
