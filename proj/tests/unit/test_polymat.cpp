#include <gtest/gtest.h>

#include "gen.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid {
namespace {

using testing::Gen;

const Poly s = Poly::lambda();

// Max exact rank over the given points, skipping poles.
std::size_t eval_rank(const RatMatrix& g, const std::vector<Rat>& pts) {
  std::size_t r = 0;
  for (const auto& x : pts) {
    try {
      r = std::max(r, rank(eval(g, x)));
    } catch (const DivisionByZeroFunction&) {
    }
  }
  return r;
}

std::vector<Rat> random_points(Gen& g, int n) {
  std::vector<Rat> pts;
  for (int k = 0; k < n; ++k) pts.emplace_back(g.integer(-40, 40), g.integer(1, 9));
  return pts;
}

bool unimodular(const PolyMatrix& m) {
  Poly d = poly_det(m);
  return !d.is_zero() && d.is_constant();
}

void expect_smith_valid(const PolyMatrix& m, const SmithForm& sf) {
  EXPECT_EQ(sf.U * sf.diag(m.rows(), m.cols()) * sf.V, m);
  EXPECT_TRUE(unimodular(sf.U));
  EXPECT_TRUE(unimodular(sf.V));
  for (std::size_t j = 0; j + 1 < sf.d.size(); ++j) EXPECT_TRUE(divides(sf.d[j], sf.d[j + 1]));
  for (const auto& d : sf.d) EXPECT_EQ(d.lead(), 1);
}

TEST(SmithForm, Identity) {
  auto sf = smith_form(PolyMatrix::identity(3));
  EXPECT_EQ(sf.U, PolyMatrix::identity(3));
  EXPECT_EQ(sf.V, PolyMatrix::identity(3));
  EXPECT_EQ(sf.d, (std::vector<Poly>{1L, 1L, 1L}));
}

TEST(SmithForm, AlreadyDiagonal) {
  PolyMatrix m{{s, 0L}, {0L, s * s}};
  auto sf = smith_form(m);
  EXPECT_EQ(sf.d, (std::vector<Poly>{s, s * s}));
  expect_smith_valid(m, sf);
}

TEST(SmithForm, NeedsDivisibilityRepair) {
  PolyMatrix m{{s - 1, 0L}, {0L, s + 1}};
  auto sf = smith_form(m);
  EXPECT_EQ(sf.d, (std::vector<Poly>{1L, s * s - 1}));
  expect_smith_valid(m, sf);
}

TEST(SmithForm, RandomReconstructionAndRank) {
  Gen g(21);
  for (int t = 0; t < 25; ++t) {
    PolyMatrix m = g.polymatrix(3, 4, 2);
    if (t % 3 == 0) {
      // force a rank drop
      for (std::size_t j = 0; j < 4; ++j) m(2, j) = m(0, j) * (s + 1) - m(1, j);
    }
    auto sf = smith_form(m);
    expect_smith_valid(m, sf);
    EXPECT_EQ(sf.rank, eval_rank(to_rat(m), random_points(g, 5)));
  }
}

TEST(SmithMcMillan, Scalar) {
  RatMatrix g{{RatFunc(Poly(Rat(1)), s)}};
  auto sm = smith_mcmillan(g);
  EXPECT_EQ(sm.rank, 1u);
  EXPECT_EQ(sm.alphas[0], Poly(1L));
  EXPECT_EQ(sm.betas[0], s);
  EXPECT_EQ(to_rat(sm.U) * sm.diag(1, 1) * to_rat(sm.V), g);
}

TEST(SmithMcMillan, Zero) {
  auto sm = smith_mcmillan(RatMatrix(2, 2));
  EXPECT_EQ(sm.rank, 0u);
  EXPECT_TRUE(sm.alphas.empty());
}

TEST(SmithMcMillan, RandomReconstruction) {
  Gen g(22);
  for (int t = 0; t < 15; ++t) {
    RatMatrix m = g.ratmatrix(2 + t % 2, 3, 1);
    auto sm = smith_mcmillan(m);
    EXPECT_EQ(to_rat(sm.U) * sm.diag(m.rows(), m.cols()) * to_rat(sm.V), m);
    for (std::size_t j = 0; j < sm.rank; ++j) {
      EXPECT_TRUE(gcd(sm.alphas[j], sm.betas[j]).is_one());
      if (j + 1 < sm.rank) {
        EXPECT_TRUE(divides(sm.alphas[j], sm.alphas[j + 1]));
        EXPECT_TRUE(divides(sm.betas[j + 1], sm.betas[j]));
      }
    }
    EXPECT_EQ(sm.rank, normal_rank(m));
  }
}

TEST(NormalRank, Basics) {
  EXPECT_EQ(normal_rank(to_rat(QMatrix::identity(4))), 4u);
  Gen g(23);
  RatMatrix u = g.ratmatrix(3, 1, 2), v = g.ratmatrix(1, 4, 2);
  u(0, 0) = RatFunc(s + 1);
  v(0, 0) = RatFunc(Poly(Rat(1)), s - 3);
  EXPECT_EQ(normal_rank(u * v), 1u);
  EXPECT_EQ(normal_rank(RatMatrix(3, 2)), 0u);
}

TEST(NormalRank, AgreesWithEvaluationOracle) {
  Gen g(24);
  for (int t = 0; t < 30; ++t) {
    RatMatrix m = g.ratmatrix(4, 4, 2);
    if (t % 2 == 0) {
      for (std::size_t j = 0; j < 4; ++j) m(3, j) = m(0, j) * RatFunc(s) + m(1, j);
    }
    if (t % 5 == 0) {
      for (std::size_t j = 0; j < 4; ++j) m(2, j) = m(1, j) - m(0, j);
    }
    EXPECT_EQ(normal_rank(m), eval_rank(m, random_points(g, 7)));
  }
}

TEST(NormalRank, FncrFnrr) {
  RatMatrix col{{RatFunc(1L)}, {RatFunc(s)}};
  EXPECT_TRUE(is_fncr(col));
  EXPECT_FALSE(is_fnrr(col));
  RatMatrix zc{{RatFunc(s), RatFunc()}, {RatFunc(1L), RatFunc()}};
  EXPECT_FALSE(is_fncr(zc));
}

TEST(ConstNullspace, Examples) {
  QMatrix a{{1, 1}};
  QMatrix n = const_nullspace(a);
  ASSERT_EQ(n.cols(), 1u);
  EXPECT_EQ(n(0, 0), -n(1, 0));
  EXPECT_EQ(const_nullspace(QMatrix::identity(3)).cols(), 0u);
  EXPECT_EQ(const_nullspace(QMatrix::identity(3)).rows(), 3u);
  EXPECT_THROW(const_nullspace(RatMatrix{{RatFunc(s)}}), PreconditionViolated);
}

TEST(ConstNullspace, RankNullity) {
  Gen g(25);
  for (int t = 0; t < 30; ++t) {
    QMatrix a = g.qmatrix_of_rank(4, 6, static_cast<std::size_t>(g.integer(0, 3)));
    QMatrix n = const_nullspace(a);
    EXPECT_TRUE((a * n).is_zero());
    EXPECT_EQ(rank(a) + n.cols(), 6u);
    EXPECT_EQ(rank(n), n.cols());
  }
}

TEST(ConstNullspace, SplitRankProperty) {
  // A = [A1; A2] with A1 column deficient is FCR iff A2 * A1^perp is FCR.
  Gen g(26);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 4;
    QMatrix a1 = g.qmatrix_of_rank(2, n, static_cast<std::size_t>(g.integer(0, 2)));
    QMatrix a2 = g.qmatrix_of_rank(3, n, static_cast<std::size_t>(g.integer(1, 3)));
    QMatrix perp = const_nullspace(a1);
    ASSERT_GT(perp.cols(), 0u);
    EXPECT_EQ(is_fcr(vcat(a1, a2)), is_fcr(a2 * perp));
  }
}

TEST(RatInverse, Examples) {
  EXPECT_EQ(rat_inverse(to_rat(QMatrix::identity(3))), to_rat(QMatrix::identity(3)));
  RatMatrix d{{RatFunc(s), RatFunc()}, {RatFunc(), RatFunc(Poly(Rat(1)), s)}};
  RatMatrix di{{RatFunc(Poly(Rat(1)), s), RatFunc()}, {RatFunc(), RatFunc(s)}};
  EXPECT_EQ(rat_inverse(d), di);
  RatMatrix sing{{RatFunc(s), RatFunc(s)}, {RatFunc(1L), RatFunc(1L)}};
  EXPECT_THROW(rat_inverse(sing), SingularMatrix);
}

TEST(RatInverse, RandomProducts) {
  Gen g(27);
  for (int t = 0; t < 20; ++t) {
    RatMatrix gz = g.ratmatrix(2, 2, 1);
    RatMatrix phi = to_rat(g.qmatrix(2, 2));
    RatMatrix m = to_rat(QMatrix::identity(2)) - gz * phi;
    if (rat_det(m).is_zero()) continue;
    EXPECT_EQ(m * rat_inverse(m), to_rat(QMatrix::identity(2)));
  }
}

TEST(Determinant, SylvesterIdentity) {
  Gen g(28);
  for (int t = 0; t < 20; ++t) {
    std::size_t p = static_cast<std::size_t>(g.integer(1, 3)), q = static_cast<std::size_t>(g.integer(1, 3));
    RatMatrix a = g.ratmatrix(p, q, 1), b = g.ratmatrix(q, p, 1);
    EXPECT_EQ(rat_det(to_rat(QMatrix::identity(p)) - a * b), rat_det(to_rat(QMatrix::identity(q)) - b * a));
  }
}

TEST(Determinant, BareissMatchesFieldElimination) {
  Gen g(29);
  for (int t = 0; t < 20; ++t) {
    PolyMatrix m = g.polymatrix(3, 3, 2);
    EXPECT_EQ(RatFunc(poly_det(m)), det(to_rat(m)));
  }
}

TEST(Resolvent, ScalarAndOracle) {
  QMatrix a{{Rat(2)}};
  RatMatrix g = state_space_tfm(a, QMatrix{{1}}, QMatrix{{1}}, QMatrix{{0}});
  EXPECT_EQ(g(0, 0), RatFunc(Poly(Rat(1)), s - 2));
  Gen gen(30);
  for (int t = 0; t < 10; ++t) {
    QMatrix a3 = gen.qmatrix(3, 3);
    auto r = resolvent(a3);
    // (lambda I - A) adj = chi I
    PolyMatrix li = PolyMatrix::identity(3);
    PolyMatrix si = li.map([&](const Poly& p) { return p * s; });
    PolyMatrix lhs = (si - to_poly(a3)) * r.adj;
    PolyMatrix rhs = li.map([&](const Poly& p) { return p * r.chi; });
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(r.chi, poly_det(si - to_poly(a3)));
  }
}

}  // namespace
}  // namespace ndsid
