#include <gtest/gtest.h>

#include "model_gen.hpp"
#include "ndsid/circuit.hpp"
#include "ndsid/ident.hpp"
#include "oracles.hpp"

namespace ndsid {
namespace {

using testing::Gen;

NdsModel two_random(Gen& g) {
  return testing::network_of(g, {testing::random_lft(g), testing::random_lft(g)});
}

TEST(NdsTfm, ZeroScmGivesGyu) {
  Gen g(1);
  NdsModel m = two_random(g);
  EXPECT_EQ(nds_tfm(m, QMatrix(m.total_v(), m.total_z())), network_tfms(m).G_yu);
}

TEST(NdsTfm, SeriesTruncatesWhenGzvVanishes) {
  Gen g(2);
  NdsModel m = testing::network_of(g, {testing::random_gzv_zero(g), testing::random_gzv_zero(g)});
  TfmBundle b = network_tfms(m);
  ASSERT_TRUE(b.G_zv.is_zero());
  EXPECT_EQ(nds_tfm(m, m.phi.phi), b.G_yu + b.G_yv * to_rat(m.phi.phi) * b.G_zu);
}

TEST(NdsTfm, MatchesMonolithicRealization) {
  Gen g(3);
  for (int t = 0; t < 8; ++t) {
    NdsModel m = two_random(g);
    ClosedLoop cl = closed_loop(m, m.phi.phi);
    EXPECT_EQ(nds_tfm(m, m.phi.phi), testing::ss_by_inverse(cl.A, cl.B, cl.C, cl.D));
  }
  NdsModel c = circuit_sweep_model(Rat(2, 5));
  c.phi.phi = QMatrix{{Rat(1, 3), 0, Rat(-1, 2), Rat(1, 5)}, {0, Rat(2, 3), Rat(1, 7), 0}};
  ClosedLoop cl = closed_loop(c, c.phi.phi);
  EXPECT_EQ(nds_tfm(c, c.phi.phi), testing::ss_by_inverse(cl.A, cl.B, cl.C, cl.D));
}

TEST(NdsTfm, IllPosed) {
  SubsystemRealized r = SubsystemRealized::zeros({1, 1, 0, 1, 1, 0, 0});
  r.A_zv = QMatrix{{1}};
  NdsModel m;
  m.subsystems = {SubsystemLft::from_realized(r)};
  m.phi.phi = QMatrix{{1}};
  EXPECT_THROW(nds_tfm(m, m.phi.phi), IllPosedNds);
  EXPECT_THROW(check_sufficient(m), IllPosedNds);
}

TEST(NdsTfm, DifferenceFactorization) {
  Gen g(4);
  for (int t = 0; t < 6; ++t) {
    NdsModel m = two_random(g);
    QMatrix p1 = m.phi.phi, p2 = testing::random_phi(g, m);
    TfmBundle b = network_tfms(m);
    RatMatrix gzv = b.G_zv;
    RatMatrix i_v = RatMatrix::identity(m.total_v()), i_z = RatMatrix::identity(m.total_z());
    RatMatrix rhs = b.G_yv * rat_inverse(i_v - to_rat(p2) * gzv) * to_rat(QMatrix(p1 - p2)) *
                    rat_inverse(i_z - gzv * to_rat(p1)) * b.G_zu;
    EXPECT_EQ(nds_tfm(m, p1) - nds_tfm(m, p2), rhs);
  }
}

TEST(FreeResponse, ZeroScm) {
  Gen g(5);
  NdsModel m = two_random(g);
  SubsystemRealized n = network_realized(m);
  RatMatrix expect = testing::ss_by_inverse(n.A_xx, QMatrix::identity(n.dims.m_x), n.C_x,
                                            QMatrix(n.dims.m_y, n.dims.m_x));
  EXPECT_EQ(free_response_tfm(m, QMatrix(m.total_v(), m.total_z())), expect);
}

TEST(FreeResponse, NoStateToZ) {
  Gen g(6);
  Dims d = testing::random_dims(g);
  d.m_x = 2;
  SubsystemLft s = testing::random_lft(g, d);
  s.A_zx0 = QMatrix(d.m_z, 2);
  s.H_z = QMatrix(d.m_z, d.m_p);
  NdsModel m = testing::network_of(g, {s});
  EXPECT_EQ(free_response_tfm(m, m.phi.phi), free_response_tfm(m, QMatrix(m.total_v(), m.total_z())));
}

TEST(FreeResponse, MatchesMonolithicRealization) {
  Gen g(7);
  for (int t = 0; t < 6; ++t) {
    NdsModel m = two_random(g);
    ClosedLoop cl = closed_loop(m, m.phi.phi);
    RatMatrix expect =
        testing::ss_by_inverse(cl.A, QMatrix::identity(cl.A.rows()), cl.C, QMatrix(cl.C.rows(), cl.A.rows()));
    EXPECT_EQ(free_response_tfm(m, m.phi.phi), expect);
  }
}

TEST(Sufficient, CircuitVerdicts) {
  IdentVerdict v = check_sufficient(circuit_sweep_model(Rat(2, 5)));
  EXPECT_EQ(v.status, Status::Identifiable);
  ASSERT_EQ(v.ranks.size(), 2u);
  EXPECT_TRUE(v.ranks[0].yv_fncr);
  EXPECT_TRUE(v.ranks[1].zu_fnrr);

  IdentVerdict h = check_sufficient(circuit_sweep_model(Rat(1, 2)));
  EXPECT_EQ(h.status, Status::Inconclusive);
  for (const auto& r : h.ranks) {
    EXPECT_TRUE(r.yv_fncr);
    EXPECT_FALSE(r.zu_fnrr);
    EXPECT_EQ(*r.zu_rank, 1u);
  }
}

TEST(Sufficient, TooFewOutputs) {
  Gen g(8);
  Dims d = testing::random_dims(g);
  d.m_v = 2;
  d.m_y = 1;
  NdsModel m = testing::network_of(g, {testing::random_lft(g, d)});
  EXPECT_EQ(check_sufficient(m).status, Status::Inconclusive);
  EXPECT_FALSE(check_sufficient(m).ranks[0].yv_fncr);
}

TEST(Xi, ConstantIdentities) {
  XiMatrix xi = xi_matrix(to_rat(QMatrix::identity(2)), to_rat(QMatrix::identity(3)));
  EXPECT_EQ(xi.matrix, QMatrix::identity(6));
  EXPECT_EQ(xi.d_left, 0);
  EXPECT_EQ(xi.d_right, 0);
}

TEST(Xi, ZeroLeftHasNoRows) {
  XiMatrix xi = xi_matrix(RatMatrix(2, 2), to_rat(QMatrix::identity(1)));
  EXPECT_EQ(xi.matrix.rows(), 0u);
  EXPECT_EQ(xi.matrix.cols(), 2u);
  EXPECT_LT(rank(xi.matrix), xi.matrix.cols());
}

TEST(Xi, NullSpaceMatchesSymbolicProduct) {
  Gen g(9);
  for (int t = 0; t < 25; ++t) {
    std::size_t r = g.count(1, 3), mv = g.count(1, 3), mz = g.count(1, 3), c = g.count(1, 3);
    // Low-rank factors make nontrivial kernels common.
    RatMatrix left = g.ratmatrix(r, 1, 1) * g.ratmatrix(1, mv, 1);
    if (g.coin()) left = g.ratmatrix(r, mv, 1);
    RatMatrix right = g.ratmatrix(mz, c, 1);
    XiMatrix xi = xi_matrix(left, right);
    QMatrix ns = nullspace(xi.matrix);
    EXPECT_EQ(ns.cols(), testing::sampled_kernel_dim(left, right));
    for (std::size_t k = 0; k < ns.cols(); ++k) {
      QMatrix delta = xi_delta(xi, ns.col(k));
      EXPECT_TRUE((left * to_rat(delta) * right).is_zero());
    }
  }
}

TEST(StructurePrior, EmptyAndFullMask) {
  XiMatrix xi = xi_matrix(RatMatrix(1, 2), to_rat(QMatrix::identity(1)));
  EXPECT_EQ(apply_structure_prior(xi, {}).matrix, xi.matrix);
  XiMatrix all = apply_structure_prior(xi, {{true}, {true}});
  EXPECT_EQ(all.matrix.cols(), 0u);
  EXPECT_EQ(rank(all.matrix), all.matrix.cols());
}

TEST(StructurePrior, MaskedNullSupportRestoresRank) {
  XiMatrix xi = xi_matrix(to_rat(QMatrix{{1, 0}}), to_rat(QMatrix{{1}}));
  EXPECT_EQ(rank(xi.matrix), 1u);
  XiMatrix reduced = apply_structure_prior(xi, {{false}, {true}});
  EXPECT_EQ(rank(reduced.matrix), reduced.matrix.cols());
  XiMatrix wrong = apply_structure_prior(xi, {{true}, {false}});
  EXPECT_LT(rank(wrong.matrix), wrong.matrix.cols());
}

TEST(Thm5, SquareUnimodularIsIdentifiable) {
  SubsystemRealized r = SubsystemRealized::zeros({2, 2, 0, 2, 2, 0, 0});
  r.C_v = QMatrix{{1, 1}, {0, 1}};
  r.B_z = QMatrix{{2, 0}, {1, 1}};
  NdsModel m;
  m.subsystems = {SubsystemLft::from_realized(r)};
  m.phi.phi = QMatrix(2, 2);
  IdentVerdict v = check_thm5(m);
  EXPECT_EQ(v.status, Status::Identifiable);
  EXPECT_FALSE(v.witness);
}

TEST(Thm5, ZeroGyvGivesWitness) {
  Gen g(10);
  SubsystemLft a = testing::random_gzv_zero(g);
  SubsystemLft b = testing::random_gzv_zero(g);
  b.C_v0 = QMatrix(b.dims.m_y, b.dims.m_v);
  b.C_x0 = QMatrix(b.dims.m_y, b.dims.m_x);
  NdsModel m = testing::network_of(g, {a, b});
  IdentVerdict v = check_thm5(m);
  ASSERT_EQ(v.status, Status::Unidentifiable);
  ASSERT_TRUE(v.witness);
  EXPECT_FALSE(v.witness->delta.is_zero());
  EXPECT_EQ(nds_tfm(m, v.witness->phi1), nds_tfm(m, v.witness->phi2));
  bool row_two = false;
  for (const auto& s : v.xi) row_two = row_two || (s.i == 1 && !s.fcr());
  EXPECT_TRUE(row_two);
}

TEST(Thm5, RejectsNonzeroGzv) {
  NdsModel m = circuit_sweep_model(Rat(2, 5));
  m.subsystems[0].A_zv0 = QMatrix{{1}, {0}};
  EXPECT_THROW(check_thm5(m), PreconditionViolated);
}

TEST(Thm5, AgreesWithSamplingOracle) {
  Gen g(11);
  int unident = 0;
  for (int t = 0; t < 25; ++t) {
    testing::DimBounds b{2, 3, 2, 3, 3, 0, 0};
    NdsModel m = testing::network_of(g, {testing::random_gzv_zero(g, b), testing::random_gzv_zero(g, b)},
                                     g.coin(0.3) ? 0.3 : 0.0);
    IdentVerdict v = check_thm5(m);
    TfmBundle net = network_tfms(m);
    std::size_t kdim = testing::sampled_kernel_dim(net.G_yv, net.G_zu, m.phi.fixed_zero);
    EXPECT_EQ(v.status == Status::Identifiable, kdim == 0);
    if (v.status == Status::Unidentifiable) {
      ++unident;
      ASSERT_TRUE(v.witness);
      EXPECT_EQ(nds_tfm(m, v.witness->phi1), nds_tfm(m, v.witness->phi2));
    }
  }
  EXPECT_GT(unident, 0);
}

TEST(Thm5, SufficientNeverContradicts) {
  Gen g(12);
  for (int t = 0; t < 15; ++t) {
    NdsModel m = testing::network_of(g, {testing::random_gzv_zero(g), testing::random_gzv_zero(g)});
    if (check_sufficient(m).status == Status::Identifiable) EXPECT_EQ(check_thm5(m).status, Status::Identifiable);
  }
}

// Subsystem with y = z and u entering like v, so G_yv = G_zv = G_zu.
SubsystemLft mirrored(Gen& g, std::size_t mx, std::size_t mv, std::size_t mz, bool dead_input) {
  SubsystemRealized r = SubsystemRealized::zeros({mv, mv, mx, mz, mz, 0, 0});
  r.A_xx = g.qmatrix(mx, mx);
  r.A_xv = g.qmatrix(mx, mv);
  r.A_zx = g.qmatrix(mz, mx);
  r.A_zv = g.qmatrix(mz, mv, 0.5);
  if (dead_input) {
    for (std::size_t i = 0; i < mx; ++i) r.A_xv(i, mv - 1) = Rat(0);
    for (std::size_t i = 0; i < mz; ++i) r.A_zv(i, mv - 1) = Rat(0);
  }
  r.B_x = r.A_xv;
  r.B_z = r.A_zv;
  r.C_x = r.A_zx;
  r.C_v = r.A_zv;
  r.D_u = r.A_zv;
  return SubsystemLft::from_realized(r);
}

TEST(Cor2, IdentityFactorization) {
  Gen g(13);
  NdsModel m = testing::network_of(g, {mirrored(g, 2, 1, 1, false), mirrored(g, 1, 1, 1, false)});
  RatMatrix iz = RatMatrix::identity(m.total_z());
  IdentVerdict v = check_cor2(m, iz, iz);
  EXPECT_EQ(v.status, Status::Identifiable);
  EXPECT_EQ(v.xi.size(), 4u);
}

TEST(Cor2, ScalarNonzero) {
  SubsystemRealized r = SubsystemRealized::zeros({1, 1, 1, 1, 1, 0, 0});
  r.A_xx = QMatrix{{-1}};
  r.A_xv = r.B_x = QMatrix{{1}};
  r.A_zx = r.C_x = QMatrix{{1}};
  NdsModel m;
  m.subsystems = {SubsystemLft::from_realized(r)};
  m.phi.phi = QMatrix{{Rat(1, 2)}};
  EXPECT_EQ(check_cor2(m, to_rat(QMatrix{{1}}), to_rat(QMatrix{{1}})).status, Status::Identifiable);
}

TEST(Cor2, DeadInputGivesVerifiedWitness) {
  Gen g(14);
  NdsModel m = testing::network_of(g, {mirrored(g, 2, 2, 1, true), mirrored(g, 2, 1, 1, false)});
  IdentVerdict v = check_cor2(m, RatMatrix::identity(m.total_z()), RatMatrix::identity(m.total_v()));
  ASSERT_EQ(v.status, Status::Unidentifiable);
  ASSERT_TRUE(v.witness);
  const Witness& w = *v.witness;
  EXPECT_EQ(w.i, 0u);
  TfmBundle net = network_tfms(m);
  QMatrix full = w.phi2 - w.phi1;
  EXPECT_FALSE(full.is_zero());
  EXPECT_TRUE((net.G_zv * to_rat(full) * net.G_zv).is_zero());
  EXPECT_TRUE(well_posed_nds(m, w.phi2));
  EXPECT_EQ(nds_tfm(m, w.phi1), nds_tfm(m, w.phi2));
}

TEST(Cor2, RejectsWrongFactorization) {
  Gen g(15);
  NdsModel m = testing::network_of(g, {mirrored(g, 2, 1, 1, false), mirrored(g, 1, 1, 1, false)});
  RatMatrix iz = RatMatrix::identity(m.total_z());
  RatMatrix bad = iz;
  bad(0, 0) = RatFunc(2);
  EXPECT_THROW(check_cor2(m, bad, iz), FactorizationInvalid);
  EXPECT_THROW(check_cor2(m, iz, bad), FactorizationInvalid);
  EXPECT_THROW(check_cor2(m, RatMatrix(1, 1), iz), FactorizationInvalid);
}

TEST(Check, AutoDispatch) {
  Gen g(16);
  EXPECT_EQ(check(circuit_sweep_model(Rat(2, 5)), Method::Auto).method, "thm2");
  NdsModel z = testing::network_of(g, {testing::random_gzv_zero(g)});
  EXPECT_EQ(check(z, Method::Auto).method, "thm5");
  NdsModel f = testing::network_of(g, {mirrored(g, 1, 1, 1, false)});
  f.factorization = Factorization{RatMatrix::identity(1), RatMatrix::identity(1)};
  EXPECT_EQ(check(f, Method::Auto).method, "cor2");
  EXPECT_THROW(check(circuit_sweep_model(Rat(2, 5)), Method::Cor2), PreconditionViolated);
  EXPECT_THROW(parse_method("nope"), InvalidParam);
}

TEST(Check, ChainMatchesThm2OnCircuit) {
  for (int k = 1; k <= 9; ++k) {
    NdsModel m = circuit_sweep_model(Rat(k, 10));
    EXPECT_EQ(check(m, Method::Chain).status, check(m, Method::Thm2).status) << k;
  }
}

}  // namespace
}  // namespace ndsid
