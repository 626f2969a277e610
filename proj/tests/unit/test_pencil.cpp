#include <gtest/gtest.h>

#include "pencil_gen.hpp"
#include "ndsid/pencil.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid {
namespace {

using testing::Gen;
using testing::planted;
using testing::Planted;

void expect_reassembles(const MatrixPencil& p, const KroneckerForm& k) {
  EXPECT_EQ(rank(k.U), p.rows());
  EXPECT_EQ(rank(k.V), p.cols());
  EXPECT_EQ(k.U * k.canonical().G * k.V, p.G);
  EXPECT_EQ(k.U * k.canonical().H * k.V, p.H);
}

TEST(CanonicalBlock, Shapes) {
  auto l0 = canonical_block(BlockKind::L, 0);
  EXPECT_EQ(l0.rows(), 0u);
  EXPECT_EQ(l0.cols(), 1u);
  auto j0 = canonical_block(BlockKind::J, 0);
  EXPECT_EQ(j0.rows(), 1u);
  EXPECT_EQ(j0.cols(), 0u);
  EXPECT_EQ(canonical_block(BlockKind::K, 2).at(Rat(0)), (QMatrix{{0, 1}, {0, 0}}));
  EXPECT_EQ(rank(canonical_block(BlockKind::K, 2).at(Rat(0))), 1u);
  auto n3 = canonical_block(BlockKind::N, 3);
  EXPECT_EQ(n3.H, QMatrix::identity(3));
  EXPECT_EQ(n3.G, (QMatrix{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  EXPECT_EQ(canonical_block(BlockKind::J, 3), canonical_block(BlockKind::L, 3).transpose());
  EXPECT_EQ(canonical_block(BlockKind::L, 2).at(Rat(5)), (QMatrix{{5, 1, 0}, {0, 5, 1}}));
  EXPECT_THROW(canonical_block(BlockKind::K, 0), InvalidIndex);
  EXPECT_THROW(canonical_block(BlockKind::N, 0), InvalidIndex);
  EXPECT_THROW(canonical_block(BlockKind::H, 0), InvalidIndex);
}

TEST(BlockNullspace, Examples) {
  EXPECT_EQ(block_nullspace(BlockKind::L, 2, Rat(3)), (QMatrix{{1}, {-3}, {9}}));
  EXPECT_EQ(block_nullspace(BlockKind::J, 4, Rat(7)).cols(), 0u);
  EXPECT_EQ(block_nullspace(BlockKind::K, 3, Rat(0)), (QMatrix{{1}, {0}, {0}}));
  EXPECT_EQ(block_nullspace(BlockKind::K, 3, Rat(1)).cols(), 0u);
  EXPECT_EQ(block_nullspace(BlockKind::N, 2, Rat(0)).cols(), 0u);
}

TEST(BlockNullspace, Exhaustive) {
  for (auto kind : {BlockKind::K, BlockKind::N, BlockKind::L, BlockKind::J})
    for (std::size_t m = 1; m <= 4; ++m)
      for (const Rat& x : {Rat(0), Rat(2), Rat(-1, 3)}) {
        QMatrix blk = canonical_block(kind, m).at(x);
        QMatrix ns = block_nullspace(kind, m, x);
        EXPECT_TRUE((blk * ns).is_zero());
        EXPECT_EQ(ns.cols(), const_nullspace(blk).cols()) << to_char(kind) << m;
      }
}

TEST(Kcf, CanonicalInputKeepsInventory) {
  MatrixPencil p = block_diag({canonical_block(BlockKind::L, 1), canonical_block(BlockKind::K, 2)});
  auto k = kcf(p);
  EXPECT_EQ(k.inventory(), "L1 K2");
  expect_reassembles(p, k);
}

TEST(Kcf, StrictlyRegularIsOneHBlock) {
  MatrixPencil p{QMatrix::identity(2), QMatrix{{1, 0}, {0, 2}}};
  auto k = kcf(p);
  EXPECT_EQ(k.inventory(), "H2");
  EXPECT_EQ(k.xi_H(), 2u);
  expect_reassembles(p, k);
}

TEST(Kcf, ZeroPencil) {
  MatrixPencil p{QMatrix(2, 3), QMatrix(2, 3)};
  auto k = kcf(p);
  EXPECT_EQ(k.inventory(), "L0 L0 L0 J0 J0");
  expect_reassembles(p, k);
}

TEST(Kcf, RandomWidePencil) {
  Gen g(41);
  for (int t = 0; t < 10; ++t) {
    MatrixPencil p{g.qmatrix(4, 6), g.qmatrix(4, 6)};
    auto k = kcf(p);
    expect_reassembles(p, k);
    std::size_t nrank = normal_rank(p.as_poly());
    EXPECT_EQ(k.count(BlockKind::L), 6 - nrank);
    EXPECT_EQ(k.count(BlockKind::J), 4 - nrank);
  }
}

TEST(Kcf, RecoversPlantedStructure) {
  Gen g(42);
  for (int t = 0; t < 40; ++t) {
    Planted pl = planted(g);
    if (pl.p.rows() == 0 && pl.p.cols() == 0) continue;
    auto k = kcf(pl.p);
    expect_reassembles(pl.p, k);
    EXPECT_EQ(k.inventory(), pl.inventory);
  }
}

TEST(Kcf, InventoryInvariantUnderEquivalence) {
  Gen g(43);
  for (int t = 0; t < 15; ++t) {
    MatrixPencil p{g.qmatrix_of_rank(3, 5, 2), g.qmatrix(3, 5, 0.5)};
    auto k1 = kcf(p);
    auto k2 = kcf(transform(g.invertible(3), p, g.invertible(5)));
    EXPECT_EQ(k1.inventory(), k2.inventory());
  }
}

TEST(Regularity, Examples) {
  EXPECT_TRUE(is_regular({QMatrix(2, 2), QMatrix::identity(2)}));
  EXPECT_FALSE(is_strictly_regular({QMatrix(2, 2), QMatrix::identity(2)}));
  EXPECT_TRUE(is_strictly_regular({QMatrix::identity(2), QMatrix::identity(2)}));
  MatrixPencil lj = block_diag({canonical_block(BlockKind::L, 1), canonical_block(BlockKind::J, 1)});
  ASSERT_EQ(lj.rows(), lj.cols());
  EXPECT_FALSE(is_regular(lj));
  EXPECT_THROW(is_regular(canonical_block(BlockKind::L, 1)), NotSquare);
}

}  // namespace
}  // namespace ndsid
