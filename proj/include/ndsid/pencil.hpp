#pragma once

// Matrix pencils lambda*G + H and their Kronecker canonical form.

#include <vector>

#include "ndsid/matrix.hpp"

namespace ndsid {

struct MatrixPencil {
  QMatrix G;
  QMatrix H;

  MatrixPencil() = default;
  MatrixPencil(QMatrix g, QMatrix h);

  std::size_t rows() const { return G.rows(); }
  std::size_t cols() const { return G.cols(); }
  QMatrix at(const Rat& lambda) const;
  PolyMatrix as_poly() const;
  MatrixPencil transpose() const { return {G.transpose(), H.transpose()}; }
  /// lambda -> -lambda
  MatrixPencil reflect() const { return {-G, H}; }

  friend bool operator==(const MatrixPencil& a, const MatrixPencil& b) {
    return a.G == b.G && a.H == b.H;
  }
};

/// U * p * V, coefficientwise.
MatrixPencil transform(const QMatrix& u, const MatrixPencil& p, const QMatrix& v);
MatrixPencil block_diag(const std::vector<MatrixPencil>& parts);

enum class BlockKind { H, K, N, L, J };
char to_char(BlockKind k);

/// K_m = lambda I + upper shift, N_m = lambda * upper shift + I,
/// L_m = [K_m, e_m] (m x (m+1)), J_m = L_m^T. H blocks have no canonical
/// representative; canonical_block(H, m) returns lambda I + I.
MatrixPencil canonical_block(BlockKind kind, std::size_t m);

/// Exact null space basis of the block evaluated at lambda0.
QMatrix block_nullspace(BlockKind kind, std::size_t m, const Rat& lambda0);

struct KcfBlock {
  BlockKind kind;
  std::size_t m;
  MatrixPencil pencil;  // the block itself; for H a strictly regular lambda I + B
};

/// pencil == U * blockdiag(blocks) * V. Blocks are ordered L (ascending),
/// H, K, N, J (ascending).
struct KroneckerForm {
  QMatrix U;
  QMatrix V;
  std::vector<KcfBlock> blocks;

  MatrixPencil canonical() const;
  std::size_t xi_H() const;
  std::size_t count(BlockKind k) const;
  std::vector<std::size_t> indices(BlockKind k) const;
  /// Block multiset in canonical order, e.g. "L0 L2 H3 K1 N2 J1".
  std::string inventory() const;
};

KroneckerForm kcf(const MatrixPencil& p);

/// Throws NotSquare.
bool is_regular(const MatrixPencil& p);
bool is_strictly_regular(const MatrixPencil& p);

}  // namespace ndsid
