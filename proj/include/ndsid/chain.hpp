#pragma once

// Pencil-based FNCR test of G_yv(i) working directly on the LFT matrices.

#include <vector>

#include "ndsid/model.hpp"
#include "ndsid/pencil.hpp"

namespace ndsid {

/// Square-ish pencil whose normal column rank is full iff G_yv is FNCR:
///   [ lambda I - A_xx0   -A_xv0   -H_x     ]
///   [ C_x0                C_v0     H_y      ]
///   [ P F_x               P F_v    P G - I  ]
/// Throws ShapeMismatch.
MatrixPencil pencil_M(const SubsystemLft& s);

struct PencilChain {
  MatrixPencil M;
  QMatrix P;
  QMatrix output_rows;       // [C_x0 C_v0 H_y]
  bool output_fcr = false;   // FNCR certain, nothing below is computed

  QMatrix N_x, N_v, N_w;     // null space of output_rows, split by block
  MatrixPencil top;          // lambda N_x - (A_xx0 N_x + A_xv0 N_v + H_x N_w)
  QMatrix theta_prime;       // F_x N_x + F_v N_v + G N_w
  MatrixPencil Mbar;         // [top; P theta_prime - N_w]
  KroneckerForm top_kcf;

  std::vector<std::size_t> xi_L;  // L block indices, ascending
  std::size_t zeta_L() const { return xi_L.size(); }
  std::size_t m = 0;              // zeta_L + sum xi_L

  QMatrix Theta, Pi;              // first m columns after the V^{-1} change of basis
  MatrixPencil Mtilde;            // [diag(L blocks); P Theta - Pi]
  std::vector<QMatrix> Theta_j, Pi_j;  // per L block, xi_L(j) + 1 columns
  PolyMatrix Theta_lambda, Pi_lambda;  // column j = sum_k Theta_j[:, k] lambda^k
  QMatrix Gamma;                  // column j = vec(P Theta_bar_j - Pi_bar_j)

  /// FNCR of G_yv without the multivariate polynomial test.
  bool fncr_certain() const { return output_fcr || zeta_L() == 0; }
  /// P Theta(lambda) - Pi(lambda)
  PolyMatrix mvp() const;
};

/// Exact chain. Internal identities are checked and raise InternalError.
PencilChain pencil_chain(const SubsystemLft& s);

struct MvpRankResult {
  bool fncr_mvp = true;   // P Theta(lambda) - Pi(lambda) has full normal column rank
  bool gamma_fcr = true;  // necessary condition
};
MvpRankResult mvp_rank_test(const PencilChain& c);

/// G_yv FNCR decided through the chain.
bool chain_fncr(const SubsystemLft& s);
/// G_zu FNRR decided through the chain of the dual subsystem.
bool chain_fnrr(const SubsystemLft& s);

}  // namespace ndsid
