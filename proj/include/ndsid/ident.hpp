#pragma once

// Structural identifiability certificates for an NDS.

#include <optional>
#include <string>
#include <vector>

#include "ndsid/model.hpp"

namespace ndsid {

/// H(lambda, phi) = G_yu + G_yv phi (I - G_zv phi)^{-1} G_zu. Throws IllPosedNds.
RatMatrix nds_tfm(const NdsModel& m, const QMatrix& phi);
/// Transfer from the initial state to y. Throws IllPosedNds.
RatMatrix free_response_tfm(const NdsModel& m, const QMatrix& phi);

enum class Status { Identifiable, Unidentifiable, Inconclusive };
std::string to_string(Status s);

/// Two SCMs with identical H. delta is the (i, j) block of phi2 - phi1.
struct Witness {
  std::size_t i = 0, j = 0;  // zero-based subsystem indices
  QMatrix delta;
  QMatrix phi1, phi2;
};

struct RankRow {
  std::size_t subsystem = 0;
  bool yv_fncr = false;
  bool zu_fnrr = false;
  // Normal ranks; the chain method decides the flags without computing them.
  std::optional<std::size_t> yv_rank, zu_rank;
  std::size_t yv_cols = 0, zu_rows = 0;
};

struct XiSummary {
  std::size_t i = 0, j = 0;
  std::size_t rows = 0, cols = 0, rank = 0;
  bool fcr() const { return rank == cols; }
};

struct IdentVerdict {
  Status status = Status::Inconclusive;
  std::string method;                // thm2, thm5, cor2 or chain
  std::vector<RankRow> ranks;        // thm2 / chain
  std::vector<XiSummary> xi;         // thm5 / cor2
  std::optional<Witness> witness;    // always present when Unidentifiable
  std::vector<std::string> notes;
};

/// Each G_yv(i) FNCR and each G_zu(i) FNRR gives Identifiable; otherwise the
/// test says nothing.
IdentVerdict check_sufficient(const NdsModel& m);

struct XiMatrix {
  std::size_t i = 0, j = 0;
  QMatrix matrix;
  int d_left = 0, d_right = 0;     // degrees of V^[1] and U^[1]
  std::size_t r_left = 0, r_right = 0;
  std::size_t m_v = 0, m_z = 0;    // Delta is m_v x m_z
  std::vector<QMatrix> v1;         // V^[1] coefficients, r_left x m_v each
  std::vector<QMatrix> u1;         // U^[1] coefficients, m_z x r_right each
  std::vector<std::size_t> kept;   // surviving vec(Delta) indices, column-major
};

/// vec(Delta) in null(matrix) iff left * Delta * right == 0 identically.
/// left is m_r x m_v (G_yv of subsystem i), right is m_z x m_c (G_zu of subsystem j).
XiMatrix xi_matrix(const RatMatrix& left, const RatMatrix& right, std::size_t i = 0, std::size_t j = 0);
/// Deletes the columns of entries fixed to zero; mask is m_v x m_z.
XiMatrix apply_structure_prior(const XiMatrix& xi, const std::vector<std::vector<bool>>& mask);
/// Delta (m_v x m_z) built from a null vector of the reduced matrix.
QMatrix xi_delta(const XiMatrix& xi, const QMatrix& null_vector);

/// Exact test when every G_zv(i) is identically zero; throws PreconditionViolated otherwise.
IdentVerdict check_thm5(const NdsModel& m);
/// Exact test under G_yv = gbar_yv G_zv, G_zu = G_zv gbar_zu (network level,
/// verified). Throws FactorizationInvalid.
IdentVerdict check_cor2(const NdsModel& m, const RatMatrix& gbar_yv, const RatMatrix& gbar_zu);

/// FNCR of G_yv(i) and FNRR of G_zu(i) decided from the FPP-level pencils.
IdentVerdict check_chain(const NdsModel& m);

enum class Method { Auto, Thm2, Thm5, Cor2, Chain };
Method parse_method(const std::string& s);
/// Auto: cor2 when a factorization is supplied, thm5 when G_zv == 0, thm2 otherwise.
IdentVerdict check(const NdsModel& m, Method method);

/// Zero mask of the (i, j) block of the SCM; empty when there is no pattern.
std::vector<std::vector<bool>> block_mask(const NdsModel& m, std::size_t i, std::size_t j);

}  // namespace ndsid
