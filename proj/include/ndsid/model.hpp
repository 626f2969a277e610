#pragma once

// Networked dynamic system model: LFT-parametrized subsystems connected
// through the subsystem connection matrix (SCM) v = Phi z.

#include <optional>
#include <string>
#include <vector>

#include "ndsid/matrix.hpp"

namespace ndsid {

struct Dims {
  std::size_t m_u = 0, m_v = 0, m_x = 0, m_y = 0, m_z = 0;
  std::size_t m_g = 0;  // rows of G
  std::size_t m_p = 0;  // rows of P

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Realized state space blocks of one subsystem.
struct SubsystemRealized {
  Dims dims;
  QMatrix A_xx, A_xv, B_x;
  QMatrix A_zx, A_zv, B_z;
  QMatrix C_x, C_v, D_u;

  /// All-zero blocks of the given dimensions.
  static SubsystemRealized zeros(const Dims& d);
  /// Throws ShapeMismatch naming the first inconsistent block.
  void validate() const;
  friend bool operator==(const SubsystemRealized&, const SubsystemRealized&) = default;
};

/// Nominal blocks plus the LFT  H P (I - G P)^{-1} F  modulation.
struct SubsystemLft {
  Dims dims;
  QMatrix A_xx0, A_xv0, B_x0;
  QMatrix A_zx0, A_zv0, B_z0;
  QMatrix C_x0, C_v0, D_u0;
  QMatrix H_x, H_z, H_y;
  QMatrix F_x, F_v, F_u;
  QMatrix G, P;

  static SubsystemLft zeros(const Dims& d);
  /// Treats realized blocks as nominal with an empty parameter matrix.
  static SubsystemLft from_realized(const SubsystemRealized& r);
  void validate() const;
  friend bool operator==(const SubsystemLft&, const SubsystemLft&) = default;
};

/// SCM with an optional mask of entries fixed to zero.
struct Scm {
  QMatrix phi;
  std::vector<std::vector<bool>> fixed_zero;  // empty: no prior structure

  bool has_pattern() const { return !fixed_zero.empty(); }
  bool is_fixed_zero(std::size_t i, std::size_t j) const {
    return has_pattern() && fixed_zero[i][j];
  }
  void validate() const;
  friend bool operator==(const Scm&, const Scm&) = default;
};

/// Optional network-level factorization G_yv = Gbar_yv G_zv, G_zu = G_zv Gbar_zu.
struct Factorization {
  RatMatrix gbar_yv;
  RatMatrix gbar_zu;
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct NdsModel {
  std::vector<SubsystemLft> subsystems;
  Scm phi;
  std::optional<Factorization> factorization;
  std::string metadata_json = "{}";  // free-form, carried through untouched

  std::size_t total_v() const;
  std::size_t total_z() const;
  std::size_t total_u() const;
  std::size_t total_y() const;
  std::size_t total_x() const;
  /// Offsets of subsystem i inside the stacked v (resp. z) vector.
  std::size_t v_offset(std::size_t i) const;
  std::size_t z_offset(std::size_t i) const;
  void validate() const;
  friend bool operator==(const NdsModel&, const NdsModel&) = default;
};

/// G_yu, G_yv, G_zu, G_zv of one subsystem or of the whole network
/// (block diagonal).
struct TfmBundle {
  RatMatrix G_yu, G_yv, G_zu, G_zv;
  friend bool operator==(const TfmBundle&, const TfmBundle&) = default;
};

/// The nine H TFMs of the augmented subsystem with auxiliary signals w, r.
struct AugmentedTfms {
  RatMatrix H_wr, H_wv, H_wu;
  RatMatrix H_zr, H_zv, H_zu;
  RatMatrix H_yr, H_yv, H_yu;
};

bool well_posed_subsystem(const SubsystemLft& s);
/// Throws IllPosedSubsystem.
SubsystemRealized realize(const SubsystemLft& s);
/// Block diagonal A_zv of the whole network.
QMatrix network_a_zv(const NdsModel& m);
bool well_posed_nds(const NdsModel& m, const QMatrix& phi);
inline bool well_posed_nds(const NdsModel& m) { return well_posed_nds(m, m.phi.phi); }

/// Block diagonal stacking of every realized subsystem.
SubsystemRealized network_realized(const NdsModel& m);

TfmBundle subsystem_tfms(const SubsystemRealized& s);
AugmentedTfms augmented_h_tfms(const SubsystemLft& s);
/// TFMs through the LFT route; throws IllPosedSubsystem.
TfmBundle lft_tfms(const SubsystemLft& s);
TfmBundle network_tfms(const NdsModel& m);
std::vector<TfmBundle> all_subsystem_tfms(const NdsModel& m);

/// Interconnected realization of the whole network with Phi substituted:
/// dx = A x + B u, y = C x + D u.
struct ClosedLoop {
  QMatrix A, B, C, D;
};
/// Throws IllPosedNds.
ClosedLoop closed_loop(const NdsModel& m, const QMatrix& phi);

/// Subsystem whose G_yv is the transpose of the original G_zu.
SubsystemLft dual_subsystem(const SubsystemLft& s);

}  // namespace ndsid
