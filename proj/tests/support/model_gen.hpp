#pragma once

// Random LFT subsystems and networks for property tests.

#include "gen.hpp"
#include "ndsid/model.hpp"

namespace ndsid::testing {

struct DimBounds {
  long x = 3, v = 2, u = 2, y = 2, z = 2, g = 2, p = 2;
};

inline Dims random_dims(Gen& g, const DimBounds& b = {}) {
  Dims d;
  d.m_x = g.count(0, b.x);
  d.m_v = g.count(1, b.v);
  d.m_u = g.count(1, b.u);
  d.m_y = g.count(1, b.y);
  d.m_z = g.count(1, b.z);
  d.m_g = g.count(0, b.g);
  d.m_p = g.count(0, b.p);
  return d;
}

/// Well-posed by construction (resamples P until I - G P is invertible).
inline SubsystemLft random_lft(Gen& g, const Dims& d, double density = 0.7) {
  SubsystemLft s = SubsystemLft::zeros(d);
  s.A_xx0 = g.qmatrix(d.m_x, d.m_x, density);
  s.A_xv0 = g.qmatrix(d.m_x, d.m_v, density);
  s.B_x0 = g.qmatrix(d.m_x, d.m_u, density);
  s.A_zx0 = g.qmatrix(d.m_z, d.m_x, density);
  s.A_zv0 = g.qmatrix(d.m_z, d.m_v, density);
  s.B_z0 = g.qmatrix(d.m_z, d.m_u, density);
  s.C_x0 = g.qmatrix(d.m_y, d.m_x, density);
  s.C_v0 = g.qmatrix(d.m_y, d.m_v, density);
  s.D_u0 = g.qmatrix(d.m_y, d.m_u, density);
  s.H_x = g.qmatrix(d.m_x, d.m_p, density);
  s.H_z = g.qmatrix(d.m_z, d.m_p, density);
  s.H_y = g.qmatrix(d.m_y, d.m_p, density);
  s.F_x = g.qmatrix(d.m_g, d.m_x, density);
  s.F_v = g.qmatrix(d.m_g, d.m_v, density);
  s.F_u = g.qmatrix(d.m_g, d.m_u, density);
  s.G = g.qmatrix(d.m_g, d.m_p, density);
  do s.P = g.qmatrix(d.m_p, d.m_g, density);
  while (!well_posed_subsystem(s));
  return s;
}

inline SubsystemLft random_lft(Gen& g, const DimBounds& b = {}) { return random_lft(g, random_dims(g, b)); }

}  // namespace ndsid::testing

namespace ndsid::testing {

/// Realized subsystem with G_zv identically zero: v only drives a state block
/// that z never sees.
inline SubsystemLft random_gzv_zero(Gen& g, const DimBounds& b = {}, double density = 0.7) {
  Dims d;
  d.m_v = g.count(1, b.v);
  d.m_z = g.count(1, b.z);
  d.m_u = g.count(1, b.u);
  d.m_y = g.count(1, b.y);
  std::size_t x1 = g.count(0, 2), x2 = g.count(0, 2);
  d.m_x = x1 + x2;
  SubsystemRealized r = SubsystemRealized::zeros(d);
  r.A_xx.set_block(0, 0, g.qmatrix(x1, x1, density));
  r.A_xx.set_block(x1, 0, g.qmatrix(x2, x1, density));
  r.A_xx.set_block(x1, x1, g.qmatrix(x2, x2, density));
  r.A_xv.set_block(x1, 0, g.qmatrix(x2, d.m_v, density));
  r.A_zx.set_block(0, 0, g.qmatrix(d.m_z, x1, density));
  r.B_x = g.qmatrix(d.m_x, d.m_u, density);
  r.B_z = g.qmatrix(d.m_z, d.m_u, density);
  r.C_x = g.qmatrix(d.m_y, d.m_x, density);
  r.C_v = g.qmatrix(d.m_y, d.m_v, density);
  r.D_u = g.qmatrix(d.m_y, d.m_u, density);
  return SubsystemLft::from_realized(r);
}

/// Random SCM that keeps the network well posed.
inline QMatrix random_phi(Gen& g, const NdsModel& m, double density = 0.6) {
  for (;;) {
    QMatrix phi = g.qmatrix(m.total_v(), m.total_z(), density);
    if (m.phi.has_pattern())
      for (std::size_t i = 0; i < phi.rows(); ++i)
        for (std::size_t j = 0; j < phi.cols(); ++j)
          if (m.phi.fixed_zero[i][j]) phi(i, j) = Rat(0);
    if (well_posed_nds(m, phi)) return phi;
  }
}

inline NdsModel network_of(Gen& g, std::vector<SubsystemLft> subs, double mask_density = 0.0) {
  NdsModel m;
  m.subsystems = std::move(subs);
  m.phi.phi = QMatrix(m.total_v(), m.total_z());
  if (mask_density > 0) {
    m.phi.fixed_zero.assign(m.total_v(), std::vector<bool>(m.total_z()));
    for (auto& row : m.phi.fixed_zero)
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = g.coin(mask_density);
  }
  m.phi.phi = random_phi(g, m);
  return m;
}

}  // namespace ndsid::testing
