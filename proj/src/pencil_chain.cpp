#include "ndsid/chain.hpp"

#include "ndsid/linalg.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid {

MatrixPencil pencil_M(const SubsystemLft& s) {
  s.validate();
  const Dims& d = s.dims;
  const std::size_t rows = d.m_x + d.m_y + d.m_p, cols = d.m_x + d.m_v + d.m_p;
  QMatrix g(rows, cols);
  g.set_block(0, 0, QMatrix::identity(d.m_x));
  QMatrix h(rows, cols);
  h.set_block(0, 0, -s.A_xx0);
  h.set_block(0, d.m_x, -s.A_xv0);
  h.set_block(0, d.m_x + d.m_v, -s.H_x);
  h.set_block(d.m_x, 0, s.C_x0);
  h.set_block(d.m_x, d.m_x, s.C_v0);
  h.set_block(d.m_x, d.m_x + d.m_v, s.H_y);
  const std::size_t r2 = d.m_x + d.m_y;
  h.set_block(r2, 0, s.P * s.F_x);
  h.set_block(r2, d.m_x, s.P * s.F_v);
  h.set_block(r2, d.m_x + d.m_v, s.P * s.G - QMatrix::identity(d.m_p));
  return {g, h};
}

PolyMatrix PencilChain::mvp() const {
  return to_poly(P) * Theta_lambda - Pi_lambda;
}

PencilChain pencil_chain(const SubsystemLft& s) {
  const Dims& d = s.dims;
  PencilChain c;
  c.M = pencil_M(s);
  c.P = s.P;
  c.output_rows = hcat({s.C_x0, s.C_v0, s.H_y});
  if (c.output_rows.rows() == 0) c.output_rows = QMatrix(0, d.m_x + d.m_v + d.m_p);
  c.output_fcr = is_fcr(c.output_rows);
  if (c.output_fcr) return c;

  QMatrix n = nullspace(c.output_rows);
  const std::size_t k = n.cols();
  c.N_x = n.block(0, 0, d.m_x, k);
  c.N_v = n.block(d.m_x, 0, d.m_v, k);
  c.N_w = n.block(d.m_x + d.m_v, 0, d.m_p, k);

  c.top = {c.N_x, -(s.A_xx0 * c.N_x + s.A_xv0 * c.N_v + s.H_x * c.N_w)};
  c.theta_prime = s.F_x * c.N_x + s.F_v * c.N_v + s.G * c.N_w;
  QMatrix bottom = s.P * c.theta_prime - c.N_w;
  QMatrix g_bar(d.m_x + d.m_p, k), h_bar(d.m_x + d.m_p, k);
  g_bar.set_block(0, 0, c.top.G);
  h_bar.set_block(0, 0, c.top.H);
  h_bar.set_block(d.m_x, 0, bottom);
  c.Mbar = {g_bar, h_bar};

  // M N must vanish on the output rows and reproduce Mbar elsewhere.
  MatrixPencil mn = transform(QMatrix::identity(c.M.rows()), c.M, n);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d.m_x; ++i) keep.push_back(i);
  for (std::size_t i = 0; i < d.m_p; ++i) keep.push_back(d.m_x + d.m_y + i);
  if (mn.G.select_rows(keep) != c.Mbar.G || mn.H.select_rows(keep) != c.Mbar.H ||
      !mn.H.block(d.m_x, 0, d.m_y, k).is_zero())
    throw InternalError("pencil chain: M N does not reduce to Mbar");

  c.top_kcf = kcf(c.top);
  for (const auto& b : c.top_kcf.blocks)
    if (b.kind == BlockKind::L) c.xi_L.push_back(b.m);
  for (auto x : c.xi_L) c.m += x + 1;

  QMatrix vinv = inverse(c.top_kcf.V).block(0, 0, k, c.m);
  c.Theta = c.theta_prime * vinv;
  c.Pi = c.N_w * vinv;

  std::vector<MatrixPencil> ls;
  for (auto x : c.xi_L) ls.push_back(canonical_block(BlockKind::L, x));
  MatrixPencil ldiag = block_diag(ls);
  if (ls.empty()) ldiag = {QMatrix(0, 0), QMatrix(0, 0)};
  QMatrix mg(ldiag.rows() + d.m_p, c.m), mh(ldiag.rows() + d.m_p, c.m);
  mg.set_block(0, 0, ldiag.G);
  mh.set_block(0, 0, ldiag.H);
  mh.set_block(ldiag.rows(), 0, s.P * c.Theta - c.Pi);
  c.Mtilde = {mg, mh};

  std::size_t width = 0;
  for (auto x : c.xi_L) width = std::max(width, x + 1);
  c.Theta_lambda = PolyMatrix(d.m_g, c.zeta_L());
  c.Pi_lambda = PolyMatrix(d.m_p, c.zeta_L());
  c.Gamma = QMatrix(d.m_p * width, c.zeta_L());
  std::size_t off = 0;
  for (std::size_t j = 0; j < c.zeta_L(); ++j) {
    const std::size_t w = c.xi_L[j] + 1;
    c.Theta_j.push_back(c.Theta.block(0, off, d.m_g, w));
    c.Pi_j.push_back(c.Pi.block(0, off, d.m_p, w));
    for (std::size_t kk = 0; kk < w; ++kk) {
      for (std::size_t r = 0; r < d.m_g; ++r)
        c.Theta_lambda(r, j) += Poly::monomial(c.Theta_j[j](r, kk), static_cast<int>(kk));
      for (std::size_t r = 0; r < d.m_p; ++r)
        c.Pi_lambda(r, j) += Poly::monomial(c.Pi_j[j](r, kk), static_cast<int>(kk));
    }
    QMatrix theta_bar(d.m_g, width), pi_bar(d.m_p, width);
    theta_bar.set_block(0, 0, c.Theta_j[j]);
    pi_bar.set_block(0, 0, c.Pi_j[j]);
    c.Gamma.set_block(0, j, vec(QMatrix(s.P * theta_bar - pi_bar)));
    off += w;
  }
  return c;
}

MvpRankResult mvp_rank_test(const PencilChain& c) {
  MvpRankResult r;
  if (c.fncr_certain()) return r;
  r.fncr_mvp = is_fncr(c.mvp());
  r.gamma_fcr = is_fcr(c.Gamma);
  return r;
}

bool chain_fncr(const SubsystemLft& s) {
  PencilChain c = pencil_chain(s);
  return c.fncr_certain() || mvp_rank_test(c).fncr_mvp;
}

bool chain_fnrr(const SubsystemLft& s) { return chain_fncr(dual_subsystem(s)); }

}  // namespace ndsid
