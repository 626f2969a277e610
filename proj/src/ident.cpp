#include "ndsid/ident.hpp"

#include "ndsid/chain.hpp"
#include "ndsid/linalg.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid {

namespace {

void require_well_posed(const NdsModel& m) {
  m.validate();
  for (std::size_t i = 0; i < m.subsystems.size(); ++i)
    if (!well_posed_subsystem(m.subsystems[i]))
      throw IllPosedSubsystem("subsystem " + std::to_string(i + 1) + ": I - G P is singular");
  if (!well_posed_nds(m)) throw IllPosedNds("I - phi A_zv is singular");
}

// (I - G_zv phi)^{-1}
RatMatrix loop_inverse(const TfmBundle& b, const QMatrix& phi) {
  return rat_inverse(RatMatrix::identity(b.G_zv.rows()) - b.G_zv * to_rat(phi));
}

QMatrix embed_block(const NdsModel& m, std::size_t i, std::size_t j, const QMatrix& delta) {
  QMatrix full(m.total_v(), m.total_z());
  full.set_block(m.v_offset(i), m.z_offset(j), delta);
  return full;
}

// Places delta in block (i, j) of the model's SCM, halving it until the new
// SCM is well posed, and checks that H does not move.
Witness make_witness(const NdsModel& m, std::size_t i, std::size_t j, QMatrix delta) {
  const QMatrix& phi1 = m.phi.phi;
  RatMatrix h1 = nds_tfm(m, phi1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    QMatrix phi2 = phi1 + embed_block(m, i, j, delta);
    if (well_posed_nds(m, phi2)) {
      if (nds_tfm(m, phi2) != h1)
        throw InternalError("witness for block (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") changes H");
      return {i, j, delta, phi1, phi2};
    }
    delta = Rat(1, 2) * delta;
  }
  throw InternalError("no well-posed witness scaling found");
}

void normalize(QMatrix& v) {
  // Scale so the first nonzero entry is 1; keeps witnesses readable.
  for (std::size_t i = 0; i < v.rows(); ++i)
    if (sgn(v(i, 0)) != 0) {
      Rat s = 1 / v(i, 0);
      v = s * v;
      return;
    }
}

struct XiRun {
  std::vector<XiSummary> summaries;
  std::optional<Witness> witness;
};

template <class LeftFn, class RightFn>
XiRun run_xi(const NdsModel& m, LeftFn left, RightFn right) {
  XiRun out;
  const std::size_t n = m.subsystems.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      XiMatrix xi = apply_structure_prior(xi_matrix(left(i), right(j), i, j), block_mask(m, i, j));
      XiSummary s{i, j, xi.matrix.rows(), xi.matrix.cols(), rank(xi.matrix)};
      out.summaries.push_back(s);
      if (!s.fcr() && !out.witness) {
        QMatrix v = nullspace(xi.matrix).col(0);
        normalize(v);
        out.witness = make_witness(m, i, j, xi_delta(xi, v));
      }
    }
  return out;
}

IdentVerdict xi_verdict(const std::string& method, XiRun run) {
  IdentVerdict v;
  v.method = method;
  v.xi = std::move(run.summaries);
  v.witness = std::move(run.witness);
  v.status = v.witness ? Status::Unidentifiable : Status::Identifiable;
  for (const auto& s : v.xi)
    if (!s.fcr())
      v.notes.push_back("Xi(" + std::to_string(s.i + 1) + "," + std::to_string(s.j + 1) + ") has rank " +
                        std::to_string(s.rank) + " < " + std::to_string(s.cols) + " columns");
  return v;
}

}  // namespace

RatMatrix nds_tfm(const NdsModel& m, const QMatrix& phi) {
  if (!well_posed_nds(m, phi)) throw IllPosedNds("I - phi A_zv is singular");
  TfmBundle b = network_tfms(m);
  return b.G_yu + b.G_yv * to_rat(phi) * loop_inverse(b, phi) * b.G_zu;
}

RatMatrix free_response_tfm(const NdsModel& m, const QMatrix& phi) {
  if (!well_posed_nds(m, phi)) throw IllPosedNds("I - phi A_zv is singular");
  TfmBundle b = network_tfms(m);
  SubsystemRealized n = network_realized(m);
  Resolvent r = resolvent(n.A_xx);
  RatMatrix res = r.adj.map([&](const Poly& p) { return RatFunc(p, r.chi); });
  RatMatrix left = to_rat(n.C_x) + b.G_yv * to_rat(phi) * loop_inverse(b, phi) * to_rat(n.A_zx);
  return left * res;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Identifiable: return "identifiable";
    case Status::Unidentifiable: return "unidentifiable";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

IdentVerdict check_sufficient(const NdsModel& m) {
  require_well_posed(m);
  IdentVerdict v;
  v.method = "thm2";
  bool ok = true;
  auto tfms = all_subsystem_tfms(m);
  for (std::size_t i = 0; i < tfms.size(); ++i) {
    RankRow r;
    r.subsystem = i;
    r.yv_rank = normal_rank(tfms[i].G_yv);
    r.zu_rank = normal_rank(tfms[i].G_zu);
    r.yv_cols = tfms[i].G_yv.cols();
    r.zu_rows = tfms[i].G_zu.rows();
    r.yv_fncr = *r.yv_rank == r.yv_cols;
    r.zu_fnrr = *r.zu_rank == r.zu_rows;
    const std::string tag = "subsystem " + std::to_string(i + 1) + ": ";
    if (!r.yv_fncr)
      v.notes.push_back(tag + "G_yv is not of full normal column rank (" + std::to_string(*r.yv_rank) + " < " +
                        std::to_string(r.yv_cols) + ")");
    if (!r.zu_fnrr)
      v.notes.push_back(tag + "G_zu is not of full normal row rank (" + std::to_string(*r.zu_rank) + " < " +
                        std::to_string(r.zu_rows) + ")");
    ok = ok && r.yv_fncr && r.zu_fnrr;
    v.ranks.push_back(r);
  }
  v.status = ok ? Status::Identifiable : Status::Inconclusive;
  return v;
}

XiMatrix xi_matrix(const RatMatrix& left, const RatMatrix& right, std::size_t i, std::size_t j) {
  XiMatrix xi;
  xi.i = i;
  xi.j = j;
  xi.m_v = left.cols();
  xi.m_z = right.rows();

  PolyMatrix v1(0, xi.m_v), u1(xi.m_z, 0);
  if (!left.empty()) {
    SmithMcMillan sm = smith_mcmillan(left);
    xi.r_left = sm.rank;
    v1 = sm.V.block(0, 0, sm.rank, xi.m_v);
  }
  if (!right.empty()) {
    SmithMcMillan sm = smith_mcmillan(right);
    xi.r_right = sm.rank;
    u1 = sm.U.block(0, 0, xi.m_z, sm.rank);
  }
  xi.v1 = coefficients(v1);
  xi.u1 = coefficients(u1);
  if (xi.v1.empty()) xi.v1.push_back(QMatrix(v1.rows(), v1.cols()));
  if (xi.u1.empty()) xi.u1.push_back(QMatrix(u1.rows(), u1.cols()));
  xi.d_left = static_cast<int>(xi.v1.size()) - 1;
  xi.d_right = static_cast<int>(xi.u1.size()) - 1;

  const std::size_t band = xi.r_left * xi.r_right;
  const std::size_t nblocks = xi.v1.size() + xi.u1.size() - 1;
  xi.matrix = QMatrix(band * nblocks, xi.m_v * xi.m_z);
  if (band > 0)
    for (std::size_t p = 0; p < xi.v1.size(); ++p)
      for (std::size_t q = 0; q < xi.u1.size(); ++q) {
        QMatrix term = kron(xi.u1[q].transpose(), xi.v1[p]);
        QMatrix cur = xi.matrix.block((p + q) * band, 0, band, term.cols());
        xi.matrix.set_block((p + q) * band, 0, cur + term);
      }
  for (std::size_t k = 0; k < xi.m_v * xi.m_z; ++k) xi.kept.push_back(k);
  return xi;
}

XiMatrix apply_structure_prior(const XiMatrix& xi, const std::vector<std::vector<bool>>& mask) {
  if (mask.empty()) return xi;
  if (mask.size() != xi.m_v || (xi.m_v > 0 && mask[0].size() != xi.m_z))
    throw ShapeMismatch("zero mask does not match the SCM block");
  XiMatrix out = xi;
  out.kept.clear();
  std::vector<std::size_t> cols;
  for (std::size_t t = 0; t < xi.kept.size(); ++t) {
    std::size_t idx = xi.kept[t];
    if (mask[idx % xi.m_v][idx / xi.m_v]) continue;
    out.kept.push_back(idx);
    cols.push_back(t);
  }
  out.matrix = xi.matrix.select_cols(cols);
  return out;
}

QMatrix xi_delta(const XiMatrix& xi, const QMatrix& null_vector) {
  if (null_vector.rows() != xi.kept.size() || null_vector.cols() != 1)
    throw ShapeMismatch("null vector has shape " + null_vector.shape());
  QMatrix full(xi.m_v * xi.m_z, 1);
  for (std::size_t t = 0; t < xi.kept.size(); ++t) full(xi.kept[t], 0) = null_vector(t, 0);
  return unvec(full, xi.m_v, xi.m_z);
}

std::vector<std::vector<bool>> block_mask(const NdsModel& m, std::size_t i, std::size_t j) {
  if (!m.phi.has_pattern()) return {};
  const std::size_t r0 = m.v_offset(i), c0 = m.z_offset(j);
  const std::size_t nr = m.subsystems.at(i).dims.m_v, nc = m.subsystems.at(j).dims.m_z;
  std::vector<std::vector<bool>> out(nr, std::vector<bool>(nc));
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b < nc; ++b) out[a][b] = m.phi.fixed_zero[r0 + a][c0 + b];
  return out;
}

IdentVerdict check_thm5(const NdsModel& m) {
  require_well_posed(m);
  auto tfms = all_subsystem_tfms(m);
  for (std::size_t i = 0; i < tfms.size(); ++i)
    if (!tfms[i].G_zv.is_zero())
      throw PreconditionViolated("G_zv of subsystem " + std::to_string(i + 1) + " is not identically zero");
  return xi_verdict("thm5", run_xi(m, [&](std::size_t i) { return tfms[i].G_yv; },
                                   [&](std::size_t j) { return tfms[j].G_zu; }));
}

IdentVerdict check_cor2(const NdsModel& m, const RatMatrix& gbar_yv, const RatMatrix& gbar_zu) {
  require_well_posed(m);
  TfmBundle net = network_tfms(m);
  if (gbar_yv.rows() != net.G_yv.rows() || gbar_yv.cols() != net.G_zv.rows())
    throw FactorizationInvalid("gbar_yv has shape " + gbar_yv.shape());
  if (gbar_zu.rows() != net.G_zv.cols() || gbar_zu.cols() != net.G_zu.cols())
    throw FactorizationInvalid("gbar_zu has shape " + gbar_zu.shape());
  if (gbar_yv * net.G_zv != net.G_yv) throw FactorizationInvalid("G_yv != gbar_yv G_zv");
  if (net.G_zv * gbar_zu != net.G_zu) throw FactorizationInvalid("G_zu != G_zv gbar_zu");
  if (!is_fncr(gbar_yv)) throw FactorizationInvalid("gbar_yv is not of full normal column rank");
  if (!is_fnrr(gbar_zu)) throw FactorizationInvalid("gbar_zu is not of full normal row rank");
  auto tfms = all_subsystem_tfms(m);
  return xi_verdict("cor2", run_xi(m, [&](std::size_t i) { return tfms[i].G_zv; },
                                   [&](std::size_t j) { return tfms[j].G_zv; }));
}

IdentVerdict check_chain(const NdsModel& m) {
  require_well_posed(m);
  IdentVerdict v;
  v.method = "chain";
  bool ok = true;
  for (std::size_t i = 0; i < m.subsystems.size(); ++i) {
    const SubsystemLft& s = m.subsystems[i];
    RankRow r;
    r.subsystem = i;
    r.yv_cols = s.dims.m_v;
    r.zu_rows = s.dims.m_z;
    r.yv_fncr = chain_fncr(s);
    r.zu_fnrr = chain_fnrr(s);
    const std::string tag = "subsystem " + std::to_string(i + 1) + ": ";
    if (!r.yv_fncr) v.notes.push_back(tag + "P Theta - Pi loses column rank, so G_yv is not FNCR");
    if (!r.zu_fnrr) v.notes.push_back(tag + "dual P Theta - Pi loses column rank, so G_zu is not FNRR");
    ok = ok && r.yv_fncr && r.zu_fnrr;
    v.ranks.push_back(r);
  }
  v.status = ok ? Status::Identifiable : Status::Inconclusive;
  return v;
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "thm2") return Method::Thm2;
  if (s == "thm5") return Method::Thm5;
  if (s == "cor2") return Method::Cor2;
  if (s == "chain") return Method::Chain;
  throw InvalidParam("unknown method '" + s + "'");
}

IdentVerdict check(const NdsModel& m, Method method) {
  switch (method) {
    case Method::Thm2: return check_sufficient(m);
    case Method::Thm5: return check_thm5(m);
    case Method::Chain: return check_chain(m);
    case Method::Cor2:
      if (!m.factorization) throw PreconditionViolated("cor2 needs a factorization in the model file");
      return check_cor2(m, m.factorization->gbar_yv, m.factorization->gbar_zu);
    case Method::Auto: break;
  }
  if (m.factorization) return check_cor2(m, m.factorization->gbar_yv, m.factorization->gbar_zu);
  bool zero = true;
  for (const auto& t : all_subsystem_tfms(m)) zero = zero && t.G_zv.is_zero();
  return zero ? check_thm5(m) : check_sufficient(m);
}

}  // namespace ndsid
