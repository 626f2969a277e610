#include "ndsid/model.hpp"

#include "ndsid/linalg.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid {

namespace {

template <class T>
void check_shape(const char* name, const Matrix<T>& a, std::size_t r, std::size_t c) {
  if (a.rows() != r || a.cols() != c)
    throw ShapeMismatch(std::string(name) + " is " + a.shape() + ", expected " +
                        std::to_string(r) + "x" + std::to_string(c));
}

// P (I - G P)^{-1}
QMatrix lft_gain(const SubsystemLft& s) {
  QMatrix igp = QMatrix::identity(s.dims.m_g) - s.G * s.P;
  try {
    return s.P * inverse(igp);
  } catch (const SingularMatrix&) {
    throw IllPosedSubsystem("I - G P is singular");
  }
}

RatMatrix rblock(const RatMatrix& a, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
  return a.block(r0, c0, nr, nc);
}

}  // namespace

SubsystemRealized SubsystemRealized::zeros(const Dims& d) {
  SubsystemRealized r;
  r.dims = d;
  r.A_xx = QMatrix(d.m_x, d.m_x);
  r.A_xv = QMatrix(d.m_x, d.m_v);
  r.B_x = QMatrix(d.m_x, d.m_u);
  r.A_zx = QMatrix(d.m_z, d.m_x);
  r.A_zv = QMatrix(d.m_z, d.m_v);
  r.B_z = QMatrix(d.m_z, d.m_u);
  r.C_x = QMatrix(d.m_y, d.m_x);
  r.C_v = QMatrix(d.m_y, d.m_v);
  r.D_u = QMatrix(d.m_y, d.m_u);
  return r;
}

void SubsystemRealized::validate() const {
  const Dims& d = dims;
  check_shape("A_xx", A_xx, d.m_x, d.m_x);
  check_shape("A_xv", A_xv, d.m_x, d.m_v);
  check_shape("B_x", B_x, d.m_x, d.m_u);
  check_shape("A_zx", A_zx, d.m_z, d.m_x);
  check_shape("A_zv", A_zv, d.m_z, d.m_v);
  check_shape("B_z", B_z, d.m_z, d.m_u);
  check_shape("C_x", C_x, d.m_y, d.m_x);
  check_shape("C_v", C_v, d.m_y, d.m_v);
  check_shape("D_u", D_u, d.m_y, d.m_u);
}

SubsystemLft SubsystemLft::zeros(const Dims& d) {
  SubsystemLft s;
  s.dims = d;
  s.A_xx0 = QMatrix(d.m_x, d.m_x);
  s.A_xv0 = QMatrix(d.m_x, d.m_v);
  s.B_x0 = QMatrix(d.m_x, d.m_u);
  s.A_zx0 = QMatrix(d.m_z, d.m_x);
  s.A_zv0 = QMatrix(d.m_z, d.m_v);
  s.B_z0 = QMatrix(d.m_z, d.m_u);
  s.C_x0 = QMatrix(d.m_y, d.m_x);
  s.C_v0 = QMatrix(d.m_y, d.m_v);
  s.D_u0 = QMatrix(d.m_y, d.m_u);
  s.H_x = QMatrix(d.m_x, d.m_p);
  s.H_z = QMatrix(d.m_z, d.m_p);
  s.H_y = QMatrix(d.m_y, d.m_p);
  s.F_x = QMatrix(d.m_g, d.m_x);
  s.F_v = QMatrix(d.m_g, d.m_v);
  s.F_u = QMatrix(d.m_g, d.m_u);
  s.G = QMatrix(d.m_g, d.m_p);
  s.P = QMatrix(d.m_p, d.m_g);
  return s;
}

SubsystemLft SubsystemLft::from_realized(const SubsystemRealized& r) {
  Dims d = r.dims;
  d.m_g = d.m_p = 0;
  SubsystemLft s = zeros(d);
  s.A_xx0 = r.A_xx;
  s.A_xv0 = r.A_xv;
  s.B_x0 = r.B_x;
  s.A_zx0 = r.A_zx;
  s.A_zv0 = r.A_zv;
  s.B_z0 = r.B_z;
  s.C_x0 = r.C_x;
  s.C_v0 = r.C_v;
  s.D_u0 = r.D_u;
  return s;
}

void SubsystemLft::validate() const {
  const Dims& d = dims;
  check_shape("A_xx0", A_xx0, d.m_x, d.m_x);
  check_shape("A_xv0", A_xv0, d.m_x, d.m_v);
  check_shape("B_x0", B_x0, d.m_x, d.m_u);
  check_shape("A_zx0", A_zx0, d.m_z, d.m_x);
  check_shape("A_zv0", A_zv0, d.m_z, d.m_v);
  check_shape("B_z0", B_z0, d.m_z, d.m_u);
  check_shape("C_x0", C_x0, d.m_y, d.m_x);
  check_shape("C_v0", C_v0, d.m_y, d.m_v);
  check_shape("D_u0", D_u0, d.m_y, d.m_u);
  check_shape("H_x", H_x, d.m_x, d.m_p);
  check_shape("H_z", H_z, d.m_z, d.m_p);
  check_shape("H_y", H_y, d.m_y, d.m_p);
  check_shape("F_x", F_x, d.m_g, d.m_x);
  check_shape("F_v", F_v, d.m_g, d.m_v);
  check_shape("F_u", F_u, d.m_g, d.m_u);
  check_shape("G", G, d.m_g, d.m_p);
  check_shape("P", P, d.m_p, d.m_g);
}

void Scm::validate() const {
  if (!has_pattern()) return;
  if (fixed_zero.size() != phi.rows()) throw ShapeMismatch("zero pattern row count differs from phi");
  for (std::size_t i = 0; i < phi.rows(); ++i) {
    if (fixed_zero[i].size() != phi.cols()) throw ShapeMismatch("zero pattern column count differs from phi");
    for (std::size_t j = 0; j < phi.cols(); ++j)
      if (fixed_zero[i][j] && sgn(phi(i, j)) != 0)
        throw InvalidParam("phi(" + std::to_string(i) + "," + std::to_string(j) +
                           ") is fixed to zero but has a nonzero value");
  }
}

#define NDSID_TOTAL(name, field)                       \
  std::size_t NdsModel::name() const {                 \
    std::size_t n = 0;                                 \
    for (const auto& s : subsystems) n += s.dims.field; \
    return n;                                          \
  }
NDSID_TOTAL(total_v, m_v)
NDSID_TOTAL(total_z, m_z)
NDSID_TOTAL(total_u, m_u)
NDSID_TOTAL(total_y, m_y)
NDSID_TOTAL(total_x, m_x)
#undef NDSID_TOTAL

std::size_t NdsModel::v_offset(std::size_t i) const {
  if (i > subsystems.size()) throw InvalidIndex("subsystem " + std::to_string(i));
  std::size_t n = 0;
  for (std::size_t k = 0; k < i; ++k) n += subsystems[k].dims.m_v;
  return n;
}

std::size_t NdsModel::z_offset(std::size_t i) const {
  if (i > subsystems.size()) throw InvalidIndex("subsystem " + std::to_string(i));
  std::size_t n = 0;
  for (std::size_t k = 0; k < i; ++k) n += subsystems[k].dims.m_z;
  return n;
}

void NdsModel::validate() const {
  if (subsystems.empty()) throw InvalidParam("model has no subsystems");
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    try {
      subsystems[i].validate();
    } catch (const ShapeMismatch& e) {
      throw ShapeMismatch("subsystem " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  check_shape("phi", phi.phi, total_v(), total_z());
  phi.validate();
  if (factorization) {
    check_shape("gbar_yv", factorization->gbar_yv, total_y(), total_z());
    check_shape("gbar_zu", factorization->gbar_zu, total_v(), total_u());
  }
}

bool well_posed_subsystem(const SubsystemLft& s) {
  return sgn(det(QMatrix::identity(s.dims.m_g) - s.G * s.P)) != 0;
}

SubsystemRealized realize(const SubsystemLft& s) {
  s.validate();
  QMatrix k = lft_gain(s);
  QMatrix hx = s.H_x * k, hz = s.H_z * k, hy = s.H_y * k;
  SubsystemRealized r;
  r.dims = s.dims;
  r.A_xx = s.A_xx0 + hx * s.F_x;
  r.A_xv = s.A_xv0 + hx * s.F_v;
  r.B_x = s.B_x0 + hx * s.F_u;
  r.A_zx = s.A_zx0 + hz * s.F_x;
  r.A_zv = s.A_zv0 + hz * s.F_v;
  r.B_z = s.B_z0 + hz * s.F_u;
  r.C_x = s.C_x0 + hy * s.F_x;
  r.C_v = s.C_v0 + hy * s.F_v;
  r.D_u = s.D_u0 + hy * s.F_u;
  return r;
}

SubsystemRealized network_realized(const NdsModel& m) {
  std::vector<QMatrix> axx, axv, bx, azx, azv, bz, cx, cv, du;
  for (const auto& s : m.subsystems) {
    SubsystemRealized r = realize(s);
    axx.push_back(r.A_xx);
    axv.push_back(r.A_xv);
    bx.push_back(r.B_x);
    azx.push_back(r.A_zx);
    azv.push_back(r.A_zv);
    bz.push_back(r.B_z);
    cx.push_back(r.C_x);
    cv.push_back(r.C_v);
    du.push_back(r.D_u);
  }
  SubsystemRealized n;
  n.dims = {m.total_u(), m.total_v(), m.total_x(), m.total_y(), m.total_z(), 0, 0};
  n.A_xx = block_diag(axx);
  n.A_xv = block_diag(axv);
  n.B_x = block_diag(bx);
  n.A_zx = block_diag(azx);
  n.A_zv = block_diag(azv);
  n.B_z = block_diag(bz);
  n.C_x = block_diag(cx);
  n.C_v = block_diag(cv);
  n.D_u = block_diag(du);
  return n;
}

QMatrix network_a_zv(const NdsModel& m) {
  std::vector<QMatrix> parts;
  for (const auto& s : m.subsystems) parts.push_back(realize(s).A_zv);
  return block_diag(parts);
}

bool well_posed_nds(const NdsModel& m, const QMatrix& phi) {
  QMatrix azv = network_a_zv(m);
  return sgn(det(QMatrix::identity(phi.rows()) - phi * azv)) != 0;
}

TfmBundle subsystem_tfms(const SubsystemRealized& s) {
  s.validate();
  const Dims& d = s.dims;
  RatMatrix all = state_space_tfm(s.A_xx, hcat(s.B_x, s.A_xv), vcat(s.C_x, s.A_zx),
                                  vcat(hcat(s.D_u, s.C_v), hcat(s.B_z, s.A_zv)));
  return {rblock(all, 0, 0, d.m_y, d.m_u), rblock(all, 0, d.m_u, d.m_y, d.m_v),
          rblock(all, d.m_y, 0, d.m_z, d.m_u), rblock(all, d.m_y, d.m_u, d.m_z, d.m_v)};
}

AugmentedTfms augmented_h_tfms(const SubsystemLft& s) {
  s.validate();
  const Dims& d = s.dims;
  QMatrix feed = vcat({hcat({s.G, s.F_v, s.F_u}), hcat({s.H_z, s.A_zv0, s.B_z0}),
                       hcat({s.H_y, s.C_v0, s.D_u0})});
  RatMatrix all = state_space_tfm(s.A_xx0, hcat({s.H_x, s.A_xv0, s.B_x0}),
                                  vcat({s.F_x, s.A_zx0, s.C_x0}), feed);
  const std::size_t r[3] = {0, d.m_g, d.m_g + d.m_z};
  const std::size_t nr[3] = {d.m_g, d.m_z, d.m_y};
  const std::size_t c[3] = {0, d.m_p, d.m_p + d.m_v};
  const std::size_t nc[3] = {d.m_p, d.m_v, d.m_u};
  auto b = [&](int i, int j) { return rblock(all, r[i], c[j], nr[i], nc[j]); };
  return {b(0, 0), b(0, 1), b(0, 2), b(1, 0), b(1, 1), b(1, 2), b(2, 0), b(2, 1), b(2, 2)};
}

TfmBundle lft_tfms(const SubsystemLft& s) {
  if (!well_posed_subsystem(s)) throw IllPosedSubsystem("I - G P is singular");
  AugmentedTfms h = augmented_h_tfms(s);
  RatMatrix p = to_rat(s.P);
  RatMatrix gain;
  try {
    gain = p * rat_inverse(RatMatrix::identity(s.dims.m_g) - h.H_wr * p);
  } catch (const SingularMatrix&) {
    throw IllPosedSubsystem("I - H_wr P is singular");
  }
  RatMatrix right = hcat(h.H_wv, h.H_wu);
  RatMatrix zpart = h.H_zr * gain * right;
  RatMatrix ypart = h.H_yr * gain * right;
  const std::size_t mv = s.dims.m_v, mu = s.dims.m_u;
  TfmBundle t;
  t.G_zv = h.H_zv + rblock(zpart, 0, 0, s.dims.m_z, mv);
  t.G_zu = h.H_zu + rblock(zpart, 0, mv, s.dims.m_z, mu);
  t.G_yv = h.H_yv + rblock(ypart, 0, 0, s.dims.m_y, mv);
  t.G_yu = h.H_yu + rblock(ypart, 0, mv, s.dims.m_y, mu);
  return t;
}

std::vector<TfmBundle> all_subsystem_tfms(const NdsModel& m) {
  std::vector<TfmBundle> out;
  for (const auto& s : m.subsystems) out.push_back(subsystem_tfms(realize(s)));
  return out;
}

TfmBundle network_tfms(const NdsModel& m) {
  std::vector<RatMatrix> yu, yv, zu, zv;
  for (const auto& t : all_subsystem_tfms(m)) {
    yu.push_back(t.G_yu);
    yv.push_back(t.G_yv);
    zu.push_back(t.G_zu);
    zv.push_back(t.G_zv);
  }
  return {block_diag(yu), block_diag(yv), block_diag(zu), block_diag(zv)};
}

ClosedLoop closed_loop(const NdsModel& m, const QMatrix& phi) {
  SubsystemRealized n = network_realized(m);
  check_shape("phi", phi, n.dims.m_v, n.dims.m_z);
  QMatrix w;
  try {
    w = inverse(QMatrix::identity(n.dims.m_v) - phi * n.A_zv) * phi;
  } catch (const SingularMatrix&) {
    throw IllPosedNds("I - phi A_zv is singular");
  }
  // v = w (A_zx x + B_z u)
  return {n.A_xx + n.A_xv * w * n.A_zx, n.B_x + n.A_xv * w * n.B_z, n.C_x + n.C_v * w * n.A_zx,
          n.D_u + n.C_v * w * n.B_z};
}

SubsystemLft dual_subsystem(const SubsystemLft& s) {
  s.validate();
  SubsystemLft t;
  const Dims& d = s.dims;
  t.dims = {d.m_y, d.m_z, d.m_x, d.m_u, d.m_v, d.m_p, d.m_g};
  t.A_xx0 = s.A_xx0.transpose();
  t.A_xv0 = s.A_zx0.transpose();
  t.B_x0 = s.C_x0.transpose();
  t.A_zx0 = s.A_xv0.transpose();
  t.A_zv0 = s.A_zv0.transpose();
  t.B_z0 = s.C_v0.transpose();
  t.C_x0 = s.B_x0.transpose();
  t.C_v0 = s.B_z0.transpose();
  t.D_u0 = s.D_u0.transpose();
  t.H_x = s.F_x.transpose();
  t.H_z = s.F_v.transpose();
  t.H_y = s.F_u.transpose();
  t.F_x = s.H_x.transpose();
  t.F_v = s.H_z.transpose();
  t.F_u = s.H_y.transpose();
  t.G = s.G.transpose();
  t.P = s.P.transpose();
  return t;
}

}  // namespace ndsid
