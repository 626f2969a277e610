#include "ndsid/pencil.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ndsid/linalg.hpp"
#include "ndsid/polymat.hpp"

namespace ndsid {

MatrixPencil::MatrixPencil(QMatrix g, QMatrix h) : G(std::move(g)), H(std::move(h)) {
  if (G.rows() != H.rows() || G.cols() != H.cols())
    throw ShapeMismatch("pencil coefficients " + G.shape() + " and " + H.shape());
}

QMatrix MatrixPencil::at(const Rat& lambda) const { return lambda * G + H; }

PolyMatrix MatrixPencil::as_poly() const {
  PolyMatrix m(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) m(i, j) = Poly(std::vector<Rat>{H(i, j), G(i, j)});
  return m;
}

MatrixPencil transform(const QMatrix& u, const MatrixPencil& p, const QMatrix& v) {
  return {u * p.G * v, u * p.H * v};
}

MatrixPencil block_diag(const std::vector<MatrixPencil>& parts) {
  std::vector<QMatrix> g, h;
  for (const auto& p : parts) {
    g.push_back(p.G);
    h.push_back(p.H);
  }
  return {block_diag(g), block_diag(h)};
}

char to_char(BlockKind k) {
  switch (k) {
    case BlockKind::H: return 'H';
    case BlockKind::K: return 'K';
    case BlockKind::N: return 'N';
    case BlockKind::L: return 'L';
    case BlockKind::J: return 'J';
  }
  return '?';
}

namespace {

QMatrix upper_shift(std::size_t m) {
  QMatrix s(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) s(i, i + 1) = 1;
  return s;
}

}  // namespace

MatrixPencil canonical_block(BlockKind kind, std::size_t m) {
  switch (kind) {
    case BlockKind::K:
      if (m == 0) throw InvalidIndex("K block needs m >= 1");
      return {QMatrix::identity(m), upper_shift(m)};
    case BlockKind::N:
      if (m == 0) throw InvalidIndex("N block needs m >= 1");
      return {upper_shift(m), QMatrix::identity(m)};
    case BlockKind::H:
      if (m == 0) throw InvalidIndex("H block needs m >= 1");
      return {QMatrix::identity(m), QMatrix::identity(m)};
    case BlockKind::L: {
      QMatrix g(m, m + 1), h(m, m + 1);
      for (std::size_t i = 0; i < m; ++i) {
        g(i, i) = 1;
        h(i, i + 1) = 1;
      }
      return {g, h};
    }
    case BlockKind::J:
      return canonical_block(BlockKind::L, m).transpose();
  }
  throw InvalidIndex("unknown block kind");
}

QMatrix block_nullspace(BlockKind kind, std::size_t m, const Rat& lambda0) {
  switch (kind) {
    case BlockKind::L: {
      QMatrix x(m + 1, 1);
      Rat p(1);
      for (std::size_t j = 0; j <= m; ++j) {
        x(j, 0) = p;
        p *= -lambda0;
      }
      return x;
    }
    case BlockKind::K: {
      if (m == 0) throw InvalidIndex("K block needs m >= 1");
      if (sgn(lambda0) != 0) return QMatrix(m, 0);
      QMatrix x(m, 1);
      x(0, 0) = 1;
      return x;
    }
    case BlockKind::N:
      if (m == 0) throw InvalidIndex("N block needs m >= 1");
      return QMatrix(m, 0);
    case BlockKind::J:
      return QMatrix(m, 0);
    case BlockKind::H:
      return nullspace(canonical_block(BlockKind::H, m).at(lambda0));
  }
  throw InvalidIndex("unknown block kind");
}

namespace {

// Independent columns of a, in order.
QMatrix column_basis(const QMatrix& a) {
  auto rr = rref(a);
  return a.select_cols(rr.pivots);
}

// Block Toeplitz system whose null vectors are the coefficient stacks of
// polynomial solutions of degree <= d of (lambda G + H) x(lambda) = 0.
QMatrix toeplitz(const MatrixPencil& p, std::size_t d) {
  const std::size_t m = p.rows(), n = p.cols();
  QMatrix t((d + 2) * m, (d + 1) * n);
  for (std::size_t k = 0; k <= d; ++k) {
    t.set_block(k * m, k * n, p.H);
    t.set_block((k + 1) * m, k * n, p.G);
  }
  return t;
}

QMatrix pad_identity(std::size_t k, const QMatrix& a) {
  return block_diag(QMatrix::identity(k), a);
}

struct PeelResult {
  QMatrix U, V;                  // p == U * diag(L blocks, rest) * V
  std::vector<std::size_t> eps;  // ascending minimal indices
  MatrixPencil rest;             // full normal column rank
};

// Splits off one L block of minimal index from p:
// p == U * diag(L_eps, rest) * V.
struct OneL {
  QMatrix U, V;
  std::size_t eps;
  MatrixPencil rest;
};

OneL split_one_l(const MatrixPencil& p) {
  const std::size_t m = p.rows(), n = p.cols();
  for (std::size_t d = 0; d <= n; ++d) {
    QMatrix ns = nullspace(toeplitz(p, d));
    if (ns.cols() == 0) continue;
    const std::size_t eps = d;
    // c_k = (-1)^k x_k, so x(lambda) = sum c_k (-lambda)^k.
    QMatrix c(n, eps + 1);
    for (std::size_t k = 0; k <= eps; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        Rat v = ns(k * n + i, 0);
        c(i, k) = (k % 2 == 0) ? v : Rat(-v);
      }
    QMatrix w(m, eps);
    for (std::size_t k = 1; k <= eps; ++k) w.set_block(0, k - 1, p.G * c.col(k - 1));
    if (rank(c) != eps + 1 || rank(w) != eps) throw InternalError("minimal solution is degenerate");

    QMatrix vp = complete_basis(c);
    QMatrix up = complete_basis(w);
    MatrixPencil t = transform(inverse(up), p, vp);
    const std::size_t mr = m - eps, nr = n - eps - 1;
    MatrixPencil lblk{t.G.block(0, 0, eps, eps + 1), t.H.block(0, 0, eps, eps + 1)};
    if (!(lblk == canonical_block(BlockKind::L, eps)) || !t.G.block(eps, 0, mr, eps + 1).is_zero() ||
        !t.H.block(eps, 0, mr, eps + 1).is_zero())
      throw InternalError("L block extraction failed");
    MatrixPencil rest{t.G.block(eps, eps + 1, mr, nr), t.H.block(eps, eps + 1, mr, nr)};

    QMatrix x(eps + 1, nr), y(eps, mr);
    if (eps > 0 && nr > 0) {
      // L_G X + Y R_G = -D_G and L_H X + Y R_H = -D_H, in vec form.
      QMatrix dg = t.G.block(0, eps + 1, eps, nr), dh = t.H.block(0, eps + 1, eps, nr);
      QMatrix ie = QMatrix::identity(eps), in = QMatrix::identity(nr);
      QMatrix sys = vcat(hcat(kron(in, lblk.G), kron(rest.G.transpose(), ie)),
                         hcat(kron(in, lblk.H), kron(rest.H.transpose(), ie)));
      QMatrix rhs = -vcat(vec(dg), vec(dh));
      auto sol = solve(sys, rhs);
      if (!sol) throw InternalError("coupling equations have no solution");
      const std::size_t nx = (eps + 1) * nr;
      x = unvec(sol->block(0, 0, nx, 1), eps + 1, nr);
      y = unvec(sol->block(nx, 0, eps * mr, 1), eps, mr);
    }
    QMatrix sinv = QMatrix::identity(m), tinv = QMatrix::identity(n);
    if (eps > 0 && mr > 0) sinv.set_block(0, eps, -y);
    if (nr > 0) tinv.set_block(0, eps + 1, -x);
    return {up * sinv, tinv * inverse(vp), eps, rest};
  }
  throw InternalError("no polynomial null vector found");
}

PeelResult peel_l(const MatrixPencil& p) {
  PeelResult out{QMatrix::identity(p.rows()), QMatrix::identity(p.cols()), {}, p};
  std::size_t r0 = 0, c0 = 0;
  while (out.rest.cols() > 0 && normal_rank(out.rest.as_poly()) < out.rest.cols()) {
    OneL s = split_one_l(out.rest);
    out.U = out.U * pad_identity(r0, s.U);
    out.V = pad_identity(c0, s.V) * out.V;
    out.eps.push_back(s.eps);
    r0 += s.eps;
    c0 += s.eps + 1;
    out.rest = std::move(s.rest);
  }
  return out;
}

QMatrix matrix_power(const QMatrix& a, std::size_t k) {
  QMatrix r = QMatrix::identity(a.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * a;
  return r;
}

// a == Q diag(a_nil, a_inv) Q^{-1} with a_nil nilpotent, a_inv invertible.
struct Fitting {
  QMatrix Q, nil, inv;
};

Fitting fitting(const QMatrix& a) {
  const std::size_t n = a.rows();
  QMatrix an = matrix_power(a, n);
  QMatrix kb = nullspace(an);
  QMatrix ib = column_basis(an);
  QMatrix q = hcat(kb, ib);
  if (q.cols() != n) q = QMatrix(n, n);  // n == 0 keeps the shape
  QMatrix t = n ? inverse(q) * a * q : QMatrix();
  const std::size_t k = kb.cols();
  return {q, t.block(0, 0, k, k), t.block(k, k, n - k, n - k)};
}

// n == Z diag(upper shifts of sizes) Z^{-1}, sizes ascending.
struct NilJordan {
  QMatrix Z;
  std::vector<std::size_t> sizes;
};

NilJordan nilpotent_jordan(const QMatrix& nmat) {
  const std::size_t n = nmat.rows();
  std::size_t p = 0;
  std::vector<QMatrix> pw{QMatrix::identity(n)};
  while (!pw.back().is_zero()) {
    pw.push_back(pw.back() * nmat);
    ++p;
    if (p > n) throw InternalError("matrix is not nilpotent");
  }
  struct Head {
    QMatrix v;
    std::size_t len;
  };
  std::vector<Head> heads;
  for (std::size_t j = p; j >= 1; --j) {
    QMatrix w = nullspace(pw[j - 1]);
    for (const auto& h : heads) w = hcat(w, pw[h.len - j] * h.v);
    std::size_t r = rank(w);
    QMatrix kj = nullspace(pw[j]);
    for (std::size_t c = 0; c < kj.cols(); ++c) {
      QMatrix trial = hcat(w, kj.col(c));
      if (rank(trial) > r) {
        w = std::move(trial);
        ++r;
        heads.push_back({kj.col(c), j});
      }
    }
  }
  std::stable_sort(heads.begin(), heads.end(), [](const Head& a, const Head& b) { return a.len < b.len; });
  NilJordan out{QMatrix(n, 0), {}};
  for (const auto& h : heads) {
    for (std::size_t k = h.len; k >= 1; --k) out.Z = hcat(out.Z, pw[k - 1] * h.v);
    out.sizes.push_back(h.len);
  }
  if (out.Z.cols() != n) throw InternalError("incomplete Jordan basis");
  return out;
}

struct RawBlocks {
  QMatrix U, V;
  std::vector<KcfBlock> blocks;
};

// Regular square pencil: p == U diag(N blocks, K blocks, H) V.
RawBlocks regular_part(const MatrixPencil& p) {
  const std::size_t n = p.rows();
  RawBlocks out{QMatrix::identity(n), QMatrix::identity(n), {}};
  if (n == 0) return out;
  Rat mu(0);
  QMatrix s;
  for (long k = 0;; ++k) {
    mu = Rat((k + 1) / 2 * (k % 2 ? 1 : -1));
    s = mu * p.G + p.H;
    if (rank(s) == n) break;
    if (static_cast<std::size_t>(k) > 2 * n + 2) throw InternalError("pencil is not regular");
  }
  QMatrix f = inverse(s) * p.G;
  Fitting ff = fitting(f);
  const std::size_t a = ff.nil.rows(), b = ff.inv.rows();

  // nilpotent part: (lambda - mu) F_nil + I = (I - mu F_nil)(lambda N' + I)
  QMatrix ia = QMatrix::identity(a);
  QMatrix scale = ia - mu * ff.nil;
  NilJordan j1 = nilpotent_jordan(inverse(scale) * ff.nil);

  // invertible part: (lambda - mu) F_inv + I = F_inv (lambda I + B)
  QMatrix bm = b ? inverse(ff.inv) - mu * QMatrix::identity(b) : QMatrix();
  Fitting fb = fitting(bm);
  NilJordan j2 = nilpotent_jordan(fb.nil);
  const std::size_t e = fb.inv.rows();

  QMatrix left_nil = scale * j1.Z;
  QMatrix left_inv = b ? ff.inv * fb.Q * block_diag(j2.Z, QMatrix::identity(e)) : QMatrix();
  out.U = s * ff.Q * block_diag(left_nil, left_inv);
  QMatrix right_inv = b ? block_diag(inverse(j2.Z), QMatrix::identity(e)) * inverse(fb.Q) : QMatrix();
  out.V = block_diag(inverse(j1.Z), right_inv) * inverse(ff.Q);
  for (auto m : j1.sizes) out.blocks.push_back({BlockKind::N, m, canonical_block(BlockKind::N, m)});
  for (auto m : j2.sizes) out.blocks.push_back({BlockKind::K, m, canonical_block(BlockKind::K, m)});
  if (e > 0) out.blocks.push_back({BlockKind::H, e, {QMatrix::identity(e), fb.inv}});
  return out;
}

std::size_t block_rows(const KcfBlock& b) { return b.pencil.rows(); }
std::size_t block_cols(const KcfBlock& b) { return b.pencil.cols(); }

int kind_order(BlockKind k) {
  switch (k) {
    case BlockKind::L: return 0;
    case BlockKind::H: return 1;
    case BlockKind::K: return 2;
    case BlockKind::N: return 3;
    case BlockKind::J: return 4;
  }
  return 5;
}

}  // namespace

KroneckerForm kcf(const MatrixPencil& p) {
  // p == U1 diag(Ls, R1) V1
  PeelResult left = peel_l(p);
  // R1^T == U2 diag(Ls', R2) V2, so R1 == V2^T diag(Js, R2^T) U2^T
  PeelResult right = peel_l(left.rest.transpose());
  RawBlocks reg = regular_part(right.rest.transpose());

  std::size_t lr = 0, lc = 0;
  std::vector<KcfBlock> blocks;
  for (auto e : left.eps) {
    blocks.push_back({BlockKind::L, e, canonical_block(BlockKind::L, e)});
    lr += e;
    lc += e + 1;
  }
  std::size_t jr = 0, jc = 0;
  for (auto e : right.eps) {
    blocks.push_back({BlockKind::J, e, canonical_block(BlockKind::J, e)});
    jr += e + 1;
    jc += e;
  }
  for (auto& b : reg.blocks) blocks.push_back(b);

  QMatrix u = left.U * pad_identity(lr, right.V.transpose() * pad_identity(jr, reg.U));
  QMatrix v = pad_identity(lc, pad_identity(jc, reg.V) * right.U.transpose()) * left.V;

  // Reorder blocks to L, H, K, N, J with ascending sizes inside each kind.
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int ka = kind_order(blocks[a].kind), kb = kind_order(blocks[b].kind);
    if (ka != kb) return ka < kb;
    return blocks[a].m < blocks[b].m;
  });
  std::vector<std::size_t> row_start(blocks.size()), col_start(blocks.size());
  std::size_t r = 0, c = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    row_start[k] = r;
    col_start[k] = c;
    r += block_rows(blocks[k]);
    c += block_cols(blocks[k]);
  }
  QMatrix pr(p.rows(), p.rows()), pc(p.cols(), p.cols());
  std::size_t nr = 0, nc = 0;
  KroneckerForm out;
  for (auto k : order) {
    for (std::size_t i = 0; i < block_rows(blocks[k]); ++i) pr(row_start[k] + i, nr++) = 1;
    for (std::size_t j = 0; j < block_cols(blocks[k]); ++j) pc(col_start[k] + j, nc++) = 1;
    out.blocks.push_back(blocks[k]);
  }
  out.U = u * pr;
  out.V = pc.transpose() * v;
  if (!(transform(out.U, out.canonical(), out.V) == p)) throw InternalError("KCF reassembly mismatch");
  return out;
}

MatrixPencil KroneckerForm::canonical() const {
  std::vector<MatrixPencil> parts;
  for (const auto& b : blocks) parts.push_back(b.pencil);
  return block_diag(parts);
}

std::size_t KroneckerForm::xi_H() const {
  std::size_t s = 0;
  for (const auto& b : blocks)
    if (b.kind == BlockKind::H) s += b.m;
  return s;
}

std::size_t KroneckerForm::count(BlockKind k) const {
  return static_cast<std::size_t>(
      std::count_if(blocks.begin(), blocks.end(), [&](const KcfBlock& b) { return b.kind == k; }));
}

std::vector<std::size_t> KroneckerForm::indices(BlockKind k) const {
  std::vector<std::size_t> out;
  for (const auto& b : blocks)
    if (b.kind == k) out.push_back(b.m);
  return out;
}

std::string KroneckerForm::inventory() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& b : blocks) {
    if (!first) os << ' ';
    first = false;
    os << to_char(b.kind) << b.m;
  }
  return os.str();
}

bool is_regular(const MatrixPencil& p) {
  if (p.rows() != p.cols()) throw NotSquare("regularity of a " + p.G.shape() + " pencil");
  return !poly_det(p.as_poly()).is_zero();
}

bool is_strictly_regular(const MatrixPencil& p) {
  if (p.rows() != p.cols()) throw NotSquare("regularity of a " + p.G.shape() + " pencil");
  return rank(p.G) == p.rows() && rank(p.H) == p.rows();
}

}  // namespace ndsid
