#include "ndsid/polymat.hpp"

#include <algorithm>
#include <functional>

namespace ndsid {

PolyMatrix SmithForm::diag(std::size_t rows, std::size_t cols) const {
  PolyMatrix m(rows, cols);
  for (std::size_t j = 0; j < d.size(); ++j) m(j, j) = d[j];
  return m;
}

RatMatrix SmithMcMillan::diag(std::size_t rows, std::size_t cols) const {
  RatMatrix m(rows, cols);
  for (std::size_t j = 0; j < alphas.size(); ++j) m(j, j) = RatFunc(alphas[j], betas[j]);
  return m;
}

namespace {

// Tracks A together with U, V such that input == U * A * V.
struct SmithState {
  PolyMatrix A, U, V;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < A.cols(); ++c) std::swap(A(i, c), A(j, c));
    for (std::size_t r = 0; r < U.rows(); ++r) std::swap(U(r, i), U(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < A.rows(); ++r) std::swap(A(r, i), A(r, j));
    for (std::size_t c = 0; c < V.cols(); ++c) std::swap(V(i, c), V(j, c));
  }
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const Poly& q) {
    if (q.is_zero()) return;
    for (std::size_t c = 0; c < A.cols(); ++c)
      if (!A(j, c).is_zero()) A(i, c) += q * A(j, c);
    for (std::size_t r = 0; r < U.rows(); ++r)
      if (!U(r, i).is_zero()) U(r, j) -= q * U(r, i);
  }
  // col_i += q * col_j
  void add_col(std::size_t i, std::size_t j, const Poly& q) {
    if (q.is_zero()) return;
    for (std::size_t r = 0; r < A.rows(); ++r)
      if (!A(r, j).is_zero()) A(r, i) += q * A(r, j);
    for (std::size_t c = 0; c < V.cols(); ++c)
      if (!V(i, c).is_zero()) V(j, c) -= q * V(i, c);
  }
  void scale_row(std::size_t i, const Rat& s) {
    for (std::size_t c = 0; c < A.cols(); ++c) A(i, c) *= s;
    Rat inv = 1 / s;
    for (std::size_t r = 0; r < U.rows(); ++r) U(r, i) *= inv;
  }
};

}  // namespace

SmithForm smith_form(const PolyMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  SmithState st{m, PolyMatrix::identity(r), PolyMatrix::identity(c)};
  SmithForm out;
  const std::size_t kmax = std::min(r, c);
  for (std::size_t k = 0; k < kmax; ++k) {
    bool found = false;
    for (;;) {
      // Minimal-degree pivot in the trailing block.
      std::size_t pi = r, pj = c;
      int best = 0;
      for (std::size_t i = k; i < r; ++i)
        for (std::size_t j = k; j < c; ++j) {
          auto d = st.A(i, j).degree();
          if (d && (pi == r || *d < best)) {
            pi = i;
            pj = j;
            best = *d;
          }
        }
      if (pi == r) break;
      found = true;
      st.swap_rows(k, pi);
      st.swap_cols(k, pj);
      const Poly piv = st.A(k, k);
      bool clean = true;
      for (std::size_t i = k + 1; i < r; ++i) {
        if (st.A(i, k).is_zero()) continue;
        auto qr = divmod(st.A(i, k), piv);
        st.add_row(i, k, -qr.quot);
        if (!qr.rem.is_zero()) clean = false;
      }
      for (std::size_t j = k + 1; j < c; ++j) {
        if (st.A(k, j).is_zero()) continue;
        auto qr = divmod(st.A(k, j), piv);
        st.add_col(j, k, -qr.quot);
        if (!qr.rem.is_zero()) clean = false;
      }
      if (!clean) continue;
      // Divisibility repair: pull a non-multiple into the pivot row.
      bool repaired = false;
      for (std::size_t i = k + 1; i < r && !repaired; ++i)
        for (std::size_t j = k + 1; j < c; ++j)
          if (!divides(piv, st.A(i, j))) {
            st.add_row(k, i, Poly(Rat(1)));
            repaired = true;
            break;
          }
      if (!repaired) break;
    }
    if (!found) break;
    const Rat lead = st.A(k, k).lead();
    if (lead != 1) st.scale_row(k, Rat(1 / lead));
    out.d.push_back(st.A(k, k));
  }
  out.rank = out.d.size();
  out.U = std::move(st.U);
  out.V = std::move(st.V);
  return out;
}

Poly common_denominator(const RatMatrix& g) {
  Poly d(Rat(1));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!g(i, j).den().is_one()) d = lcm(d, g(i, j).den());
  return d;
}

RowScaled clear_row_denominators(const RatMatrix& g) {
  RowScaled out{PolyMatrix(g.rows(), g.cols()), {}};
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Poly d(Rat(1));
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!g(i, j).den().is_one()) d = lcm(d, g(i, j).den());
    for (std::size_t j = 0; j < g.cols(); ++j)
      out.num(i, j) = g(i, j).num() * divmod(d, g(i, j).den()).quot;
    out.dens.push_back(std::move(d));
  }
  return out;
}

SmithMcMillan smith_mcmillan(const RatMatrix& g) {
  const Poly d = common_denominator(g);
  PolyMatrix n = g.map([&](const RatFunc& f) { return f.num() * divmod(d, f.den()).quot; });
  SmithForm sf = smith_form(n);
  SmithMcMillan out;
  out.U = std::move(sf.U);
  out.V = std::move(sf.V);
  out.rank = sf.rank;
  for (const auto& s : sf.d) {
    Poly h = gcd(s, d);
    out.alphas.push_back(divmod(s, h).quot);
    out.betas.push_back(divmod(d, h).quot);
  }
  return out;
}

namespace {

// Distinct sample points 0, 1, -1, 2, -2, ...
Rat sample_point(std::size_t k) {
  long v = static_cast<long>((k + 1) / 2);
  return Rat(k % 2 == 1 ? v : -v);
}

}  // namespace

std::size_t normal_rank(const PolyMatrix& m) {
  const std::size_t full = std::min(m.rows(), m.cols());
  if (full == 0) return 0;
  std::vector<int> row_deg;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    int d = -1;
    for (std::size_t j = 0; j < m.cols(); ++j) d = std::max(d, m(i, j).degree().value_or(-1));
    if (d >= 0) row_deg.push_back(d);
  }
  if (row_deg.empty()) return 0;
  std::sort(row_deg.begin(), row_deg.end(), std::greater<>());

  // A nonzero (rho+1)-minor has degree at most the sum of the rho+1 largest
  // row degrees, so it cannot vanish at more points than that.
  auto points_needed = [&](std::size_t rho) {
    std::size_t s = 0;
    for (std::size_t k = 0; k <= rho && k < row_deg.size(); ++k) s += static_cast<std::size_t>(row_deg[k]);
    return s + 1;
  };
  std::size_t rho = 0;
  for (std::size_t k = 0; k < points_needed(rho); ++k) {
    rho = std::max(rho, rank(eval(m, sample_point(k))));
    if (rho == full || rho == row_deg.size()) break;
  }
  return rho;
}

std::size_t normal_rank(const RatMatrix& g) {
  return normal_rank(clear_row_denominators(g).num);
}

QMatrix const_nullspace(const QMatrix& a) { return nullspace(a); }

QMatrix const_nullspace(const RatMatrix& a) { return nullspace(to_const(a)); }

RatMatrix rat_inverse(const RatMatrix& g) {
  if (g.rows() != g.cols()) throw NotSquare("inverse of " + g.shape());
  return inverse(g);
}

Poly poly_det(const PolyMatrix& m0) {
  if (m0.rows() != m0.cols()) throw NotSquare("determinant of " + m0.shape());
  const std::size_t n = m0.rows();
  if (n == 0) return Poly(Rat(1));
  PolyMatrix m = m0;
  Poly prev(Rat(1));
  bool neg = false;
  // Bareiss fraction-free elimination; every division below is exact.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return Poly();
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = divmod(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev).quot;
    prev = m(k, k);
  }
  return neg ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

RatFunc rat_det(const RatMatrix& g) {
  if (g.rows() != g.cols()) throw NotSquare("determinant of " + g.shape());
  auto rs = clear_row_denominators(g);
  Poly den(Rat(1));
  for (const auto& d : rs.dens) den *= d;
  return RatFunc(poly_det(rs.num), den);
}

std::optional<int> degree(const PolyMatrix& m) {
  std::optional<int> d;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto e = m(i, j).degree();
      if (e && (!d || *e > *d)) d = e;
    }
  return d;
}

std::vector<QMatrix> coefficients(const PolyMatrix& m) {
  auto d = degree(m);
  std::vector<QMatrix> out;
  if (!d) return out;
  out.assign(static_cast<std::size_t>(*d) + 1, QMatrix(m.rows(), m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& c = m(i, j).coeffs();
      for (std::size_t k = 0; k < c.size(); ++k) out[k](i, j) = c[k];
    }
  return out;
}

PolyMatrix from_coefficients(const std::vector<QMatrix>& c, std::size_t rows, std::size_t cols) {
  PolyMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<Rat> v;
      for (const auto& ck : c) v.push_back(ck(i, j));
      m(i, j) = Poly(std::move(v));
    }
  return m;
}

PolyMatrix reflect(const PolyMatrix& m) {
  return m.map([](const Poly& p) { return p.reflect(); });
}

RatMatrix reflect(const RatMatrix& m) {
  return m.map([](const RatFunc& f) { return f.reflect(); });
}

namespace {

// Faddeev-LeVerrier: adj(lambda I - A) = sum_k lambda^{n-1-k} N_k and the
// characteristic polynomial coefficients come out alongside.
struct Leverrier {
  std::vector<QMatrix> n;  // N_0 .. N_{n-1}
  Poly chi;
};

Leverrier leverrier(const QMatrix& a) {
  if (a.rows() != a.cols()) throw NotSquare("resolvent of " + a.shape());
  const std::size_t n = a.rows();
  Leverrier out;
  std::vector<Rat> chi(n + 1, Rat(0));
  chi[n] = 1;
  QMatrix nk = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix an = a * nk;
    Rat tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += an(i, i);
    chi[n - k] = -tr / static_cast<long>(k);
    out.n.push_back(nk);
    if (k < n) {
      for (std::size_t i = 0; i < n; ++i) an(i, i) += chi[n - k];
      nk = std::move(an);
    }
  }
  out.chi = Poly(std::move(chi));
  return out;
}

}  // namespace

Resolvent resolvent(const QMatrix& a) {
  const std::size_t n = a.rows();
  Leverrier lv = leverrier(a);
  std::vector<QMatrix> coeff(n, QMatrix(n, n));
  for (std::size_t k = 0; k < n; ++k) coeff[n - 1 - k] = lv.n[k];
  return {from_coefficients(coeff, n, n), lv.chi};
}

RatMatrix state_space_tfm(const QMatrix& a, const QMatrix& b, const QMatrix& c, const QMatrix& d) {
  const std::size_t n = a.rows();
  if (b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols())
    throw ShapeMismatch("state space blocks A " + a.shape() + ", B " + b.shape() + ", C " +
                        c.shape() + ", D " + d.shape());
  if (n == 0) return to_rat(d);
  Leverrier lv = leverrier(a);
  std::vector<QMatrix> coeff(n, QMatrix(c.rows(), b.cols()));
  for (std::size_t k = 0; k < n; ++k) coeff[n - 1 - k] = c * lv.n[k] * b;
  PolyMatrix cab = from_coefficients(coeff, c.rows(), b.cols());
  RatMatrix g(c.rows(), b.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      g(i, j) = RatFunc(cab(i, j) + lv.chi * d(i, j), lv.chi);
  return g;
}

}  // namespace ndsid
