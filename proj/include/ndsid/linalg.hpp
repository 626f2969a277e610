#pragma once

// Gaussian elimination over an exact field: Q (Rat) or Q(lambda) (RatFunc).

#include <optional>
#include <vector>

#include "ndsid/matrix.hpp"

namespace ndsid {

namespace detail {

inline std::size_t pivot_cost(const Rat& x) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}
inline std::size_t pivot_cost(const RatFunc& x) {
  return static_cast<std::size_t>(x.num().degree().value_or(0) + x.den().degree().value_or(0));
}
inline Rat field_inv(const Rat& x) { return Rat(1 / x); }
inline RatFunc field_inv(const RatFunc& x) { return x.inv(); }

}  // namespace detail

template <class T>
struct Rref {
  Matrix<T> r;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form. Pivots are chosen among the remaining rows by
/// cheapest nonzero entry to limit coefficient growth.
template <class T>
Rref<T> rref(Matrix<T> a) {
  Rref<T> out;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t best = a.rows();
    std::size_t best_cost = 0;
    for (std::size_t i = row; i < a.rows(); ++i) {
      if (is_zero(a(i, c))) continue;
      std::size_t cost = detail::pivot_cost(a(i, c));
      if (best == a.rows() || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best == a.rows()) continue;
    if (best != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(best, j));
    T inv = detail::field_inv(a(row, c));
    for (std::size_t j = c; j < a.cols(); ++j)
      if (!is_zero(a(row, j))) a(row, j) = T(a(row, j) * inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a(i, c))) continue;
      T f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (!is_zero(a(row, j))) a(i, j) -= T(f * a(row, j));
    }
    out.pivots.push_back(c);
    ++row;
  }
  out.r = std::move(a);
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& a) {
  if (a.empty()) return 0;
  // Eliminate along the shorter side.
  if (a.rows() > a.cols()) return rref(a.transpose()).pivots.size();
  return rref(a).pivots.size();
}

/// Basis of the right null space, one column per free variable. Returns a
/// cols x 0 matrix when a has full column rank.
template <class T>
Matrix<T> nullspace(const Matrix<T>& a) {
  const std::size_t n = a.cols();
  auto rr = rref(a);
  std::vector<bool> is_pivot(n, false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix<T> basis(n, free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = T(1L);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
      basis(rr.pivots[i], k) = T(-rr.r(i, free[k]));
  }
  return basis;
}

/// Some solution X of A X = B, or nullopt when the system is inconsistent.
template <class T>
std::optional<Matrix<T>> solve(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw ShapeMismatch("solve: " + a.shape() + " vs " + b.shape());
  auto rr = rref(hcat(a, b));
  const std::size_t n = a.cols();
  for (auto p : rr.pivots)
    if (p >= n) return std::nullopt;
  Matrix<T> x(n, b.cols());
  for (std::size_t i = 0; i < rr.pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(rr.pivots[i], j) = rr.r(i, n + j);
  return x;
}

/// Throws SingularMatrix.
template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw NotSquare("inverse of " + a.shape());
  const std::size_t n = a.rows();
  auto rr = rref(hcat(a, Matrix<T>::identity(n)));
  if (rr.pivots.size() < n || (n > 0 && rr.pivots[n - 1] != n - 1))
    throw SingularMatrix("matrix is singular");
  return rr.r.block(0, n, n, n);
}

/// Determinant by elimination over the field.
template <class T>
T det(Matrix<T> a) {
  if (a.rows() != a.cols()) throw NotSquare("determinant of " + a.shape());
  const std::size_t n = a.rows();
  T d(1L);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    std::size_t best_cost = 0;
    for (std::size_t i = c; i < n; ++i) {
      if (is_zero(a(i, c))) continue;
      std::size_t cost = detail::pivot_cost(a(i, c));
      if (best == n || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best == n) return T();
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(best, j));
      d = T(-d);
    }
    d = T(d * a(c, c));
    T inv = detail::field_inv(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(a(i, c))) continue;
      T f = T(a(i, c) * inv);
      for (std::size_t j = c; j < n; ++j)
        if (!is_zero(a(c, j))) a(i, j) -= T(f * a(c, j));
    }
  }
  return d;
}

inline bool is_fcr(const QMatrix& a) { return rank(a) == a.cols(); }
inline bool is_frr(const QMatrix& a) { return rank(a) == a.rows(); }

/// Extends the independent columns of `a` to a basis of Q^n; returns the
/// square invertible matrix [a, extra].
QMatrix complete_basis(const QMatrix& a);

}  // namespace ndsid
