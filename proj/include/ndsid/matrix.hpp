#pragma once

// Dense row-major matrices over an exact scalar type (Rat, Poly or RatFunc).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ndsid/errors.hpp"
#include "ndsid/ratpoly.hpp"

namespace ndsid {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, T()) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
      if (row.size() != c_) throw ShapeMismatch("ragged matrix literal");
      for (const auto& x : row) a_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1L);
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  const T& at(std::size_t i, std::size_t j) const {
    if (i >= r_ || j >= c_) throw InvalidIndex("matrix index out of range");
    return a_[i * c_ + j];
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!ndsid::is_zero(x)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > r_ || c0 + nc > c_) throw InvalidIndex("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw InvalidIndex("set_block out of range");
    for (std::size_t i = 0; i < b.r_; ++i)
      for (std::size_t j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix col(std::size_t j) const { return block(0, j, r_, 1); }
  Matrix row(std::size_t i) const { return block(i, 0, 1, c_); }

  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(r_, idx.size());
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) m(i, k) = at(i, idx[k]);
    return m;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), c_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < c_; ++j) m(k, j) = at(idx[k], j);
    return m;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    Matrix<decltype(f(std::declval<const T&>()))> m(r_, c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
    return m;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix operator-() const {
    Matrix m = *this;
    for (auto& x : m.a_) x = T(-x);
    return m;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) {
      throw ShapeMismatch("product of " + a.shape() + " and " + b.shape());
    }
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (ndsid::is_zero(x)) continue;
        for (std::size_t j = 0; j < b.c_; ++j) {
          if (ndsid::is_zero(b(k, j))) continue;
          m(i, j) += T(x * b(k, j));
        }
      }
    return m;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.a_) x = T(s * x);
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string shape() const { return std::to_string(r_) + "x" + std::to_string(c_); }

 private:
  void check_same(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw ShapeMismatch("shapes " + shape() + " and " + o.shape());
  }

  std::size_t r_ = 0;
  std::size_t c_ = 0;
  std::vector<T> a_;
};

using QMatrix = Matrix<Rat>;
using PolyMatrix = Matrix<Poly>;
using RatMatrix = Matrix<RatFunc>;

template <class T>
Matrix<T> hcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) {
    // An empty operand with no rows is allowed to adopt the other's height.
    if (a.rows() == 0 && a.cols() == 0) return b;
    if (b.rows() == 0 && b.cols() == 0) return a;
    throw ShapeMismatch("hcat of " + a.shape() + " and " + b.shape());
  }
  Matrix<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class T>
Matrix<T> vcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) {
    if (a.rows() == 0 && a.cols() == 0) return b;
    if (b.rows() == 0 && b.cols() == 0) return a;
    throw ShapeMismatch("vcat of " + a.shape() + " and " + b.shape());
  }
  Matrix<T> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

template <class T>
Matrix<T> hcat(std::initializer_list<Matrix<T>> parts) {
  Matrix<T> m;
  for (const auto& p : parts) m = hcat(m, p);
  return m;
}

template <class T>
Matrix<T> vcat(std::initializer_list<Matrix<T>> parts) {
  Matrix<T> m;
  for (const auto& p : parts) m = vcat(m, p);
  return m;
}

template <class T>
Matrix<T> block_diag(const std::vector<Matrix<T>>& parts) {
  std::size_t r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  Matrix<T> m(r, c);
  r = c = 0;
  for (const auto& p : parts) {
    m.set_block(r, c, p);
    r += p.rows();
    c += p.cols();
  }
  return m;
}

template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b) {
  return block_diag(std::vector<Matrix<T>>{a, b});
}

/// Column-major vectorization.
template <class T>
Matrix<T> vec(const Matrix<T>& a) {
  Matrix<T> v(a.rows() * a.cols(), 1);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) v(j * a.rows() + i, 0) = a(i, j);
  return v;
}

/// Inverse of vec for an r x c matrix.
template <class T>
Matrix<T> unvec(const Matrix<T>& v, std::size_t r, std::size_t c) {
  if (v.rows() * v.cols() != r * c) throw ShapeMismatch("unvec size");
  Matrix<T> a(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) a(i, j) = v(j * r + i, 0);
  return a;
}

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = T(a(i, j) * b(p, q));
    }
  return k;
}

inline PolyMatrix to_poly(const QMatrix& a) {
  return a.map([](const Rat& x) { return Poly(x); });
}
inline RatMatrix to_rat(const QMatrix& a) {
  return a.map([](const Rat& x) { return RatFunc(x); });
}
inline RatMatrix to_rat(const PolyMatrix& a) {
  return a.map([](const Poly& x) { return RatFunc(x); });
}

/// Constant part of a matrix whose entries are all constants; throws otherwise.
QMatrix to_const(const RatMatrix& a);
QMatrix to_const(const PolyMatrix& a);

QMatrix eval(const PolyMatrix& a, const Rat& x);
/// Throws DivisionByZeroFunction if x is a pole of some entry.
QMatrix eval(const RatMatrix& a, const Rat& x);

std::string to_string(const QMatrix& a);
std::string to_string(const PolyMatrix& a, std::string_view var = "s");
std::string to_string(const RatMatrix& a, std::string_view var = "s");

}  // namespace ndsid
