#include <sstream>

#include "ndsid/linalg.hpp"
#include "ndsid/matrix.hpp"

namespace ndsid {

QMatrix to_const(const RatMatrix& a) {
  return a.map([](const RatFunc& f) {
    if (!f.is_constant()) throw PreconditionViolated("entry " + f.to_string() + " is not constant");
    return f.num().coeff(0);
  });
}

QMatrix to_const(const PolyMatrix& a) {
  return a.map([](const Poly& p) {
    if (!p.is_constant()) throw PreconditionViolated("entry " + p.to_string() + " is not constant");
    return p.coeff(0);
  });
}

QMatrix eval(const PolyMatrix& a, const Rat& x) {
  return a.map([&](const Poly& p) { return p.eval(x); });
}

QMatrix eval(const RatMatrix& a, const Rat& x) {
  return a.map([&](const RatFunc& f) {
    auto v = f.eval(x);
    if (!v) throw DivisionByZeroFunction("evaluation at a pole " + to_string(x));
    return *v;
  });
}

namespace {

template <class T, class F>
std::string render(const Matrix<T>& a, F&& fmt) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) os << ", ";
      os << fmt(a(i, j));
    }
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string to_string(const QMatrix& a) {
  return render(a, [](const Rat& x) { return to_string(x); });
}

std::string to_string(const PolyMatrix& a, std::string_view var) {
  return render(a, [&](const Poly& p) { return p.to_string(var); });
}

std::string to_string(const RatMatrix& a, std::string_view var) {
  return render(a, [&](const RatFunc& f) { return f.to_string(var); });
}

QMatrix complete_basis(const QMatrix& a) {
  const std::size_t n = a.rows();
  QMatrix basis(n, 0);
  std::size_t r = 0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    QMatrix trial = hcat(basis, a.col(j));
    if (rank(trial) > r) {
      basis = std::move(trial);
      ++r;
    }
  }
  QMatrix id = QMatrix::identity(n);
  for (std::size_t j = 0; j < n && r < n; ++j) {
    QMatrix trial = hcat(basis, id.col(j));
    if (rank(trial) > r) {
      basis = std::move(trial);
      ++r;
    }
  }
  return basis;
}

}  // namespace ndsid
