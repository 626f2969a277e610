#pragma once

// Exact scalar arithmetic in the transform variable: rationals, univariate
// polynomials with rational coefficients and reduced rational functions.

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ndsid {

/// Arbitrary precision rational. GMP keeps it canonical (coprime, den > 0).
using Rat = mpq_class;

/// Parses "p/q", an integer, or a decimal literal such as "-1.25e-3" exactly.
Rat parse_rat(std::string_view text);

/// Canonical text form, "p/q" or "p" when the denominator is one.
std::string to_string(const Rat& r);

double to_double(const Rat& r);

/// Univariate polynomial over Q in ascending coefficient order.
///
/// The zero polynomial has an empty coefficient list and no degree: degree()
/// returns std::nullopt, which plays the role of minus infinity.
class Poly {
 public:
  Poly() = default;
  Poly(const Rat& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Rat> coeffs);

  /// c * lambda^k
  static Poly monomial(const Rat& c, int k);
  /// The transform variable itself.
  static Poly lambda() { return monomial(Rat(1), 1); }

  const std::vector<Rat>& coeffs() const { return c_; }
  std::optional<int> degree() const;
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  const Rat& lead() const;
  /// Coefficient of lambda^k, zero when out of range.
  Rat coeff(int k) const;

  Poly monic() const;
  Rat eval(const Rat& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  /// p(-lambda)
  Poly reflect() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rat& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string to_string(std::string_view var = "s") const;

 private:
  void trim();
  std::vector<Rat> c_;
};

struct PolyDivMod {
  Poly quot;
  Poly rem;
};

/// Euclidean division; throws DivisionByZeroFunction when b is zero.
PolyDivMod divmod(const Poly& a, const Poly& b);
/// Monic greatest common divisor. gcd(0, 0) is 0.
Poly gcd(const Poly& a, const Poly& b);
/// Monic least common multiple, zero if either argument is zero.
Poly lcm(const Poly& a, const Poly& b);
/// True when b divides a exactly (every polynomial divides zero).
bool divides(const Poly& b, const Poly& a);

/// Rational function num/den with den monic and gcd(num, den) = 1.
/// Zero is 0/1.
class RatFunc {
 public:
  RatFunc() : den_(Rat(1)) {}
  RatFunc(const Rat& c);   // NOLINT(google-explicit-constructor)
  RatFunc(long c) : RatFunc(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const Poly& p);  // NOLINT(google-explicit-constructor)
  RatFunc(const Poly& num, const Poly& den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_one(); }
  bool is_constant() const { return is_poly() && num_.is_constant(); }

  RatFunc inv() const;
  /// Value at x, or nullopt if x is a pole.
  std::optional<Rat> eval(const Rat& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  RatFunc reflect() const;

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  std::string to_string(std::string_view var = "s") const;

 private:
  struct Raw {};
  RatFunc(Raw, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
  void canonicalize();

  Poly num_;
  Poly den_;
};

enum class RatFuncOp { kAdd, kMul, kInv };

/// Dispatching form of the field operations; b is ignored for kInv.
RatFunc ratfunc_arith(RatFuncOp op, const RatFunc& a, const RatFunc& b = RatFunc());

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_zero(const Poly& p) { return p.is_zero(); }
inline bool is_zero(const RatFunc& f) { return f.is_zero(); }

}  // namespace ndsid
