#include "ndsid/ratpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ndsid/errors.hpp"

namespace ndsid {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_text(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  std::string t(s);
  if (t[0] == '+') t.erase(0, 1);
  return mpz_class(t, 10);
}

Rat pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rat(mpz_class(1), p) : Rat(p);
}

Poly exact_quotient(const Poly& a, const Poly& b) { return divmod(a, b).quot; }

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash));
    mpz_class den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  }

  // decimal: [sign] digits [. digits] [e [sign] digits]
  std::string_view mant = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    std::string_view es = s.substr(e + 1);
    if (!is_integer_text(es)) throw ParseError("bad exponent in '" + std::string(s) + "'");
    exponent = std::stol(std::string(es));
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) throw ParseError("bad number '" + std::string(s) + "'");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw ParseError("bad number '" + std::string(s) + "'");
    }
  }
  if (digits.empty()) throw ParseError("bad number '" + std::string(s) + "'");
  Rat r(mpz_class(digits, 10));
  r *= pow10(exponent - frac);
  if (neg) r = -r;
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(10); }

double to_double(const Rat& r) { return r.get_d(); }

// ---------------------------------------------------------------- Poly

Poly::Poly(const Rat& c) {
  if (sgn(c) != 0) c_.push_back(c);
}

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const Rat& c, int k) {
  if (k < 0) throw InvalidIndex("negative monomial degree");
  Poly p;
  if (sgn(c) == 0) return p;
  p.c_.assign(static_cast<std::size_t>(k) + 1, Rat(0));
  p.c_.back() = c;
  return p;
}

void Poly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

std::optional<int> Poly::degree() const {
  if (c_.empty()) return std::nullopt;
  return static_cast<int>(c_.size()) - 1;
}

const Rat& Poly::lead() const {
  static const Rat kZero(0);
  return c_.empty() ? kZero : c_.back();
}

Rat Poly::coeff(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= c_.size()) return Rat(0);
  return c_[static_cast<std::size_t>(k)];
}

Poly Poly::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  Poly p = *this;
  Rat inv = 1 / lead();
  for (auto& c : p.c_) c *= inv;
  return p;
}

Rat Poly::eval(const Rat& x) const {
  Rat acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

std::complex<double> Poly::eval(std::complex<double> x) const {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

Poly Poly::reflect() const {
  Poly p = *this;
  for (std::size_t k = 1; k < p.c_.size(); k += 2) p.c_[k] = -p.c_[k];
  return p;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly p;
  if (a.c_.empty() || b.c_.empty()) return p;
  p.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) p.c_[i + j] += a.c_[i] * b.c_[j];
  }
  p.trim();
  return p;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rat& s) {
  if (sgn(s) == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

std::string Poly::to_string(std::string_view var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
    const Rat& c = c_[static_cast<std::size_t>(k)];
    if (sgn(c) == 0) continue;
    Rat mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) {
      os << ndsid::to_string(mag);
      if (k > 0) os << "*";
    }
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

PolyDivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZeroFunction("polynomial division by zero");
  std::vector<Rat> rem = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t nb = bc.size();
  if (rem.size() < nb) return {Poly(), a};
  std::vector<Rat> q(rem.size() - nb + 1, Rat(0));
  Rat inv_lead = 1 / bc.back();
  for (std::size_t k = rem.size(); k-- >= nb;) {
    if (sgn(rem[k]) == 0) continue;
    Rat f = rem[k] * inv_lead;
    q[k - nb + 1] = f;
    for (std::size_t j = 0; j < nb; ++j) rem[k - nb + 1 + j] -= f * bc[j];
  }
  rem.resize(nb - 1);
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a.monic();
  Poly y = b.monic();
  while (!y.is_zero()) {
    Poly r = divmod(x, y).rem.monic();
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  return (exact_quotient(a, gcd(a, b)) * b).monic();
}

bool divides(const Poly& b, const Poly& a) {
  if (a.is_zero()) return true;
  if (b.is_zero()) return false;
  return divmod(a, b).rem.is_zero();
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(const Rat& c) : num_(c), den_(Rat(1)) {}

RatFunc::RatFunc(const Poly& p) : num_(p), den_(Rat(1)) {}

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
  canonicalize();
}

void RatFunc::canonicalize() {
  if (den_.is_zero()) throw DivisionByZeroFunction("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly(Rat(1));
    return;
  }
  if (!den_.is_constant()) {
    Poly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = exact_quotient(num_, g);
      den_ = exact_quotient(den_, g);
    }
  }
  if (den_.lead() != 1) {
    Rat inv = 1 / den_.lead();
    num_ *= inv;
    den_ *= inv;
  }
}

RatFunc RatFunc::inv() const {
  if (is_zero()) throw DivisionByZeroFunction("inverse of the zero rational function");
  RatFunc r(Raw{}, den_, num_);
  Rat inv = 1 / r.den_.lead();
  r.num_ *= inv;
  r.den_ *= inv;
  return r;
}

std::optional<Rat> RatFunc::eval(const Rat& x) const {
  Rat d = den_.eval(x);
  if (sgn(d) == 0) return std::nullopt;
  return Rat(num_.eval(x) / d);
}

std::complex<double> RatFunc::eval(std::complex<double> x) const {
  return num_.eval(x) / den_.eval(x);
}

RatFunc RatFunc::reflect() const { return RatFunc(num_.reflect(), den_.reflect()); }

RatFunc RatFunc::operator-() const { return RatFunc(Raw{}, -num_, den_); }

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (num_.is_zero()) {
      den_ = Poly(Rat(1));
      return *this;
    }
    if (!den_.is_one()) canonicalize();
    return *this;
  }
  Poly g = gcd(den_, o.den_);
  Poly od = exact_quotient(o.den_, g);
  num_ = num_ * od + o.num_ * exact_quotient(den_, g);
  den_ = den_ * od;
  canonicalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero() || o.is_zero()) {
    num_ = Poly();
    den_ = Poly(Rat(1));
    return *this;
  }
  if (is_poly() && o.is_poly()) {
    num_ *= o.num_;
    return *this;
  }
  Poly g1 = gcd(num_, o.den_);
  Poly g2 = gcd(o.num_, den_);
  Poly n1 = g1.is_one() ? num_ : exact_quotient(num_, g1);
  Poly d2 = g1.is_one() ? o.den_ : exact_quotient(o.den_, g1);
  Poly n2 = g2.is_one() ? o.num_ : exact_quotient(o.num_, g2);
  Poly d1 = g2.is_one() ? den_ : exact_quotient(den_, g2);
  num_ = n1 * n2;
  den_ = d1 * d2;
  if (den_.lead() != 1) {
    Rat inv = 1 / den_.lead();
    num_ *= inv;
    den_ *= inv;
  }
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inv(); }

std::string RatFunc::to_string(std::string_view var) const {
  if (is_poly()) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

RatFunc ratfunc_arith(RatFuncOp op, const RatFunc& a, const RatFunc& b) {
  switch (op) {
    case RatFuncOp::kAdd:
      return a + b;
    case RatFuncOp::kMul:
      return a * b;
    case RatFuncOp::kInv:
      return a.inv();
  }
  throw InvalidIndex("unknown rational function operation");
}

}  // namespace ndsid
