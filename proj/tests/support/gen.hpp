#pragma once

// Seeded random generators for exact test data.

#include <random>

#include "ndsid/linalg.hpp"
#include "ndsid/matrix.hpp"
#include "ndsid/ratpoly.hpp"
#include "printers.hpp"

namespace ndsid::testing {

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  std::size_t count(long lo, long hi) { return static_cast<std::size_t>(integer(lo, hi)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Small rational p/q with |p| <= 5, 1 <= q <= 4.
  Rat rat() {
    Rat r(integer(-5, 5), integer(1, 4));
    r.canonicalize();
    return r;
  }
  Rat nonzero_rat() {
    Rat r;
    do r = rat();
    while (sgn(r) == 0);
    return r;
  }

  Poly poly(int max_deg) {
    int d = static_cast<int>(integer(0, max_deg));
    std::vector<Rat> c;
    for (int k = 0; k <= d; ++k) c.push_back(rat());
    return Poly(std::move(c));
  }
  Poly nonzero_poly(int max_deg) {
    Poly p;
    do p = poly(max_deg);
    while (p.is_zero());
    return p;
  }
  Poly monic_poly(int deg) {
    std::vector<Rat> c;
    for (int k = 0; k < deg; ++k) c.push_back(rat());
    c.push_back(Rat(1));
    return Poly(std::move(c));
  }

  RatFunc ratfunc(int max_deg) { return RatFunc(poly(max_deg), nonzero_poly(max_deg)); }
  RatFunc nonzero_ratfunc(int max_deg) { return RatFunc(nonzero_poly(max_deg), nonzero_poly(max_deg)); }

  QMatrix qmatrix(std::size_t r, std::size_t c, double density = 1.0) {
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (coin(density)) m(i, j) = rat();
    return m;
  }
  QMatrix qmatrix_of_rank(std::size_t r, std::size_t c, std::size_t k) {
    return qmatrix(r, k) * qmatrix(k, c);
  }
  PolyMatrix polymatrix(std::size_t r, std::size_t c, int max_deg) {
    PolyMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = poly(max_deg);
    return m;
  }
  RatMatrix ratmatrix(std::size_t r, std::size_t c, int max_deg) {
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = ratfunc(max_deg);
    return m;
  }
  QMatrix invertible(std::size_t n) {
    for (;;) {
      QMatrix m = qmatrix(n, n);
      if (rank(m) == n) return m;
    }
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace ndsid::testing
