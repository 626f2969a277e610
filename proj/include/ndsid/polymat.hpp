#pragma once

// Smith and Smith-McMillan forms, normal rank and related rank tests for
// polynomial and rational transfer matrices.

#include <vector>

#include "ndsid/linalg.hpp"
#include "ndsid/matrix.hpp"

namespace ndsid {

/// input == U * diag(d, padded with zeros) * V, U and V unimodular.
struct SmithForm {
  PolyMatrix U;
  std::vector<Poly> d;  // monic, d[j] | d[j+1]
  PolyMatrix V;
  std::size_t rank = 0;

  PolyMatrix diag(std::size_t rows, std::size_t cols) const;
};

/// input == U * diag(alpha_j / beta_j, padded with zeros) * V.
struct SmithMcMillan {
  PolyMatrix U;
  std::vector<Poly> alphas;
  std::vector<Poly> betas;
  PolyMatrix V;
  std::size_t rank = 0;

  RatMatrix diag(std::size_t rows, std::size_t cols) const;
};

SmithForm smith_form(const PolyMatrix& m);
SmithMcMillan smith_mcmillan(const RatMatrix& g);

/// Rank over the field of rational functions.
std::size_t normal_rank(const PolyMatrix& m);
std::size_t normal_rank(const RatMatrix& g);

inline bool is_fncr(const RatMatrix& g) { return normal_rank(g) == g.cols(); }
inline bool is_fnrr(const RatMatrix& g) { return normal_rank(g) == g.rows(); }
inline bool is_fncr(const PolyMatrix& g) { return normal_rank(g) == g.cols(); }
inline bool is_fnrr(const PolyMatrix& g) { return normal_rank(g) == g.rows(); }

/// Columns span the right null space of a constant matrix; cols x 0 when the
/// matrix has full column rank.
QMatrix const_nullspace(const QMatrix& a);
/// Same for a RatMatrix with constant entries; throws PreconditionViolated
/// if some entry depends on lambda.
QMatrix const_nullspace(const RatMatrix& a);

/// Throws SingularMatrix when det(g) is identically zero.
RatMatrix rat_inverse(const RatMatrix& g);
RatFunc rat_det(const RatMatrix& g);
Poly poly_det(const PolyMatrix& m);

/// Row-wise common denominators: g == diag(dens)^-1 * num.
struct RowScaled {
  PolyMatrix num;
  std::vector<Poly> dens;
};
RowScaled clear_row_denominators(const RatMatrix& g);
/// Monic lcm of every entry denominator.
Poly common_denominator(const RatMatrix& g);

/// Largest entry degree, nullopt for the zero matrix.
std::optional<int> degree(const PolyMatrix& m);
/// m(lambda) == sum_k coeffs[k] lambda^k; empty for the zero matrix.
std::vector<QMatrix> coefficients(const PolyMatrix& m);
PolyMatrix from_coefficients(const std::vector<QMatrix>& c, std::size_t rows, std::size_t cols);

/// Entrywise lambda -> -lambda.
PolyMatrix reflect(const PolyMatrix& m);
RatMatrix reflect(const RatMatrix& m);

/// (lambda I - A)^{-1} as adj / chi with chi = det(lambda I - A) monic.
struct Resolvent {
  PolyMatrix adj;
  Poly chi;
};
Resolvent resolvent(const QMatrix& a);

/// D + C (lambda I - A)^{-1} B, exactly.
RatMatrix state_space_tfm(const QMatrix& a, const QMatrix& b, const QMatrix& c, const QMatrix& d);

}  // namespace ndsid
