#pragma once

#include "missreg/core.hpp"

namespace missreg {

// Debiased stochastic gradient for zero-imputed covariates:
//
//   g_j = (x_j / p_j) * (sum_l x_l beta_l / p_l - y)
//         - ((1 - p_j) / p_j^2) * x_j^2 * beta_j
//
// i.e. P^{-1} x (x^T P^{-1} beta - y) - (I - P) P^{-2} diag(x x^T) beta,
// whose conditional expectation over the Bernoulli mask is the exact
// complete-data gradient x (x^T beta - y).
//
// Computed in one coordinatewise pass; no d x d matrix is formed.
Vector debiased_gradient(const MaskedVector& x, double y, const Vector& beta,
                         const MissingnessModel& miss);

// Same plus the ridge term 2*lambda*beta. The debias correction is not
// modified: the penalty does not involve the incomplete covariates.
Vector debiased_gradient_ridge(const MaskedVector& x, double y, const Vector& beta,
                               const MissingnessModel& miss, double lambda);

// Elementwise-debiased direction for an expanded polynomial feature row:
//
//   g_j = sum_l (x_j x_l / U_jl) beta_l - (x_j / U_jj) y
//
// where U_ab is the probability that expanded features a and b are observed
// simultaneously. U must be square with entries in (0,1].
Vector debiased_direction_poly(const MaskedVector& x_exp, double y,
                               const Vector& beta, const Matrix& U);

// Which debiased direction a run uses. Poly carries the materialized
// probability matrix U; lambda >= 0 adds the ridge term to any variant.
struct GradientKind {
  enum class Type { PlainDebiased, RidgeDebiased, PolyDebiased };
  Type type = Type::PlainDebiased;
  double lambda = 0.0;
  Matrix U;  // PolyDebiased only

  static GradientKind plain() { return {}; }
  static GradientKind ridge(double lambda);
  static GradientKind poly(Matrix U, double lambda = 0.0);
};

Vector eval_gradient(const GradientKind& kind, const MaskedVector& x, double y,
                     const Vector& beta, const MissingnessModel& miss);

}  // namespace missreg
