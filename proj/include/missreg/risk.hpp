#pragma once

#include "missreg/core.hpp"

#include <functional>

namespace missreg {

// Maps a parameter vector to an excess-risk value; supplied by the caller so
// the optimizer never touches the complete (unmasked) data it must not see.
using RiskCallback = std::function<double(const Vector&)>;

// R_n(beta) = (1/n) sum_i (<x_i, beta> - y_i)^2 / 2
double empirical_risk(const Matrix& X, const Vector& y, const Vector& beta);

// Exact minimizer of R_n(beta) + lambda ||beta||^2 via the regularized normal
// equations (X^T X + 2 lambda n I) beta = X^T y. At lambda = 0 the design
// must have full column rank; otherwise SingularError suggests lambda > 0.
Vector ols_reference(const Matrix& X, const Vector& y, double lambda = 0.0);

// Reference minimizer plus its risk, for excess-risk traces. The reference is
// the exact ERM/ridge solution on the complete pre-mask data, not the
// generating parameter; this keeps traces nonnegative.
struct RiskProbe {
  Matrix X;
  Vector y;
  Vector reference_beta;
  double reference_risk = 0.0;
  double lambda = 0.0;

  static RiskProbe build(Matrix X, Vector y, double lambda = 0.0);
  double excess(const Vector& beta) const;
};

double excess_risk(const RiskProbe& probe, const Vector& beta);

// callback evaluating empirical excess risk; the probe must outlive it
RiskCallback make_probe_callback(const RiskProbe& probe);

// ||y_hat - y||^2 / ||y||^2
double relative_prediction_error(const Vector& y_hat, const Vector& y);

}  // namespace missreg
