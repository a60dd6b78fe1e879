#include "missreg/gradient.hpp"

namespace missreg {

namespace {

void check_dims(const MaskedVector& x, const Vector& beta, const MissingnessModel& miss) {
  if (x.size() != beta.size() || x.size() != miss.dim()) {
    throw InvalidDataError("debiased_gradient: dimension mismatch (x " +
                           std::to_string(x.size()) + ", beta " +
                           std::to_string(beta.size()) + ", p " +
                           std::to_string(miss.dim()) + ")");
  }
}

// g_j = sum_l (x_j x_l / U_jl) beta_l - (x_j / U_jj) y, accumulated by
// columns of U. Entries with x_l == 0 contribute nothing and are skipped.
Vector poly_direction_unchecked(const MaskedVector& x, double y,
                                const Vector& beta, const Matrix& U) {
  const Index d = x.size();
  Vector g = Vector::Zero(d);
  for (Index l = 0; l < d; ++l) {
    const double xl = x.values[l];
    if (xl == 0.0) continue;
    g.array() += (xl * beta[l]) * (x.values.array() / U.col(l).array());
  }
  g.array() -= y * (x.values.array() / U.diagonal().array());
  if (!g.allFinite()) {
    throw NumericalError("debiased_direction_poly: non-finite result");
  }
  return g;
}

}  // namespace

Vector debiased_gradient(const MaskedVector& x, double y, const Vector& beta,
                         const MissingnessModel& miss) {
  check_dims(x, beta, miss);
  const Vector xp = x.values.cwiseQuotient(miss.p);
  const double resid = xp.dot(beta) - y;
  Vector g = xp * resid;
  g.array() -= ((1.0 - miss.p.array()) / miss.p.array().square()) *
               x.values.array().square() * beta.array();
  if (!g.allFinite()) {
    throw NumericalError("debiased_gradient: non-finite result");
  }
  return g;
}

Vector debiased_gradient_ridge(const MaskedVector& x, double y, const Vector& beta,
                               const MissingnessModel& miss, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidDataError("debiased_gradient_ridge: lambda must be finite and >= 0");
  }
  Vector g = debiased_gradient(x, y, beta, miss);
  if (lambda != 0.0) {
    g += (2.0 * lambda) * beta;
  }
  return g;
}

Vector debiased_direction_poly(const MaskedVector& x_exp, double y,
                               const Vector& beta, const Matrix& U) {
  if (U.rows() != U.cols() || U.rows() != x_exp.size() || beta.size() != x_exp.size()) {
    throw InvalidDataError("debiased_direction_poly: dimension mismatch");
  }
  if (!(U.minCoeff() > 0.0) || U.maxCoeff() > 1.0) {
    throw InvalidDataError("debiased_direction_poly: U entries must lie in (0,1]");
  }
  return poly_direction_unchecked(x_exp, y, beta, U);
}

GradientKind GradientKind::ridge(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidDataError("GradientKind::ridge: lambda must be finite and >= 0");
  }
  GradientKind k;
  k.type = Type::RidgeDebiased;
  k.lambda = lambda;
  return k;
}

GradientKind GradientKind::poly(Matrix U, double lambda) {
  if (U.rows() != U.cols()) {
    throw InvalidDataError("GradientKind::poly: U must be square");
  }
  if (U.size() > 0 && (!(U.minCoeff() > 0.0) || U.maxCoeff() > 1.0)) {
    throw InvalidDataError("GradientKind::poly: U entries must lie in (0,1]");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidDataError("GradientKind::poly: lambda must be finite and >= 0");
  }
  GradientKind k;
  k.type = Type::PolyDebiased;
  k.lambda = lambda;
  k.U = std::move(U);
  return k;
}

Vector eval_gradient(const GradientKind& kind, const MaskedVector& x, double y,
                     const Vector& beta, const MissingnessModel& miss) {
  switch (kind.type) {
    case GradientKind::Type::PlainDebiased:
      return debiased_gradient(x, y, beta, miss);
    case GradientKind::Type::RidgeDebiased:
      return debiased_gradient_ridge(x, y, beta, miss, kind.lambda);
    case GradientKind::Type::PolyDebiased: {
      if (x.size() != kind.U.rows() || beta.size() != x.size()) {
        throw InvalidDataError("eval_gradient: poly dimension mismatch");
      }
      Vector g = poly_direction_unchecked(x, y, beta, kind.U);
      if (kind.lambda != 0.0) {
        g += (2.0 * kind.lambda) * beta;
      }
      return g;
    }
  }
  throw InvalidDataError("eval_gradient: unknown gradient kind");
}

}  // namespace missreg
