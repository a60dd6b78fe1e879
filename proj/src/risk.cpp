#include "missreg/risk.hpp"

#include <Eigen/QR>

namespace missreg {

double empirical_risk(const Matrix& X, const Vector& y, const Vector& beta) {
  if (X.rows() == 0) {
    throw InvalidDataError("empirical_risk: no rows");
  }
  if (X.rows() != y.size() || X.cols() != beta.size()) {
    throw InvalidDataError("empirical_risk: shape mismatch");
  }
  return (X * beta - y).squaredNorm() / (2.0 * double(X.rows()));
}

Vector ols_reference(const Matrix& X, const Vector& y, double lambda) {
  if (X.rows() == 0 || X.rows() != y.size()) {
    throw InvalidDataError("ols_reference: bad shapes");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidDataError("ols_reference: lambda must be finite and >= 0");
  }
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    if (qr.rank() < X.cols()) {
      throw SingularError("ols_reference: design is rank-deficient; use lambda > 0");
    }
    return qr.solve(y);
  }
  const double n = double(X.rows());
  Matrix normal = X.transpose() * X;
  normal.diagonal().array() += 2.0 * lambda * n;
  Eigen::LLT<Matrix> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw SingularError("ols_reference: regularized normal equations not SPD");
  }
  return llt.solve(X.transpose() * y);
}

RiskProbe RiskProbe::build(Matrix X, Vector y, double lambda) {
  RiskProbe probe;
  probe.reference_beta = ols_reference(X, y, lambda);
  probe.lambda = lambda;
  probe.X = std::move(X);
  probe.y = std::move(y);
  probe.reference_risk = empirical_risk(probe.X, probe.y, probe.reference_beta);
  // first-order optimality of the reference, scaled by the data magnitude
  Vector grad = probe.X.transpose() * (probe.X * probe.reference_beta - probe.y) /
                    double(probe.X.rows()) +
                2.0 * lambda * probe.reference_beta;
  const double scale = 1.0 + probe.y.norm();
  if (grad.norm() > 1e-8 * scale) {
    throw NumericalError("RiskProbe: reference minimizer fails optimality check");
  }
  return probe;
}

double RiskProbe::excess(const Vector& beta) const {
  double value = empirical_risk(X, y, beta) - reference_risk;
  if (lambda != 0.0) {
    value += lambda * (beta.squaredNorm() - reference_beta.squaredNorm());
  }
  return value;
}

double excess_risk(const RiskProbe& probe, const Vector& beta) {
  return probe.excess(beta);
}

RiskCallback make_probe_callback(const RiskProbe& probe) {
  return [&probe](const Vector& beta) { return probe.excess(beta); };
}

double relative_prediction_error(const Vector& y_hat, const Vector& y) {
  if (y_hat.size() != y.size()) {
    throw InvalidDataError("relative_prediction_error: length mismatch");
  }
  const double denom = y.squaredNorm();
  if (!(denom > 0.0)) {
    throw InvalidDataError("relative_prediction_error: zero-norm target");
  }
  return (y_hat - y).squaredNorm() / denom;
}

}  // namespace missreg
