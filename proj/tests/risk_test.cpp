#include <doctest.h>

#include "missreg/risk.hpp"

#include <random>

using namespace missreg;

namespace {

Matrix random_design(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = gauss(rng);
  return X;
}

}  // namespace

TEST_CASE("empirical risk worked example") {
  Matrix X(2, 2);
  X << 1.0, 0.0, 0.0, 1.0;
  Vector y(2);
  y << 2.0, 2.0;
  // residuals are (-2,-2) at beta = 0, so risk = 8 / (2*2)
  CHECK(empirical_risk(X, y, Vector::Zero(2)) == 2.0);

  CHECK_THROWS_AS(empirical_risk(Matrix(0, 2), Vector(0), Vector::Zero(2)),
                  InvalidDataError);
  CHECK_THROWS_AS(empirical_risk(X, y, Vector::Zero(3)), InvalidDataError);
  Vector y3(3);
  y3 << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(empirical_risk(X, y3, Vector::Zero(2)), InvalidDataError);
}

TEST_CASE("least-squares reference recovers a noiseless model") {
  const Matrix X = random_design(60, 4, 101);
  Vector beta_star(4);
  beta_star << 1.0, -2.0, 0.5, 3.0;
  const Vector y = X * beta_star;
  const Vector beta = ols_reference(X, y);
  CHECK((beta - beta_star).norm() < 1e-10);
}

TEST_CASE("rank-deficient designs raise SingularError unless regularized") {
  Matrix X = random_design(40, 3, 7);
  X.col(2) = X.col(0);  // exact collinearity
  const Vector y = X.col(0) + X.col(1);
  CHECK_THROWS_AS(ols_reference(X, y), SingularError);
  CHECK_NOTHROW(ols_reference(X, y, 0.1));
}

TEST_CASE("ridge reference satisfies the regularized normal equations") {
  const Matrix X = random_design(50, 3, 55);
  const Vector y = X.col(0) - 2.0 * X.col(1) + Vector::Ones(50) * 0.1;
  const double lambda = 0.3;
  const Vector beta = ols_reference(X, y, lambda);
  const Vector grad =
      X.transpose() * (X * beta - y) / 50.0 + 2.0 * lambda * beta;
  CHECK(grad.norm() < 1e-10);

  // strong regularization shrinks the solution toward zero
  const Vector tiny = ols_reference(X, y, 1e8);
  CHECK(tiny.norm() < 1e-6);

  CHECK_THROWS_AS(ols_reference(X, y, -1.0), InvalidDataError);
}

TEST_CASE("risk probe measures excess over the exact minimizer") {
  const Matrix X = random_design(80, 3, 202);
  Vector beta_star(3);
  beta_star << 0.5, 1.0, -1.0;
  std::mt19937_64 rng(303);
  std::normal_distribution<double> gauss(0.0, 0.2);
  Vector y = X * beta_star;
  for (Index i = 0; i < y.size(); ++i) y[i] += gauss(rng);

  const RiskProbe probe = RiskProbe::build(X, y);
  CHECK(probe.excess(probe.reference_beta) == 0.0);

  // for plain least squares the excess is the exact quadratic form
  // (beta - ref)^T (X^T X / n) (beta - ref) / 2
  const Matrix H = X.transpose() * X / double(X.rows());
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    Vector delta(3);
    for (Index j = 0; j < 3; ++j) delta[j] = unit(rng);
    const Vector beta = probe.reference_beta + delta;
    const double direct = probe.excess(beta);
    const double quad = 0.5 * delta.dot(H * delta);
    CHECK(direct == doctest::Approx(quad).epsilon(1e-10));
    CHECK(direct > 0.0);
  }

  CHECK(excess_risk(probe, probe.reference_beta) == 0.0);
  const RiskCallback cb = make_probe_callback(probe);
  const Vector shifted = probe.reference_beta + Vector::Ones(3);
  CHECK(cb(shifted) == probe.excess(shifted));
}

TEST_CASE("ridge probe includes the penalty in the excess") {
  const Matrix X = random_design(60, 3, 404);
  const Vector y = X.col(0) + 0.5 * X.col(2);
  const double lambda = 0.2;
  const RiskProbe probe = RiskProbe::build(X, y, lambda);
  CHECK(probe.excess(probe.reference_beta) == 0.0);

  // the regularized objective is minimized at the reference, so every
  // perturbation must have nonnegative excess
  std::mt19937_64 rng(505);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    Vector delta(3);
    for (Index j = 0; j < 3; ++j) delta[j] = gauss(rng);
    CHECK(probe.excess(probe.reference_beta + delta) > 0.0);
  }
}

TEST_CASE("relative prediction error") {
  Vector y(2);
  y << 3.0, 4.0;
  CHECK(relative_prediction_error(y, y) == 0.0);
  CHECK(relative_prediction_error(Vector::Zero(2), y) == 1.0);

  Vector longer(3);
  longer << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(relative_prediction_error(longer, y), InvalidDataError);
  CHECK_THROWS_AS(relative_prediction_error(Vector::Zero(2), Vector::Zero(2)),
                  InvalidDataError);
}
