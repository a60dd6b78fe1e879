#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace missreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Bad shapes, bad values, degenerate inputs.
struct InvalidDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rank-deficient normal equations; retrying with lambda > 0 usually helps.
struct SingularError : InvalidDataError {
  using InvalidDataError::InvalidDataError;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite iterate; carries the update index that produced it.
struct DivergenceError : NumericalError {
  long iteration;
  DivergenceError(const std::string& what, long k)
      : NumericalError(what), iteration(k) {}
};

// A covariate row stored as zero-imputed values plus an observation mask.
// values[j] is 0 wherever mask[j] is false.
struct MaskedVector {
  Vector values;
  BoolArray mask;

  Index size() const { return values.size(); }
  Index observed_count() const { return mask.count(); }
  bool fully_observed() const { return mask.all(); }

  // Validates the zero-at-unobserved convention and matching lengths.
  static MaskedVector from_parts(Vector values, BoolArray mask);
  static MaskedVector complete(Vector values);
};

// One labelled row: incomplete covariates plus an always-observed response.
struct Observation {
  MaskedVector x;
  double y;

  Observation(MaskedVector x_, double y_);
};

enum class Provenance { Supplied, Estimated };

// Per-feature observation probabilities p_1..p_d, all in (0,1].
struct MissingnessModel {
  Vector p;
  Provenance provenance = Provenance::Supplied;

  Index dim() const { return p.size(); }
  double p_min() const { return p.minCoeff(); }

  static MissingnessModel supplied(Vector p);
  static MissingnessModel homogeneous(Index d, double p);
};

struct StepPolicy {
  enum class Kind { Constant, InverseSqrt };
  Kind kind = Kind::Constant;
  double alpha = 0.0;  // Constant only

  static StepPolicy constant(double alpha);
  static StepPolicy inverse_sqrt() { return StepPolicy{Kind::InverseSqrt, 0.0}; }

  // Step applied when k updates have already been made: the update producing
  // beta_{k+1} uses 1/sqrt(k+1) under InverseSqrt.
  double step_at(long k) const {
    return kind == Kind::Constant ? alpha : 1.0 / std::sqrt(double(k + 1));
  }
};

// Mutable SGD state. beta_avg is the running mean of beta_0..beta_k, with
// beta_0 included.
struct OptimizerState {
  Vector beta;
  Vector beta_avg;
  long k = 0;
  StepPolicy step;
};

struct RegularizerConfig {
  double lambda = 0.0;  // 0 means plain least squares

  static RegularizerConfig ridge(double lambda);
};

// Zero-imputes a row given as (value | NA); NA encoded as nullopt.
MaskedVector masked_from_na_row(std::span<const std::optional<double>> raw, Index d);

// p_hat_j = max(observed fraction, clamp_floor), provenance = Estimated.
// Columns with zero observations are clamped and reported through `warnings`.
MissingnessModel estimate_missingness(std::span<const MaskedVector> rows,
                                      double clamp_floor,
                                      std::vector<std::string>* warnings = nullptr);

// Same with the default floor 1/n.
MissingnessModel estimate_missingness(std::span<const MaskedVector> rows,
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace missreg
