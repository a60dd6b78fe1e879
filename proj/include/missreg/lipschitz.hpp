#pragma once

#include "missreg/core.hpp"

namespace missreg {

enum class LipschitzMethod { Oracle, FromNA };

struct LipschitzEstimate {
  double value = 0.0;
  LipschitzMethod method = LipschitzMethod::Oracle;

  double suggested_alpha() const { return 0.5 / value; }
};

// L = max_k ||X_k||^2 / p_min^2, computed from complete covariate rows.
LipschitzEstimate lipschitz_oracle(const Matrix& complete_rows,
                                   const MissingnessModel& miss);

// L = max_k (||x_k||^2 * d / #observed_k) / p_hat_min^2 from incomplete rows;
// p_hat is recomputed from the same rows. Rows with no observed entry are
// skipped and reported through `warnings`.
LipschitzEstimate lipschitz_from_na(std::span<const MaskedVector> rows,
                                    std::vector<std::string>* warnings = nullptr);

// Streaming variants: feed rows as they arrive, read off the estimate after a
// warm-up prefix (default min(n, 1000) rows).
inline constexpr long kLipschitzWarmupDefault = 1000;

struct IncrementalOracle {
  void observe(const Vector& row) {
    max_sq_norm_ = std::max(max_sq_norm_, row.squaredNorm());
    ++count_;
  }
  long count() const { return count_; }
  LipschitzEstimate estimate(const MissingnessModel& miss) const;

 private:
  double max_sq_norm_ = 0.0;
  long count_ = 0;
};

struct IncrementalFromNA {
  void observe(const MaskedVector& row);
  long count() const { return count_; }
  LipschitzEstimate estimate() const;

 private:
  Vector observed_counts_;
  double max_adjusted_ = 0.0;
  long count_ = 0;
  long skipped_ = 0;
};

// Step constant for the polynomial direction. The per-sample difference map
// is (x x^T) / U elementwise, so ||g(u) - g(v)|| <= (||x||^2 / min U) ||u - v||
// and L = max_k ||x_k||^2 / min(U) over complete expanded rows.
LipschitzEstimate lipschitz_poly_oracle(const Matrix& expanded_rows, const Matrix& U);

// Same from zero-imputed expanded rows, with each squared norm renormalized
// by d_exp / #observed like the raw-feature estimator. Rows with no observed
// entry are skipped and reported through `warnings`.
LipschitzEstimate lipschitz_poly_from_na(std::span<const MaskedVector> expanded_rows,
                                         const Matrix& U,
                                         std::vector<std::string>* warnings = nullptr);

}  // namespace missreg
