#include "missreg/lipschitz.hpp"

namespace missreg {

LipschitzEstimate lipschitz_oracle(const Matrix& complete_rows,
                                   const MissingnessModel& miss) {
  if (complete_rows.rows() == 0) {
    throw InvalidDataError("lipschitz_oracle: empty matrix");
  }
  if (complete_rows.cols() != miss.dim()) {
    throw InvalidDataError("lipschitz_oracle: column count != p length");
  }
  const double max_sq = complete_rows.rowwise().squaredNorm().maxCoeff();
  const double pm = miss.p_min();
  return LipschitzEstimate{max_sq / (pm * pm), LipschitzMethod::Oracle};
}

LipschitzEstimate lipschitz_from_na(std::span<const MaskedVector> rows,
                                    std::vector<std::string>* warnings) {
  IncrementalFromNA inc;
  long idx = 0;
  for (const MaskedVector& row : rows) {
    if (row.observed_count() == 0 && warnings) {
      warnings->push_back("row " + std::to_string(idx) +
                          " has no observed entries; skipped in Lipschitz estimate");
    }
    inc.observe(row);
    ++idx;
  }
  return inc.estimate();
}

LipschitzEstimate IncrementalOracle::estimate(const MissingnessModel& miss) const {
  if (count_ == 0) {
    throw InvalidDataError("IncrementalOracle: no rows observed");
  }
  const double pm = miss.p_min();
  return LipschitzEstimate{max_sq_norm_ / (pm * pm), LipschitzMethod::Oracle};
}

void IncrementalFromNA::observe(const MaskedVector& row) {
  if (observed_counts_.size() == 0) {
    observed_counts_ = Vector::Zero(row.size());
  } else if (observed_counts_.size() != row.size()) {
    throw InvalidDataError("IncrementalFromNA: inconsistent row length");
  }
  const Index d = row.size();
  Index n_obs = 0;
  for (Index j = 0; j < d; ++j) {
    if (row.mask[j]) {
      observed_counts_[j] += 1.0;
      ++n_obs;
    }
  }
  ++count_;
  if (n_obs == 0) {
    ++skipped_;
    return;
  }
  // grouped so a fully observed row is scaled by exactly 1.0
  const double adjusted = row.values.squaredNorm() * (double(d) / double(n_obs));
  max_adjusted_ = std::max(max_adjusted_, adjusted);
}

LipschitzEstimate IncrementalFromNA::estimate() const {
  if (count_ == 0) {
    throw InvalidDataError("IncrementalFromNA: no rows observed");
  }
  if (count_ == skipped_) {
    throw InvalidDataError("IncrementalFromNA: every row was fully missing");
  }
  const double p_hat_min = observed_counts_.minCoeff() / double(count_);
  if (!(p_hat_min > 0.0)) {
    throw InvalidDataError("IncrementalFromNA: a column has no observed entries");
  }
  return LipschitzEstimate{max_adjusted_ / (p_hat_min * p_hat_min),
                           LipschitzMethod::FromNA};
}

namespace {

double check_u_min(const Matrix& U) {
  if (U.rows() == 0 || U.rows() != U.cols()) {
    throw InvalidDataError("lipschitz poly: U must be square and nonempty");
  }
  const double u_min = U.minCoeff();
  if (!(u_min > 0.0) || U.maxCoeff() > 1.0) {
    throw InvalidDataError("lipschitz poly: U entries must lie in (0,1]");
  }
  return u_min;
}

}  // namespace

LipschitzEstimate lipschitz_poly_oracle(const Matrix& expanded_rows, const Matrix& U) {
  const double u_min = check_u_min(U);
  if (expanded_rows.rows() == 0) {
    throw InvalidDataError("lipschitz_poly_oracle: empty matrix");
  }
  if (expanded_rows.cols() != U.rows()) {
    throw InvalidDataError("lipschitz_poly_oracle: column count != U size");
  }
  const double max_sq = expanded_rows.rowwise().squaredNorm().maxCoeff();
  return LipschitzEstimate{max_sq / u_min, LipschitzMethod::Oracle};
}

LipschitzEstimate lipschitz_poly_from_na(std::span<const MaskedVector> expanded_rows,
                                         const Matrix& U,
                                         std::vector<std::string>* warnings) {
  const double u_min = check_u_min(U);
  if (expanded_rows.empty()) {
    throw InvalidDataError("lipschitz_poly_from_na: no rows");
  }
  const Index d = U.rows();
  double max_adjusted = 0.0;
  long skipped = 0;
  long idx = 0;
  for (const MaskedVector& row : expanded_rows) {
    if (row.size() != d) {
      throw InvalidDataError("lipschitz_poly_from_na: row length != U size");
    }
    const Index n_obs = row.observed_count();
    if (n_obs == 0) {
      ++skipped;
      if (warnings) {
        warnings->push_back("row " + std::to_string(idx) +
                            " has no observed entries; skipped in Lipschitz estimate");
      }
      ++idx;
      continue;
    }
    const double adjusted = row.values.squaredNorm() * (double(d) / double(n_obs));
    max_adjusted = std::max(max_adjusted, adjusted);
    ++idx;
  }
  if (skipped == idx) {
    throw InvalidDataError("lipschitz_poly_from_na: every row was fully missing");
  }
  return LipschitzEstimate{max_adjusted / u_min, LipschitzMethod::FromNA};
}

}  // namespace missreg
