#include "missreg/core.hpp"

namespace missreg {

MaskedVector MaskedVector::from_parts(Vector values, BoolArray mask) {
  if (values.size() != mask.size()) {
    throw InvalidDataError("MaskedVector: values and mask lengths differ (" +
                           std::to_string(values.size()) + " vs " +
                           std::to_string(mask.size()) + ")");
  }
  for (Index j = 0; j < values.size(); ++j) {
    if (!mask[j] && values[j] != 0.0) {
      throw InvalidDataError("MaskedVector: nonzero value at unobserved slot " +
                             std::to_string(j));
    }
  }
  return MaskedVector{std::move(values), std::move(mask)};
}

MaskedVector MaskedVector::complete(Vector values) {
  BoolArray mask = BoolArray::Constant(values.size(), true);
  return MaskedVector{std::move(values), std::move(mask)};
}

Observation::Observation(MaskedVector x_, double y_) : x(std::move(x_)), y(y_) {
  if (!x.values.allFinite()) {
    throw InvalidDataError("Observation: non-finite covariate value");
  }
  if (!std::isfinite(y)) {
    throw InvalidDataError("Observation: non-finite response");
  }
}

MissingnessModel MissingnessModel::supplied(Vector p) {
  for (Index j = 0; j < p.size(); ++j) {
    if (!(p[j] > 0.0 && p[j] <= 1.0)) {
      throw InvalidDataError("MissingnessModel: p[" + std::to_string(j) +
                             "] = " + std::to_string(p[j]) +
                             " outside (0,1]");
    }
  }
  return MissingnessModel{std::move(p), Provenance::Supplied};
}

MissingnessModel MissingnessModel::homogeneous(Index d, double p) {
  return supplied(Vector::Constant(d, p));
}

StepPolicy StepPolicy::constant(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidDataError("StepPolicy: constant step must be positive and finite");
  }
  return StepPolicy{Kind::Constant, alpha};
}

RegularizerConfig RegularizerConfig::ridge(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidDataError("RegularizerConfig: lambda must be finite and nonnegative");
  }
  return RegularizerConfig{lambda};
}

MaskedVector masked_from_na_row(std::span<const std::optional<double>> raw, Index d) {
  if (Index(raw.size()) != d) {
    throw InvalidDataError("masked_from_na_row: row length " +
                           std::to_string(raw.size()) + " != d = " +
                           std::to_string(d));
  }
  Vector values = Vector::Zero(d);
  BoolArray mask = BoolArray::Constant(d, false);
  for (Index j = 0; j < d; ++j) {
    if (raw[j].has_value()) {
      if (!std::isfinite(*raw[j])) {
        throw InvalidDataError("masked_from_na_row: non-finite value at column " +
                               std::to_string(j));
      }
      values[j] = *raw[j];
      mask[j] = true;
    }
  }
  return MaskedVector{std::move(values), std::move(mask)};
}

MissingnessModel estimate_missingness(std::span<const MaskedVector> rows,
                                      double clamp_floor,
                                      std::vector<std::string>* warnings) {
  if (rows.empty()) {
    throw InvalidDataError("estimate_missingness: no rows");
  }
  if (!(clamp_floor > 0.0)) {
    throw InvalidDataError("estimate_missingness: clamp_floor must be positive");
  }
  const Index d = rows[0].size();
  Vector counts = Vector::Zero(d);
  for (const MaskedVector& row : rows) {
    if (row.size() != d) {
      throw InvalidDataError("estimate_missingness: inconsistent row length");
    }
    for (Index j = 0; j < d; ++j) {
      if (row.mask[j]) counts[j] += 1.0;
    }
  }
  const double n = double(rows.size());
  Vector p(d);
  for (Index j = 0; j < d; ++j) {
    const double frac = counts[j] / n;
    p[j] = std::max(frac, clamp_floor);
    if (counts[j] == 0.0 && warnings) {
      warnings->push_back("column " + std::to_string(j) +
                          " has no observed entries; p_hat clamped to " +
                          std::to_string(clamp_floor));
    }
  }
  // floors above 1 would break the (0,1] invariant
  p = p.cwiseMin(1.0);
  return MissingnessModel{std::move(p), Provenance::Estimated};
}

MissingnessModel estimate_missingness(std::span<const MaskedVector> rows,
                                      std::vector<std::string>* warnings) {
  if (rows.empty()) {
    throw InvalidDataError("estimate_missingness: no rows");
  }
  return estimate_missingness(rows, 1.0 / double(rows.size()), warnings);
}

}  // namespace missreg
