#pragma once

#include "missreg/core.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace missreg {

// Per-column standardization computed from observed entries only. Masked
// entries stay zero-imputed; after centering, zero sits at the column mean,
// which is what the debiasing assumes for the missing slots.
struct ScalingParams {
  bool enabled = false;
  Vector mean;    // per-feature observed mean
  Vector stddev;  // per-feature observed std (1 where the column is constant)
  double y_mean = 0.0;
  double y_std = 1.0;

  static ScalingParams identity(Index d);

  // scale observed coordinates in place, leaving masked ones at zero
  void apply(MaskedVector& x) const;
  double scale_target(double y) const;
  double unscale_prediction(double y_scaled) const;
  void validate(Index d) const;
};

// Parsed delimited file before any masking decisions: header plus cells,
// where an NA token becomes an empty optional.
struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  Index column_index(const std::string& name) const;  // -1 when absent
};

std::set<std::string> default_na_tokens();

RawTable read_table(const std::string& path, const std::set<std::string>& na_tokens);

struct CsvData {
  std::vector<Observation> obs;
  MissingnessModel miss;  // estimated from the masks (Provenance::Estimated)
  ScalingParams scaling;
  std::vector<std::string> feature_names;
  std::string target_name;
  long rows_dropped_missing_target = 0;
  std::vector<std::string> warnings;
};

// Full training-side ingestion: parse, split off the target column, drop rows
// with a missing target (counted), zero-impute masked entries, estimate p,
// and optionally standardize from observed entries.
CsvData ingest_csv(const std::string& path, const std::string& target_column,
                   const std::set<std::string>& na_tokens = default_na_tokens(),
                   bool scale = false);

// write helper shared by the synthetic harness and tests
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::optional<double>>>& rows,
               const std::string& na_token = "NA");

}  // namespace missreg
