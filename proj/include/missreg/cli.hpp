#pragma once

#include "missreg/bench.hpp"
#include "missreg/csv.hpp"
#include "missreg/model_io.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>

namespace missreg {

// fit: CSV -> (optional expansion) -> step-size choice -> one-pass averaged
// SGD -> model file. Exposed as a function so tests drive the exact code the
// binary runs.
struct FitOptions {
  std::string data_path;
  std::string target;
  std::optional<Vector> probs;  // known observation probabilities, else estimated
  double lambda = 0.0;
  bool poly2 = false;
  std::optional<double> alpha;  // manual step; unset = derive from a Lipschitz estimate
  std::uint64_t seed = 0;
  bool scale = false;
  std::string out_path;  // empty = do not write
  std::set<std::string> na_tokens = default_na_tokens();
};

struct FitReport {
  ModelFile model;
  std::vector<std::string> warnings;
  long n_rows = 0;
};

FitReport cmd_fit(const FitOptions& opts);

// predict: model + complete test rows -> predictions (original scale); when
// the target column is present, also the relative squared prediction error
// (computed on the standardized scale when the model was fit with --scale,
// so predicting the mean scores 1).
struct PredictOptions {
  std::string model_path;
  std::string data_path;
  std::optional<std::string> target;  // overrides the name stored in the model
  std::string out_path;               // empty = do not write
  std::set<std::string> na_tokens = default_na_tokens();
};

struct PredictReport {
  Vector predictions;  // original scale
  std::optional<double> relative_error;
  long n_rows = 0;
};

PredictReport cmd_predict(const PredictOptions& opts);

struct BenchOptions {
  std::string config_path;
  std::string out_dir;
};

BenchOutput cmd_bench(const BenchOptions& opts);

}  // namespace missreg
