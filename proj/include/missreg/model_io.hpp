#pragma once

#include "missreg/core.hpp"
#include "missreg/csv.hpp"
#include "missreg/lipschitz.hpp"
#include "missreg/polyfeat.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace missreg {

// Everything predict needs, in one JSON document. Serialization is canonical
// (sorted keys, shortest round-trip floats), so serialize -> parse ->
// serialize is byte-identical.
struct ModelFile {
  int schema_version = 1;
  Index d_raw = 0;
  std::optional<FeatureMap> poly;  // set when the fit expanded features
  MissingnessModel miss;           // raw-feature probabilities; poly U is rebuilt from these
  Vector beta_avg;                 // averaged iterate, the reported estimate
  Vector beta;                     // last iterate
  std::string method = "avsgd";
  double alpha = 0.0;
  double lambda = 0.0;
  std::optional<LipschitzEstimate> lipschitz;  // absent when alpha was supplied
  std::uint64_t seed = 0;
  ScalingParams scaling;  // raw-feature space
  std::vector<std::string> feature_names;
  std::string target_name;

  Index d_model() const { return poly ? poly->d_exp() : d_raw; }
  void validate() const;
};

std::string model_to_json(const ModelFile& m);
ModelFile model_from_json(const std::string& text);

void save_model(const std::string& path, const ModelFile& m);
ModelFile load_model(const std::string& path);

}  // namespace missreg
