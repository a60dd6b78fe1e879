#pragma once

#include "missreg/core.hpp"
#include "missreg/optimizer.hpp"
#include "missreg/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace missreg {

// Canned convergence experiments on synthetic data. The names are config
// tokens of the external interface:
//   fig1_left  small-n multi-pass run showing one-pass saturation
//   fig1_right large-n single-pass run comparing the three algorithms
//   fig2       heterogeneous masks, debiasing with true p vs their mean
//   figS1      step size from the oracle Lipschitz constant vs the
//              incomplete-data estimate
//   figS3      degree-2 polynomial features with elementwise debiasing
//   custom     user-picked algorithm grid
enum class Scenario { Fig1Left, Fig1Right, Fig2, FigS1, FigS3, Custom };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct BenchConfig {
  Scenario scenario = Scenario::Custom;
  Index d = 10;       // raw feature count
  long n = 10000;
  Vector p;           // per-feature observation probability
  double noise_std = 1.0;
  std::uint64_t seed = 0;
  int replications = 1;
  long trace_every = 0;  // 0 = geometric spacing
  long passes = 1;
  std::vector<std::string> algorithms;  // custom scenario only

  void validate() const;
};

// Scenario defaults with every field resolved (fig2 draws its heterogeneous
// p here so all replications share it).
BenchConfig default_config(Scenario s, std::uint64_t seed);

// Parse a JSON config; absent fields fall back to the scenario defaults.
BenchConfig parse_bench_config(const std::string& json_text);

struct ArmResult {
  std::string label;
  RunResult run;
  double alpha = 0.0;  // 0 for decaying-step arms
};

struct ReplicationResult {
  std::vector<ArmResult> arms;
  std::vector<std::string> header;  // config echo for the trace file

  TraceDoc to_trace() const;
};

// One seeded replication of the scenario; rep indexes the derived RNG stream.
ReplicationResult run_replication(const BenchConfig& cfg, int rep);

struct BenchOutput {
  std::vector<std::string> trace_paths;
  std::string summary_path;
};

// Runs all replications (in parallel up to MISSREGRESS_THREADS), writes one
// trace CSV per replication plus a quantile summary in NDJSON.
BenchOutput run_bench(const BenchConfig& cfg, const std::string& out_dir);

// thread cap: MISSREGRESS_THREADS if set, else hardware concurrency
unsigned bench_thread_cap();

}  // namespace missreg
