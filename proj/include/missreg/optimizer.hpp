#pragma once

#include "missreg/core.hpp"
#include "missreg/gradient.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace missreg {

// Excess-risk probe. The optimizer never sees complete (unmasked) data; the
// caller bakes whatever reference it has into this callback.
using ExcessCallback = std::function<double(const Vector&)>;

// Which recursion drives the run. AvSGD and SGDConst share the constant-step
// recursion and differ only in which iterate is reported as the estimate
// (running average vs last); SGDDecay uses step 1/sqrt(k+1) at iteration k.
struct AlgorithmSpec {
  enum class Method { AvSGD, SGDDecay, SGDConst };

  Method method = Method::AvSGD;
  double alpha = 0.0;  // constant step; unused by SGDDecay
  GradientKind gradient = GradientKind::plain();

  static AlgorithmSpec avsgd(double alpha, GradientKind kind = GradientKind::plain());
  static AlgorithmSpec sgd_decay(GradientKind kind = GradientKind::plain());
  static AlgorithmSpec sgd_const(double alpha, GradientKind kind = GradientKind::plain());

  bool averaged() const { return method == Method::AvSGD; }
  StepPolicy step_policy() const;
  void validate() const;
};

const char* method_name(AlgorithmSpec::Method m);

struct RunConfig {
  enum class Sampling { Stream, WithoutReplacement, WithReplacement };

  long passes = 1;
  Sampling sampling = Sampling::Stream;
  std::uint64_t seed = 0;
  // 0 = geometric spacing k in {1,2,4,...} plus the final k
  long trace_every = 0;
  // when set, constant steps larger than 1/(2L) add a warning (not an error)
  std::optional<double> lipschitz_hint;

  void validate() const;
};

struct TraceRecord {
  long k = 0;
  double excess_at_avg = 0.0;
  double excess_at_last = 0.0;
  double step = 0.0;
  std::int64_t wall_ns = 0;
};

struct RunResult {
  OptimizerState state;
  std::vector<TraceRecord> trace;  // empty unless a probe was supplied
  std::vector<std::string> warnings;
  bool averaged = true;

  // the iterate the algorithm reports: beta_avg for AvSGD, beta otherwise
  const Vector& estimate() const { return averaged ? state.beta_avg : state.beta; }
};

// Algorithm driver. beta_0 = 0; per update k >= 1:
//   beta_k   = beta_{k-1} - alpha_k * g(beta_{k-1})
//   avg_k    = (k/(k+1)) avg_{k-1} + (1/(k+1)) beta_k   (average includes beta_0)
// Stream sampling walks data once in arrival order; the replacement modes
// exist only for multi-pass saturation experiments and carry no one-pass
// guarantee. Non-finite iterates abort with DivergenceError at the offending k.
RunResult run(std::span<const Observation> data, const MissingnessModel& miss,
              const AlgorithmSpec& spec, const RunConfig& cfg,
              const ExcessCallback& probe = {});

// Naive baseline: impute each missing entry with its column mean (computed
// from observed entries only), then run plain averaged SGD with
// alpha = 1/(2 max_k ||row_k||^2) on the imputed rows.
RunResult run_mean_imputed(std::span<const Observation> data, const RunConfig& cfg,
                           const ExcessCallback& probe = {});

// Naive baseline: keep only fully observed rows, then run plain averaged SGD
// with alpha = 1/(2 max_k ||row_k||^2) on the survivors.
RunResult run_complete_case(std::span<const Observation> data, const RunConfig& cfg,
                            const ExcessCallback& probe = {});

}  // namespace missreg
