#include "missreg/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace missreg {

AlgorithmSpec AlgorithmSpec::avsgd(double alpha, GradientKind kind) {
  AlgorithmSpec s;
  s.method = Method::AvSGD;
  s.alpha = alpha;
  s.gradient = std::move(kind);
  s.validate();
  return s;
}

AlgorithmSpec AlgorithmSpec::sgd_decay(GradientKind kind) {
  AlgorithmSpec s;
  s.method = Method::SGDDecay;
  s.alpha = 0.0;
  s.gradient = std::move(kind);
  return s;
}

AlgorithmSpec AlgorithmSpec::sgd_const(double alpha, GradientKind kind) {
  AlgorithmSpec s;
  s.method = Method::SGDConst;
  s.alpha = alpha;
  s.gradient = std::move(kind);
  s.validate();
  return s;
}

StepPolicy AlgorithmSpec::step_policy() const {
  if (method == Method::SGDDecay) return StepPolicy{StepPolicy::Kind::InverseSqrt, 1.0};
  return StepPolicy{StepPolicy::Kind::Constant, alpha};
}

void AlgorithmSpec::validate() const {
  if (method != Method::SGDDecay && (!(alpha > 0.0) || !std::isfinite(alpha)))
    throw std::invalid_argument("AlgorithmSpec: constant step alpha must be finite and positive");
}

const char* method_name(AlgorithmSpec::Method m) {
  switch (m) {
    case AlgorithmSpec::Method::AvSGD: return "avsgd";
    case AlgorithmSpec::Method::SGDDecay: return "sgd_decay";
    case AlgorithmSpec::Method::SGDConst: return "sgd_const";
  }
  return "?";
}

void RunConfig::validate() const {
  if (passes < 1) throw std::invalid_argument("RunConfig: passes must be >= 1");
  if (sampling == Sampling::Stream && passes != 1)
    throw std::invalid_argument("RunConfig: Stream sampling implies passes == 1");
  if (trace_every < 0) throw std::invalid_argument("RunConfig: trace_every must be >= 0");
  if (lipschitz_hint && !(*lipschitz_hint > 0.0))
    throw std::invalid_argument("RunConfig: lipschitz_hint must be positive");
}

namespace {

class Tracer {
 public:
  Tracer(long trace_every, const ExcessCallback& probe)
      : every_(trace_every), probe_(probe), start_(std::chrono::steady_clock::now()) {}

  bool due(long k) const {
    if (!probe_) return false;
    return every_ > 0 ? k % every_ == 0 : k == next_geometric_;
  }

  void record(long k, double step, const OptimizerState& st, std::vector<TraceRecord>& out) {
    while (every_ == 0 && next_geometric_ <= k) next_geometric_ *= 2;
    const auto wall = std::chrono::steady_clock::now() - start_;
    TraceRecord rec;
    rec.k = k;
    rec.excess_at_avg = probe_(st.beta_avg);
    rec.excess_at_last = probe_(st.beta);
    rec.step = step;
    rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(wall).count();
    out.push_back(rec);
  }

  bool active() const { return static_cast<bool>(probe_); }

 private:
  long every_;
  const ExcessCallback& probe_;
  long next_geometric_ = 1;
  std::chrono::steady_clock::time_point start_;
};

RunResult run_plain_avsgd(std::vector<Observation> rows, const RunConfig& cfg,
                          const ExcessCallback& probe) {
  if (rows.empty()) throw InvalidDataError("optimizer: empty data");
  const Index d = rows.front().x.size();
  double max_sq = 0.0;
  for (const auto& ob : rows) max_sq = std::max(max_sq, ob.x.values.squaredNorm());
  if (!(max_sq > 0.0))
    throw InvalidDataError("optimizer: all rows are zero, cannot pick a step size");
  const double L = max_sq;  // p = 1, so the bound is just the max squared norm
  const MissingnessModel miss = MissingnessModel::supplied(Vector::Ones(d));
  RunConfig inner = cfg;
  inner.lipschitz_hint = L;
  return run(rows, miss, AlgorithmSpec::avsgd(0.5 / L), inner, probe);
}

}  // namespace

RunResult run(std::span<const Observation> data, const MissingnessModel& miss,
              const AlgorithmSpec& spec, const RunConfig& cfg, const ExcessCallback& probe) {
  spec.validate();
  cfg.validate();
  if (data.empty()) throw InvalidDataError("optimizer: empty data");

  const Index d = data.front().x.size();
  for (const auto& ob : data)
    if (ob.x.size() != d) throw InvalidDataError("optimizer: inconsistent row widths");
  if (spec.gradient.type == GradientKind::Type::PolyDebiased) {
    if (spec.gradient.U.rows() != d)
      throw std::invalid_argument("optimizer: probability matrix does not match row width");
  } else {
    if (miss.p.size() != d)
      throw InvalidDataError("optimizer: missingness model does not match row width");
  }

  RunResult res;
  res.averaged = spec.averaged();
  const StepPolicy policy = spec.step_policy();
  if (cfg.lipschitz_hint && policy.kind == StepPolicy::Kind::Constant &&
      policy.alpha > 0.5 / *cfg.lipschitz_hint)
    res.warnings.push_back("step alpha exceeds 1/(2L) for the supplied Lipschitz constant; "
                           "the constant-step guarantee does not apply");

  OptimizerState st;
  st.beta = Vector::Zero(d);
  st.beta_avg = Vector::Zero(d);
  st.k = 0;
  st.step = policy;

  const long n = static_cast<long>(data.size());
  const long total = cfg.passes * n;
  std::mt19937_64 rng(cfg.seed);
  std::vector<long> order;
  if (cfg.sampling == RunConfig::Sampling::WithoutReplacement) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0L);
  }
  std::uniform_int_distribution<long> pick(0, n - 1);

  Tracer tracer(cfg.trace_every, probe);

  long done = 0;
  double last_step = policy.step_at(0);
  for (long pass = 0; pass < cfg.passes; ++pass) {
    if (cfg.sampling == RunConfig::Sampling::WithoutReplacement)
      std::shuffle(order.begin(), order.end(), rng);
    for (long i = 0; i < n; ++i) {
      long idx = i;
      if (cfg.sampling == RunConfig::Sampling::WithoutReplacement) idx = order[static_cast<std::size_t>(i)];
      else if (cfg.sampling == RunConfig::Sampling::WithReplacement) idx = pick(rng);
      const Observation& ob = data[static_cast<std::size_t>(idx)];

      const double step = policy.step_at(done);
      const long k = done + 1;  // index of the iterate this update produces
      Vector g;
      try {
        g = eval_gradient(spec.gradient, ob.x, ob.y, st.beta, miss);
      } catch (const NumericalError& e) {
        throw DivergenceError(std::string("optimizer: ") + e.what(), k);
      }
      st.beta -= step * g;
      if (!st.beta.allFinite())
        throw DivergenceError("optimizer: non-finite iterate", k);
      const double kk = static_cast<double>(k);
      st.beta_avg = (kk / (kk + 1.0)) * st.beta_avg + (1.0 / (kk + 1.0)) * st.beta;
      st.k = k;
      last_step = step;
      ++done;

      if (tracer.due(k)) tracer.record(k, step, st, res.trace);
    }
  }

  if (tracer.active() && (res.trace.empty() || res.trace.back().k != total))
    tracer.record(total, last_step, st, res.trace);

  res.state = std::move(st);
  return res;
}

RunResult run_mean_imputed(std::span<const Observation> data, const RunConfig& cfg,
                           const ExcessCallback& probe) {
  if (data.empty()) throw InvalidDataError("run_mean_imputed: empty data");
  const Index d = data.front().x.size();

  Vector sums = Vector::Zero(d);
  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(d);
  for (const auto& ob : data) {
    if (ob.x.size() != d) throw InvalidDataError("run_mean_imputed: inconsistent row widths");
    for (Index j = 0; j < d; ++j)
      if (ob.x.mask[j]) {
        sums[j] += ob.x.values[j];
        counts[j] += 1.0;
      }
  }
  for (Index j = 0; j < d; ++j)
    if (counts[j] == 0.0)
      throw InvalidDataError("run_mean_imputed: column " + std::to_string(j) +
                             " has no observed entries");
  const Vector means = sums.array() / counts;

  std::vector<Observation> imputed;
  imputed.reserve(data.size());
  const BoolArray all_true = BoolArray::Constant(d, true);
  for (const auto& ob : data) {
    Vector vals = ob.x.values;
    for (Index j = 0; j < d; ++j)
      if (!ob.x.mask[j]) vals[j] = means[j];
    imputed.push_back(Observation{MaskedVector::from_parts(std::move(vals), all_true), ob.y});
  }
  return run_plain_avsgd(std::move(imputed), cfg, probe);
}

RunResult run_complete_case(std::span<const Observation> data, const RunConfig& cfg,
                            const ExcessCallback& probe) {
  if (data.empty()) throw InvalidDataError("run_complete_case: empty data");
  std::vector<Observation> survivors;
  for (const auto& ob : data)
    if (ob.x.fully_observed()) survivors.push_back(ob);
  if (survivors.empty())
    throw InvalidDataError("run_complete_case: no fully observed rows");
  return run_plain_avsgd(std::move(survivors), cfg, probe);
}

}  // namespace missreg
