#include "missreg/bench.hpp"

#include "missreg/lipschitz.hpp"
#include "missreg/polyfeat.hpp"
#include "missreg/risk.hpp"
#include "missreg/synthgen.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

namespace missreg {

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Fig1Left: return "fig1_left";
    case Scenario::Fig1Right: return "fig1_right";
    case Scenario::Fig2: return "fig2";
    case Scenario::FigS1: return "figS1";
    case Scenario::FigS3: return "figS3";
    case Scenario::Custom: return "custom";
  }
  return "?";
}

Scenario scenario_from_name(const std::string& name) {
  for (Scenario s : {Scenario::Fig1Left, Scenario::Fig1Right, Scenario::Fig2,
                     Scenario::FigS1, Scenario::FigS3, Scenario::Custom})
    if (name == scenario_name(s)) return s;
  throw InvalidDataError("unknown scenario '" + name + "'");
}

void BenchConfig::validate() const {
  if (d <= 0) throw InvalidDataError("bench: d must be positive");
  if (n <= 0) throw InvalidDataError("bench: n must be positive");
  if (p.size() != d) throw InvalidDataError("bench: p must have one entry per feature");
  for (Index j = 0; j < d; ++j)
    if (!(p[j] > 0.0) || !(p[j] <= 1.0))
      throw InvalidDataError("bench: p entries must lie in (0,1]");
  if (!(noise_std >= 0.0)) throw InvalidDataError("bench: noise_std must be >= 0");
  if (replications < 1) throw InvalidDataError("bench: replications must be >= 1");
  if (trace_every < 0) throw InvalidDataError("bench: trace_every must be >= 0");
  if (passes < 1) throw InvalidDataError("bench: passes must be >= 1");
  if (passes > 1 && scenario != Scenario::Fig1Left && scenario != Scenario::Custom)
    throw InvalidDataError("bench: multiple passes only make sense for fig1_left/custom");
  if (scenario == Scenario::Custom) {
    if (algorithms.empty()) throw InvalidDataError("bench: custom scenario needs algorithms");
    for (const std::string& a : algorithms)
      if (a != "avsgd" && a != "sgd_decay" && a != "sgd_const" && a != "mean_avsgd" &&
          a != "complete_case")
        throw InvalidDataError("bench: unknown algorithm '" + a + "'");
  }
}

namespace {

// scenario default for p at dimension d; fig2 draws heterogeneous values in
// [0.5, 1] from a salted stream, shared by all replications
Vector default_p(Scenario s, Index d, std::uint64_t seed) {
  if (s == Scenario::Fig2) {
    std::mt19937_64 rng(derive_seed(seed, 0x0f162));
    std::uniform_real_distribution<double> u(0.5, 1.0);
    Vector p(d);
    for (Index j = 0; j < d; ++j) p[j] = u(rng);
    return p;
  }
  return Vector::Constant(d, 0.7);
}

}  // namespace

BenchConfig default_config(Scenario s, std::uint64_t seed) {
  BenchConfig c;
  c.scenario = s;
  c.seed = seed;
  switch (s) {
    case Scenario::Fig1Left:
      c.d = 10;
      c.n = 1000;
      c.passes = 100;
      c.trace_every = c.n;  // one point per pass
      break;
    case Scenario::Fig1Right:
    case Scenario::Fig2:
    case Scenario::FigS1:
      c.d = 10;
      c.n = 100000;
      break;
    case Scenario::FigS3:
      c.d = 2;
      c.n = 10000;
      break;
    case Scenario::Custom:
      c.d = 10;
      c.n = 10000;
      c.algorithms = {"avsgd", "sgd_decay", "sgd_const"};
      break;
  }
  c.p = default_p(s, c.d, seed);
  return c;
}

BenchConfig parse_bench_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidDataError(std::string("bench config: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("scenario"))
    throw InvalidDataError("bench config: need an object with a 'scenario' field");
  try {
    const Scenario s = scenario_from_name(j.at("scenario").get<std::string>());
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    BenchConfig c = default_config(s, seed);
    if (j.contains("d")) {
      c.d = j.at("d").get<Index>();
      if (c.d > 0) c.p = default_p(s, c.d, seed);
    }
    if (j.contains("n")) c.n = j.at("n").get<long>();
    if (j.contains("p")) {
      const auto& pj = j.at("p");
      if (pj.is_number()) {
        c.p = Vector::Constant(c.d, pj.get<double>());
      } else if (pj.is_array()) {
        c.p.resize(static_cast<Index>(pj.size()));
        Index i = 0;
        for (const auto& e : pj) c.p[i++] = e.get<double>();
      } else {
        throw InvalidDataError("bench config: p must be a number or an array");
      }
    }
    c.noise_std = j.value("noise_std", c.noise_std);
    c.replications = j.value("replications", c.replications);
    c.trace_every = j.value("trace_every", c.trace_every);
    c.passes = j.value("passes", c.passes);
    if (j.contains("algorithms"))
      c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidDataError(std::string("bench config: malformed field: ") + e.what());
  }
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string p_to_string(const Vector& p) {
  std::ostringstream ss;
  for (Index j = 0; j < p.size(); ++j) ss << (j ? "," : "") << fmt(p[j]);
  return ss.str();
}

std::vector<std::string> base_header(const BenchConfig& cfg, int rep) {
  std::vector<std::string> h;
  h.push_back(std::string("scenario: ") + scenario_name(cfg.scenario));
  h.push_back("d: " + std::to_string(cfg.d));
  h.push_back("n: " + std::to_string(cfg.n));
  h.push_back("p: " + p_to_string(cfg.p));
  h.push_back("noise_std: " + fmt(cfg.noise_std));
  h.push_back("seed: " + std::to_string(cfg.seed));
  h.push_back("replication: " + std::to_string(rep));
  h.push_back("passes: " + std::to_string(cfg.passes));
  h.push_back("reference: least-squares minimizer of the complete pre-mask data");
  h.push_back("columns: excess_at_avg evaluates the running average, excess_at_last the last iterate");
  return h;
}

RunConfig make_run_config(const BenchConfig& cfg, std::uint64_t rep_seed) {
  RunConfig rc;
  rc.passes = cfg.passes;
  rc.sampling =
      cfg.passes > 1 ? RunConfig::Sampling::WithoutReplacement : RunConfig::Sampling::Stream;
  rc.seed = rep_seed;
  rc.trace_every = cfg.trace_every;
  return rc;
}

void push_arm(ReplicationResult& out, std::string label, RunResult run) {
  for (const std::string& w : run.warnings)
    out.header.push_back("warning (" + label + "): " + w);
  const StepPolicy& pol = run.state.step;
  const double alpha = pol.kind == StepPolicy::Kind::Constant ? pol.alpha : 0.0;
  out.header.push_back("arm " + label +
                       ": alpha=" + (alpha > 0.0 ? fmt(alpha) : "1/sqrt(k+1)"));
  out.arms.push_back(ArmResult{std::move(label), std::move(run), alpha});
}

ReplicationResult replicate_standard(const BenchConfig& cfg, int rep) {
  const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  SynthConfig sc;
  sc.d = cfg.d;
  sc.n = cfg.n;
  sc.noise_std = cfg.noise_std;
  sc.p = cfg.p;
  sc.seed = rep_seed;
  const SynthData sd = generate(sc);

  const RiskProbe probe = RiskProbe::build(sd.X, sd.y);
  const RiskCallback cb = make_probe_callback(probe);
  RunConfig rc = make_run_config(cfg, rep_seed);

  ReplicationResult out;
  out.header = base_header(cfg, rep);

  switch (cfg.scenario) {
    case Scenario::Fig1Left:
    case Scenario::Fig1Right: {
      const LipschitzEstimate L = lipschitz_oracle(sd.X, sd.miss);
      const double alpha = L.suggested_alpha();
      rc.lipschitz_hint = L.value;
      out.header.push_back("lipschitz_oracle: " + fmt(L.value));
      push_arm(out, "avsgd", run(sd.masked, sd.miss, AlgorithmSpec::avsgd(alpha), rc, cb));
      push_arm(out, "sgd_decay", run(sd.masked, sd.miss, AlgorithmSpec::sgd_decay(), rc, cb));
      push_arm(out, "sgd_const", run(sd.masked, sd.miss, AlgorithmSpec::sgd_const(alpha), rc, cb));
      break;
    }
    case Scenario::Fig2: {
      const LipschitzEstimate L_true = lipschitz_oracle(sd.X, sd.miss);
      const double alpha_true = L_true.suggested_alpha();
      rc.lipschitz_hint = L_true.value;
      push_arm(out, "avsgd",
               run(sd.masked, sd.miss, AlgorithmSpec::avsgd(alpha_true), rc, cb));

      // the "ignore heterogeneity" arm believes every feature shares the
      // mean probability; both its debiasing and its step size use that belief
      const double p_bar = cfg.p.mean();
      const MissingnessModel homog = MissingnessModel::homogeneous(cfg.d, p_bar);
      const LipschitzEstimate L_homog = lipschitz_oracle(sd.X, homog);
      const double alpha_homog = L_homog.suggested_alpha();
      RunConfig rc2 = rc;
      rc2.lipschitz_hint = L_homog.value;
      out.header.push_back("homogenized p: " + fmt(p_bar));
      push_arm(out, "avsgd_homog_p",
               run(sd.masked, homog, AlgorithmSpec::avsgd(alpha_homog), rc2, cb));
      break;
    }
    case Scenario::FigS1: {
      const LipschitzEstimate L_or = lipschitz_oracle(sd.X, sd.miss);
      std::vector<MaskedVector> xs;
      xs.reserve(sd.masked.size());
      for (const auto& ob : sd.masked) xs.push_back(ob.x);
      const LipschitzEstimate L_na = lipschitz_from_na(xs);
      out.header.push_back("lipschitz_oracle: " + fmt(L_or.value));
      out.header.push_back("lipschitz_from_na: " + fmt(L_na.value));

      const double a_or = L_or.suggested_alpha();
      rc.lipschitz_hint = L_or.value;
      push_arm(out, "avsgd_oracle_L",
               run(sd.masked, sd.miss, AlgorithmSpec::avsgd(a_or), rc, cb));

      const double a_na = L_na.suggested_alpha();
      RunConfig rc2 = rc;
      rc2.lipschitz_hint = L_na.value;
      push_arm(out, "avsgd_estimated_L",
               run(sd.masked, sd.miss, AlgorithmSpec::avsgd(a_na), rc2, cb));
      break;
    }
    case Scenario::Custom: {
      const LipschitzEstimate L = lipschitz_oracle(sd.X, sd.miss);
      const double alpha = L.suggested_alpha();
      rc.lipschitz_hint = L.value;
      out.header.push_back("lipschitz_oracle: " + fmt(L.value));
      for (const std::string& a : cfg.algorithms) {
        if (a == "avsgd")
          push_arm(out, a, run(sd.masked, sd.miss, AlgorithmSpec::avsgd(alpha), rc, cb));
        else if (a == "sgd_decay")
          push_arm(out, a, run(sd.masked, sd.miss, AlgorithmSpec::sgd_decay(), rc, cb));
        else if (a == "sgd_const")
          push_arm(out, a, run(sd.masked, sd.miss, AlgorithmSpec::sgd_const(alpha), rc, cb));
        else if (a == "mean_avsgd")
          push_arm(out, a, run_mean_imputed(sd.masked, rc, cb));
        else if (a == "complete_case")
          push_arm(out, a, run_complete_case(sd.masked, rc, cb));
      }
      break;
    }
    default:
      throw InvalidDataError("bench: unhandled scenario");
  }
  return out;
}

// degree-2 response: y depends only on the interaction and square features,
// built on top of the raw draw (which contributes the noise via beta_star=0)
ReplicationResult replicate_poly(const BenchConfig& cfg, int rep) {
  const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
  SynthConfig sc;
  sc.d = cfg.d;
  sc.n = cfg.n;
  sc.noise_std = cfg.noise_std;
  sc.p = cfg.p;
  sc.seed = rep_seed;
  sc.beta_star = Vector::Zero(cfg.d);  // y = eps; second-order signal added below
  const SynthData sd = generate(sc);

  const FeatureMap fm = FeatureMap::degree2(cfg.d);
  const Index d_exp = fm.d_exp();
  const Index n_second = d_exp - cfg.d;  // pairs + squares
  const Vector beta2 = default_beta_star(n_second);

  Matrix X_exp(cfg.n, d_exp);
  for (long i = 0; i < cfg.n; ++i) {
    const MaskedVector full = MaskedVector::complete(sd.X.row(i).transpose());
    X_exp.row(i) = expand_row(full, fm).values.transpose();
  }
  Vector y2(cfg.n);
  for (long i = 0; i < cfg.n; ++i)
    y2[i] = X_exp.row(i).tail(n_second).dot(beta2) + sd.y[i];

  std::vector<Observation> stream;
  stream.reserve(static_cast<std::size_t>(cfg.n));
  for (long i = 0; i < cfg.n; ++i)
    stream.push_back(Observation{expand_row(sd.masked[static_cast<std::size_t>(i)].x, fm), y2[i]});

  const Matrix U = build_probability_matrix(fm, sd.miss);
  const LipschitzEstimate L = lipschitz_poly_oracle(X_exp, U);
  const double alpha = L.suggested_alpha();

  const RiskProbe probe = RiskProbe::build(X_exp, y2);
  const RiskCallback cb = make_probe_callback(probe);
  RunConfig rc = make_run_config(cfg, rep_seed);
  rc.lipschitz_hint = L.value;

  ReplicationResult out;
  out.header = base_header(cfg, rep);
  out.header.push_back("expanded features: " + std::to_string(d_exp));
  out.header.push_back("lipschitz_poly: " + fmt(L.value));
  push_arm(out, "avsgd_poly",
           run(stream, sd.miss, AlgorithmSpec::avsgd(alpha, GradientKind::poly(U)), rc, cb));
  return out;
}

}  // namespace

ReplicationResult run_replication(const BenchConfig& cfg, int rep) {
  cfg.validate();
  if (cfg.scenario == Scenario::FigS3) return replicate_poly(cfg, rep);
  return replicate_standard(cfg, rep);
}

TraceDoc ReplicationResult::to_trace() const {
  TraceDoc doc;
  doc.header = header;
  for (const ArmResult& arm : arms)
    for (const TraceRecord& r : arm.run.trace)
      doc.rows.push_back(TraceRow{arm.label, r.k, r.excess_at_avg, r.excess_at_last, r.wall_ns});
  doc.validate();
  return doc;
}

unsigned bench_thread_cap() {
  if (const char* env = std::getenv("MISSREGRESS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

BenchOutput run_bench(const BenchConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  std::vector<TraceDoc> docs(static_cast<std::size_t>(cfg.replications));
  std::vector<std::string> errors(static_cast<std::size_t>(cfg.replications));
  std::atomic<int> next{0};
  const unsigned workers =
      std::min<unsigned>(bench_thread_cap(), static_cast<unsigned>(cfg.replications));

  auto work = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= cfg.replications) return;
      try {
        docs[static_cast<std::size_t>(rep)] = run_replication(cfg, rep).to_trace();
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(rep)] = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (int rep = 0; rep < cfg.replications; ++rep)
    if (!errors[static_cast<std::size_t>(rep)].empty())
      throw NumericalError("bench replication " + std::to_string(rep) + " failed: " +
                           errors[static_cast<std::size_t>(rep)]);

  BenchOutput out;
  const std::string base = out_dir + "/" + scenario_name(cfg.scenario);
  for (int rep = 0; rep < cfg.replications; ++rep) {
    const std::string path = base + "_rep" + std::to_string(rep) + ".csv";
    write_trace(path, docs[static_cast<std::size_t>(rep)]);
    out.trace_paths.push_back(path);
  }
  const std::vector<SummaryRow> rows = summarize_traces(docs);
  out.summary_path = base + "_summary.ndjson";
  write_summary(out.summary_path, rows);
  return out;
}

}  // namespace missreg
