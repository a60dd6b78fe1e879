#include "missreg/cli.hpp"

#include "missreg/lipschitz.hpp"
#include "missreg/optimizer.hpp"
#include "missreg/polyfeat.hpp"
#include "missreg/risk.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace missreg {

FitReport cmd_fit(const FitOptions& opts) {
  if (opts.alpha && (!(*opts.alpha > 0.0) || !std::isfinite(*opts.alpha)))
    throw InvalidDataError("fit: --alpha must be finite and positive");
  if (!(opts.lambda >= 0.0) || !std::isfinite(opts.lambda))
    throw InvalidDataError("fit: --lambda must be finite and >= 0");

  CsvData data = ingest_csv(opts.data_path, opts.target, opts.na_tokens, opts.scale);
  const Index d = static_cast<Index>(data.feature_names.size());

  MissingnessModel miss = data.miss;
  if (opts.probs) {
    if (opts.probs->size() != d)
      throw InvalidDataError("fit: --probs needs exactly " + std::to_string(d) + " values");
    miss = MissingnessModel::supplied(*opts.probs);
  }

  bool complete = true;
  for (const auto& ob : data.obs)
    if (!ob.x.fully_observed()) {
      complete = false;
      break;
    }

  FitReport rep;
  rep.warnings = data.warnings;
  rep.n_rows = static_cast<long>(data.obs.size());

  // working stream: raw rows, or their degree-2 expansion
  std::optional<FeatureMap> fm;
  Matrix U;
  std::vector<Observation> stream;
  if (opts.poly2) {
    fm = FeatureMap::degree2(d);
    U = build_probability_matrix(*fm, miss);
    stream.reserve(data.obs.size());
    for (const auto& ob : data.obs)
      stream.push_back(Observation{expand_row(ob.x, *fm), ob.y});
  }
  const std::vector<Observation>& rows = opts.poly2 ? stream : data.obs;

  std::optional<LipschitzEstimate> lip;
  double alpha = 0.0;
  if (opts.alpha) {
    alpha = *opts.alpha;
  } else {
    // oracle estimate when the rows are complete and p was supplied (the
    // streaming setting where p is a design parameter); otherwise the
    // self-contained incomplete-data estimate
    std::vector<MaskedVector> xs;
    xs.reserve(rows.size());
    for (const auto& ob : rows) xs.push_back(ob.x);
    if (opts.poly2) {
      if (complete && opts.probs) {
        Matrix X(static_cast<Index>(rows.size()), fm->d_exp());
        for (Index i = 0; i < X.rows(); ++i)
          X.row(i) = rows[static_cast<std::size_t>(i)].x.values.transpose();
        lip = lipschitz_poly_oracle(X, U);
      } else {
        lip = lipschitz_poly_from_na(xs, U, &rep.warnings);
      }
    } else {
      if (complete && opts.probs) {
        Matrix X(static_cast<Index>(rows.size()), d);
        for (Index i = 0; i < X.rows(); ++i)
          X.row(i) = rows[static_cast<std::size_t>(i)].x.values.transpose();
        lip = lipschitz_oracle(X, miss);
      } else {
        lip = lipschitz_from_na(xs, &rep.warnings);
      }
    }
    alpha = lip->suggested_alpha();
  }

  GradientKind kind = GradientKind::plain();
  if (opts.poly2)
    kind = GradientKind::poly(U, opts.lambda);
  else if (opts.lambda > 0.0)
    kind = GradientKind::ridge(opts.lambda);

  RunConfig rc;
  rc.passes = 1;
  rc.sampling = RunConfig::Sampling::Stream;
  rc.seed = opts.seed;
  if (lip) rc.lipschitz_hint = lip->value;

  const RunResult res = run(rows, miss, AlgorithmSpec::avsgd(alpha, kind), rc);
  for (const std::string& w : res.warnings) rep.warnings.push_back(w);

  ModelFile& m = rep.model;
  m.schema_version = 1;
  m.d_raw = d;
  m.poly = fm;
  m.miss = miss;
  m.beta_avg = res.state.beta_avg;
  m.beta = res.state.beta;
  m.method = "avsgd";
  m.alpha = alpha;
  m.lambda = opts.lambda;
  m.lipschitz = lip;
  m.seed = opts.seed;
  m.scaling = data.scaling;
  m.feature_names = data.feature_names;
  m.target_name = data.target_name;
  m.validate();

  if (!opts.out_path.empty()) save_model(opts.out_path, m);
  return rep;
}

PredictReport cmd_predict(const PredictOptions& opts) {
  const ModelFile m = load_model(opts.model_path);
  const RawTable table = read_table(opts.data_path, opts.na_tokens);

  std::vector<Index> feature_cols;
  feature_cols.reserve(m.feature_names.size());
  for (const std::string& name : m.feature_names) {
    const Index c = table.column_index(name);
    if (c < 0)
      throw InvalidDataError(opts.data_path + ": model feature column '" + name +
                             "' not found");
    feature_cols.push_back(c);
  }
  const std::string target_name = opts.target.value_or(m.target_name);
  const Index target_col = table.column_index(target_name);
  if (opts.target && target_col < 0)
    throw InvalidDataError(opts.data_path + ": target column '" + target_name + "' not found");

  const long n = static_cast<long>(table.rows.size());
  if (n == 0) throw InvalidDataError(opts.data_path + ": no data rows");

  PredictReport rep;
  rep.n_rows = n;
  rep.predictions.resize(n);
  Vector y_scaled;
  Vector yhat_scaled(n);
  if (target_col >= 0) y_scaled.resize(n);

  for (long i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    Vector raw(m.d_raw);
    for (Index j = 0; j < m.d_raw; ++j) {
      const auto& cell = row[static_cast<std::size_t>(feature_cols[static_cast<std::size_t>(j)])];
      if (!cell)
        throw InvalidDataError(opts.data_path + ": row " + std::to_string(i + 1) +
                               " has a missing value in feature '" +
                               m.feature_names[static_cast<std::size_t>(j)] +
                               "'; prediction needs complete rows");
      raw[j] = *cell;
    }
    MaskedVector x = MaskedVector::complete(std::move(raw));
    m.scaling.apply(x);
    double yh;
    if (m.poly)
      yh = expand_row(x, *m.poly).values.dot(m.beta_avg);
    else
      yh = x.values.dot(m.beta_avg);
    yhat_scaled[i] = yh;
    rep.predictions[i] = m.scaling.unscale_prediction(yh);
    if (target_col >= 0) {
      const auto& ycell = row[static_cast<std::size_t>(target_col)];
      if (!ycell)
        throw InvalidDataError(opts.data_path + ": row " + std::to_string(i + 1) +
                               " has a missing target value");
      y_scaled[i] = m.scaling.scale_target(*ycell);
    }
  }

  if (target_col >= 0) rep.relative_error = relative_prediction_error(yhat_scaled, y_scaled);

  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw InvalidDataError("cannot open file for writing: " + opts.out_path);
    out << "prediction\n";
    char buf[64];
    for (long i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", rep.predictions[i]);
      out << buf << '\n';
    }
    if (!out) throw InvalidDataError("write failed: " + opts.out_path);
  }
  return rep;
}

BenchOutput cmd_bench(const BenchOptions& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw InvalidDataError("cannot open config file: " + opts.config_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const BenchConfig cfg = parse_bench_config(ss.str());
  return run_bench(cfg, opts.out_dir);
}

}  // namespace missreg
