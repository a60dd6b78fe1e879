#include "missreg/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

// exit codes: 0 ok, 2 data problem, 3 numerical problem
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

missreg::Vector parse_probs(const std::string& csv) {
  std::vector<double> vals;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) throw missreg::InvalidDataError("--probs: empty entry");
    vals.push_back(std::stod(cur));
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',')
      flush();
    else
      cur.push_back(c);
  }
  flush();
  missreg::Vector p(static_cast<missreg::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) p[static_cast<missreg::Index>(i)] = vals[i];
  return p;
}

std::set<std::string> token_set(const std::vector<std::string>& tokens) {
  return tokens.empty() ? missreg::default_na_tokens()
                        : std::set<std::string>(tokens.begin(), tokens.end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming least-squares regression with missing covariates"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a model on CSV data with NA entries");
  std::string fit_data, fit_target, fit_out, fit_probs;
  double fit_lambda = 0.0, fit_alpha = 0.0;
  bool fit_poly2 = false, fit_scale = false, fit_auto_alpha = false;
  std::uint64_t fit_seed = 0;
  std::vector<std::string> fit_na;
  fit->add_option("--data", fit_data, "training CSV file")->required();
  fit->add_option("--target", fit_target, "target column name")->required();
  fit->add_option("--probs", fit_probs,
                  "comma-separated observation probabilities (else estimated from the data)");
  fit->add_option("--lambda", fit_lambda, "ridge penalty (0 = plain least squares)");
  fit->add_flag("--poly2", fit_poly2, "expand to degree-2 polynomial features");
  auto* alpha_opt = fit->add_option("--alpha", fit_alpha, "constant step size");
  auto* auto_opt = fit->add_flag("--auto-alpha", fit_auto_alpha,
                                 "derive the step size from a Lipschitz estimate (default)");
  alpha_opt->excludes(auto_opt);
  fit->add_option("--seed", fit_seed, "RNG seed recorded in the model");
  fit->add_flag("--scale", fit_scale, "standardize columns from observed entries");
  fit->add_option("--out", fit_out, "output model file")->required();
  fit->add_option("--na-token", fit_na, "NA token (repeatable; replaces the default set)");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a fitted model on complete rows");
  std::string pr_model, pr_data, pr_out, pr_target;
  std::vector<std::string> pr_na;
  predict->add_option("--model", pr_model, "model file from fit")->required();
  predict->add_option("--data", pr_data, "CSV file with complete feature rows")->required();
  predict->add_option("--target", pr_target, "target column for the relative error");
  predict->add_option("--out", pr_out, "output predictions CSV")->required();
  predict->add_option("--na-token", pr_na, "NA token (repeatable; replaces the default set)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a synthetic convergence experiment");
  std::string be_config, be_out;
  bench->add_option("--config", be_config, "JSON config with a 'scenario' field")->required();
  bench->add_option("--out", be_out, "output directory for trace files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) {
      missreg::FitOptions opts;
      opts.data_path = fit_data;
      opts.target = fit_target;
      if (!fit_probs.empty()) opts.probs = parse_probs(fit_probs);
      opts.lambda = fit_lambda;
      opts.poly2 = fit_poly2;
      if (alpha_opt->count() > 0) opts.alpha = fit_alpha;
      opts.seed = fit_seed;
      opts.scale = fit_scale;
      opts.out_path = fit_out;
      opts.na_tokens = token_set(fit_na);
      const missreg::FitReport rep = missreg::cmd_fit(opts);
      for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "fit: " << rep.n_rows << " rows, d_raw=" << rep.model.d_raw
                << (rep.model.poly ? ", d_exp=" + std::to_string(rep.model.poly->d_exp()) : "")
                << ", alpha=" << rep.model.alpha << ", model written to " << fit_out << '\n';
    } else if (*predict) {
      missreg::PredictOptions opts;
      opts.model_path = pr_model;
      opts.data_path = pr_data;
      if (predict->count("--target") > 0) opts.target = pr_target;
      opts.out_path = pr_out;
      opts.na_tokens = token_set(pr_na);
      const missreg::PredictReport rep = missreg::cmd_predict(opts);
      std::cout << "predict: " << rep.n_rows << " rows written to " << pr_out;
      if (rep.relative_error) std::cout << ", relative error " << *rep.relative_error;
      std::cout << '\n';
    } else if (*bench) {
      const missreg::BenchOutput out = missreg::cmd_bench({be_config, be_out});
      for (const std::string& p : out.trace_paths) std::cout << "trace: " << p << '\n';
      std::cout << "summary: " << out.summary_path << '\n';
    }
  } catch (const missreg::InvalidDataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const missreg::DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (iteration " << e.iteration << ")\n";
    return kExitNumerical;
  } catch (const missreg::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
