// Copyright 2026 the privglasso authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "privglasso/evaluate.hpp"
#include "privglasso/serialize.hpp"

namespace fs = std::filesystem;
using namespace privglasso;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PRIVGLASSO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("PRIVGLASSO_SEED is not an unsigned integer");
    }
  }
  return 0;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
}

NoiseFamily parse_family(const std::string& name) {
  if (name == "continuous") return NoiseFamily::kContinuous;
  if (name == "discrete") return NoiseFamily::kDiscrete;
  throw ValidationError("unknown family '" + name + "'");
}

SolverKind parse_solver(const std::string& name) {
  if (name == "cd") return SolverKind::kCoordinateDescent;
  if (name == "admm") return SolverKind::kAdmm;
  throw ValidationError("unknown solver '" + name + "'");
}

GeneratorKind parse_kind(const std::string& name) {
  if (name == "chain") return GeneratorKind::kChain;
  if (name == "sparse") return GeneratorKind::kSparseRandom;
  throw ValidationError("unknown generator '" + name + "'");
}

struct CommonOpts {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 0;
  bool strict = false;
};

void apply_common(const CommonOpts& opts) {
  if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
}

std::uint64_t effective_seed(const CommonOpts& opts) {
  return opts.seed_given ? opts.seed : default_seed();
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-o,--out-dir", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "RNG seed (overrides PRIVGLASSO_SEED)")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--jobs", opts.jobs, "Worker thread cap");
  cmd->add_flag("--strict", opts.strict,
                "Treat solver non-convergence as an error");
}

// ---------------------------------------------------------------------------
// synth

struct SynthOpts {
  CommonOpts common;
  std::string kind = "chain";
  Eigen::Index p = 50;
  Eigen::Index n = 5000;
  double sparsity = 0.99;
};

int run_synth(const SynthOpts& opts) {
  apply_common(opts.common);
  const std::uint64_t seed = effective_seed(opts.common);
  const PrecisionMatrix theta =
      parse_kind(opts.kind) == GeneratorKind::kChain
          ? chain_precision(opts.p)
          : sparse_random_precision(opts.p, opts.sparsity,
                                    derive_seed(seed, 1));
  const DataMatrix data = sample_gaussian(theta, opts.n, derive_seed(seed, 2));
  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);
  write_matrix_csv(dir / "data.csv", data.values);
  write_matrix_csv(dir / "theta_true.csv", theta.entries());
  write_edges_csv(dir / "edges_true.csv", adjacency_of(theta));
  std::cout << "wrote " << (dir / "data.csv").string() << " (" << opts.n
            << "x" << opts.p << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// encrypt

struct EncryptOpts {
  CommonOpts common;
  std::string data_path;
  std::string family = "continuous";
  double sigma = 0.0;
  double snr_db = 0.0;
  bool sigma_given = false;
  bool snr_given = false;
  bool skip_report = false;
};

int run_encrypt(const EncryptOpts& opts) {
  apply_common(opts.common);
  if (opts.sigma_given == opts.snr_given) {
    throw ValidationError("encrypt needs exactly one of --sigma or --snr-db");
  }
  const DataMatrix raw{read_matrix_csv(opts.data_path), false};
  const DataMatrix centered = center(raw);

  NoiseSpec spec;
  spec.family = parse_family(opts.family);
  spec.seed = derive_seed(effective_seed(opts.common), 3);
  spec.sigma =
      opts.sigma_given ? opts.sigma : snr_accounting(centered, opts.snr_db).sigma_n;

  const EncryptedRelease release = spec.family == NoiseFamily::kContinuous
                                       ? encrypt_continuous(centered, spec)
                                       : encrypt_discrete(centered, spec);

  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);
  write_matrix_csv(dir / "encrypted.csv", release.data.values);
  write_release_meta(dir / "release.json", release);
  if (!opts.skip_report) {
    write_privacy_report(dir / "privacy_report.json",
                         make_privacy_report(centered, spec));
  }
  std::cout << "wrote " << (dir / "encrypted.csv").string()
            << " sigma=" << format_double(spec.sigma) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate / cv

struct EstimateOpts {
  CommonOpts common;
  std::string data_path;
  std::string release_path;
  std::string solver = "cd";
  double lambda = 0.0;
  bool lambda_given = false;
  bool use_cv = false;
  int folds = 5;
  int grid_size = 15;
  std::vector<double> grid;
  std::string cv_rule = "min_mse";
  bool no_diag_penalty = false;
  int max_iter = 0;
  double tol = 0.0;
};

EncryptedRelease load_release(const EstimateOpts& opts) {
  EncryptedRelease release;
  release.data = DataMatrix{read_matrix_csv(opts.data_path), false};
  read_release_meta(opts.release_path, release);
  return release;
}

CvConfig make_cv_config(const EstimateOpts& opts, std::uint64_t seed) {
  CvConfig cv;
  cv.k_folds = opts.folds;
  cv.grid = opts.grid;
  cv.grid_size = opts.grid_size;
  cv.rule = opts.cv_rule == "drop_knee" ? CvRule::kDropKnee : CvRule::kMinMse;
  cv.solver = parse_solver(opts.solver);
  cv.lasso.penalize_diagonal = !opts.no_diag_penalty;
  cv.seed = derive_seed(seed, 4);
  return cv;
}

int run_cv(const EstimateOpts& opts) {
  apply_common(opts.common);
  const EncryptedRelease release = load_release(opts);
  const CvResult cv =
      cv_lambda(release, make_cv_config(opts, effective_seed(opts.common)));
  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);
  write_cv_result_json(dir / "cv_result.json", cv);
  write_cv_result_csv(dir / "cv_result.csv", cv);
  std::cout << "chosen lambda " << format_double(cv.chosen_lambda) << "\n";
  return kExitOk;
}

int run_estimate(const EstimateOpts& opts) {
  apply_common(opts.common);
  if (opts.lambda_given == opts.use_cv) {
    throw ValidationError("estimate needs exactly one of --lambda or --cv");
  }
  const EncryptedRelease release = load_release(opts);
  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);

  LassoConfig cfg;
  cfg.penalize_diagonal = !opts.no_diag_penalty;
  if (opts.max_iter > 0) {
    cfg.max_outer_admm = opts.max_iter;
    cfg.max_sweeps_cd = opts.max_iter;
  }
  if (opts.tol > 0.0) cfg.tol = opts.tol;
  if (opts.use_cv) {
    const CvResult cv =
        cv_lambda(release, make_cv_config(opts, effective_seed(opts.common)));
    cfg.lambda = cv.chosen_lambda;
    write_cv_result_json(dir / "cv_result.json", cv);
    write_cv_result_csv(dir / "cv_result.csv", cv);
  } else {
    cfg.lambda = opts.lambda;
  }

  const auto [theta, diag] =
      estimate_from_release(release, cfg, parse_solver(opts.solver));
  if (opts.common.strict && !diag.converged) {
    throw NumericError("solver did not converge within its iteration cap");
  }
  write_matrix_csv(dir / "theta_hat.csv", theta.entries());
  write_edges_csv(dir / "edges_hat.csv", adjacency_of(theta));
  write_diagnostics(dir / "diagnostics.json", diag,
                    parse_solver(opts.solver), cfg.lambda);
  std::cout << "lambda=" << format_double(cfg.lambda)
            << " edges=" << adjacency_of(theta).edges.size()
            << " converged=" << (diag.converged ? "yes" : "no") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  CommonOpts common;
  std::string theta_path;
  std::string truth_path;
  std::string proxy_truth_path;
};

int run_evaluate(const EvaluateOpts& opts) {
  apply_common(opts.common);
  if (opts.truth_path.empty() == opts.proxy_truth_path.empty()) {
    throw ValidationError(
        "evaluate needs exactly one of --truth or --proxy-truth");
  }
  const Eigen::MatrixXd theta = read_matrix_csv(opts.theta_path);
  EdgeSet truth;
  bool low_confidence = false;
  double proxy_lambda = 0.0;
  if (!opts.truth_path.empty()) {
    truth = read_edges_csv(opts.truth_path, theta.rows());
  } else {
    const DataMatrix raw{read_matrix_csv(opts.proxy_truth_path), false};
    CvConfig cv;
    cv.seed = derive_seed(effective_seed(opts.common), 4);
    const ProxyTruth proxy = proxy_truth(raw, cv);
    truth = proxy.edges;
    low_confidence = proxy.low_confidence;
    proxy_lambda = proxy.chosen_lambda;
  }
  const RocCurve roc = roc_auc(theta, truth);

  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);
  write_roc_csv(dir / "roc.csv", roc);
  {
    nlohmann::json j;
    j["auc"] = roc.auc;
    j["n_truth_edges"] = truth.edges.size();
    if (!opts.proxy_truth_path.empty()) {
      j["proxy_truth"] = true;
      j["proxy_lambda"] = proxy_lambda;
      j["low_confidence"] = low_confidence;
    }
    std::ofstream out(dir / "evaluation.json");
    if (!out) throw IoError("cannot open evaluation.json for writing");
    out << j.dump(2) << '\n';
  }
  std::cout << "auc=" << format_double(roc.auc) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// trial

struct TrialOpts {
  CommonOpts common;
  std::string kind = "chain";
  Eigen::Index p = 50;
  Eigen::Index n = 5000;
  double sparsity = 0.99;
  std::vector<std::string> snr_levels;
  std::string family = "continuous";
  double integer_scale = 0.0;
  std::string solver = "cd";
  double lambda = 0.1;
  bool lambda_given = false;
  bool use_cv = false;
  bool use_cv_first = false;
  int folds = 5;
  int seeds = 10;
};

int run_trial(const TrialOpts& opts) {
  apply_common(opts.common);
  TrialScenario sc;
  sc.generator = parse_kind(opts.kind);
  sc.p = opts.p;
  sc.n = opts.n;
  sc.sparsity = opts.sparsity;
  sc.family = parse_family(opts.family);
  sc.integer_scale = opts.integer_scale;
  sc.solver = parse_solver(opts.solver);
  if (opts.use_cv && opts.use_cv_first) {
    throw ValidationError("choose at most one of --cv and --cv-first");
  }
  sc.lambda_rule = opts.use_cv        ? LambdaRule::kCvEachTrial
                   : opts.use_cv_first ? LambdaRule::kCvFirstSeed
                                       : LambdaRule::kFixed;
  sc.lambda = opts.lambda;
  sc.cv.k_folds = opts.folds;
  if (opts.snr_levels.empty()) {
    throw ValidationError("trial needs --snr (e.g. --snr none,40,20)");
  }
  for (const std::string& level : opts.snr_levels) {
    if (level == "none" || level == "inf") {
      sc.snr_db_levels.push_back(std::nullopt);
    } else {
      try {
        sc.snr_db_levels.push_back(std::stod(level));
      } catch (const std::exception&) {
        throw ValidationError("bad SNR level '" + level + "'");
      }
    }
  }
  if (opts.seeds < 1) throw ValidationError("--seeds must be at least 1");
  const std::uint64_t base = effective_seed(opts.common);
  for (int s = 0; s < opts.seeds; ++s) {
    sc.seeds.push_back(base + static_cast<std::uint64_t>(s));
  }

  const std::vector<TrialReport> reports = run_trials(sc);
  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);
  write_trial_reports_json(dir / "trial_report.json", reports);
  write_trial_reports_csv(dir / "trial_table.csv", reports);
  for (const auto& report : reports) {
    std::cout << (report.snr_db ? format_double(*report.snr_db) : "none")
              << " dB: auc " << format_double(report.auc_mean) << " +- "
              << format_double(report.auc_std) << " (" << report.failures
              << " failures)\n";
    if (opts.common.strict && report.failures > 0) {
      throw NumericError("trial failures under --strict");
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// pipeline

struct PipelineOpts {
  CommonOpts common;
  std::string kind = "chain";
  Eigen::Index p = 20;
  Eigen::Index n = 5000;
  double sparsity = 0.99;
  std::string family = "continuous";
  double snr_db = 60.0;
  std::string solver = "cd";
  double lambda = 0.0;
  bool lambda_given = false;
  double integer_scale = 0.0;
};

int run_pipeline(const PipelineOpts& opts) {
  apply_common(opts.common);
  const std::uint64_t seed = effective_seed(opts.common);
  const fs::path dir(opts.common.out_dir);
  ensure_dir(dir);

  // synth
  const PrecisionMatrix theta_true =
      parse_kind(opts.kind) == GeneratorKind::kChain
          ? chain_precision(opts.p)
          : sparse_random_precision(opts.p, opts.sparsity,
                                    derive_seed(seed, 1));
  DataMatrix raw = sample_gaussian(theta_true, opts.n, derive_seed(seed, 2));
  if (opts.integer_scale > 0.0) {
    raw.values = (raw.values * opts.integer_scale).array().round();
  }
  write_matrix_csv(dir / "data.csv", raw.values);
  write_matrix_csv(dir / "theta_true.csv", theta_true.entries());
  const EdgeSet truth = adjacency_of(theta_true);
  write_edges_csv(dir / "edges_true.csv", truth);

  // encrypt
  const DataMatrix centered = center(raw);
  NoiseSpec spec;
  spec.family = parse_family(opts.family);
  spec.sigma = snr_accounting(centered, opts.snr_db).sigma_n;
  spec.seed = derive_seed(seed, 3);
  const EncryptedRelease release = spec.family == NoiseFamily::kContinuous
                                       ? encrypt_continuous(centered, spec)
                                       : encrypt_discrete(centered, spec);
  write_matrix_csv(dir / "encrypted.csv", release.data.values);
  write_release_meta(dir / "release.json", release);
  write_privacy_report(dir / "privacy_report.json",
                       make_privacy_report(centered, spec));

  // estimate
  LassoConfig cfg;
  if (opts.lambda_given) {
    cfg.lambda = opts.lambda;
  } else {
    CvConfig cv;
    cv.solver = parse_solver(opts.solver);
    cv.seed = derive_seed(seed, 4);
    const CvResult result = cv_lambda(release, cv);
    write_cv_result_json(dir / "cv_result.json", result);
    write_cv_result_csv(dir / "cv_result.csv", result);
    cfg.lambda = result.chosen_lambda;
  }
  const auto [theta_hat, diag] =
      estimate_from_release(release, cfg, parse_solver(opts.solver));
  if (opts.common.strict && !diag.converged) {
    throw NumericError("solver did not converge within its iteration cap");
  }
  write_matrix_csv(dir / "theta_hat.csv", theta_hat.entries());
  write_edges_csv(dir / "edges_hat.csv", adjacency_of(theta_hat));
  write_diagnostics(dir / "diagnostics.json", diag, parse_solver(opts.solver),
                    cfg.lambda);

  // evaluate
  const RocCurve roc = roc_auc(theta_hat.entries(), truth);
  write_roc_csv(dir / "roc.csv", roc);
  {
    nlohmann::json j;
    j["auc"] = roc.auc;
    j["lambda"] = cfg.lambda;
    j["snr_db"] = opts.snr_db;
    j["converged"] = diag.converged;
    std::ofstream out(dir / "summary.json");
    if (!out) throw IoError("cannot open summary.json for writing");
    out << j.dump(2) << '\n';
  }
  std::cout << "pipeline auc=" << format_double(roc.auc)
            << " lambda=" << format_double(cfg.lambda) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Privacy-preserving publication of Gaussian tabular data and sparse "
      "graph recovery from the published release"};
  app.require_subcommand(1);

  SynthOpts synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic model and samples");
  synth_cmd->add_option("--kind", synth.kind, "chain | sparse");
  synth_cmd->add_option("-p,--nodes", synth.p, "Variable count")->required();
  synth_cmd->add_option("-n,--samples", synth.n, "Sample count")->required();
  synth_cmd->add_option("--sparsity", synth.sparsity,
                        "Zero fraction (sparse generator)");
  add_common(synth_cmd, synth.common);

  EncryptOpts encrypt;
  CLI::App* encrypt_cmd =
      app.add_subcommand("encrypt", "Publish a noised release of a data CSV");
  encrypt_cmd->add_option("--data", encrypt.data_path, "Raw data CSV")
      ->required();
  encrypt_cmd->add_option("--family", encrypt.family,
                          "continuous | discrete");
  encrypt_cmd->add_option("--sigma", encrypt.sigma, "Noise scale")
      ->each([&encrypt](const std::string&) { encrypt.sigma_given = true; });
  encrypt_cmd->add_option("--snr-db", encrypt.snr_db, "Target SNR in dB")
      ->each([&encrypt](const std::string&) { encrypt.snr_given = true; });
  encrypt_cmd->add_flag("--skip-report", encrypt.skip_report,
                        "Skip the privacy report (and its preconditions)");
  add_common(encrypt_cmd, encrypt.common);

  EstimateOpts estimate;
  CLI::App* estimate_cmd = app.add_subcommand(
      "estimate", "Recover the sparse precision matrix from a release");
  estimate_cmd->add_option("--data", estimate.data_path, "Encrypted data CSV")
      ->required();
  estimate_cmd
      ->add_option("--release", estimate.release_path, "Release sidecar JSON")
      ->required();
  estimate_cmd->add_option("--solver", estimate.solver, "cd | admm");
  estimate_cmd->add_option("--lambda", estimate.lambda, "L1 strength")
      ->each([&estimate](const std::string&) { estimate.lambda_given = true; });
  estimate_cmd->add_flag("--cv", estimate.use_cv,
                         "Choose lambda by cross-validation");
  estimate_cmd->add_option("--folds", estimate.folds, "CV folds");
  estimate_cmd->add_option("--grid", estimate.grid,
                           "Explicit descending lambda grid");
  estimate_cmd->add_option("--grid-size", estimate.grid_size,
                           "Default grid size");
  estimate_cmd->add_option("--cv-rule", estimate.cv_rule,
                           "min_mse | drop_knee");
  estimate_cmd->add_flag("--no-diag-penalty", estimate.no_diag_penalty,
                         "Exclude the diagonal from the L1 penalty");
  estimate_cmd->add_option("--max-iter", estimate.max_iter,
                           "Iteration / sweep cap override");
  estimate_cmd->add_option("--tol", estimate.tol,
                           "Convergence tolerance override");
  add_common(estimate_cmd, estimate.common);

  EstimateOpts cv_opts;
  CLI::App* cv_cmd = app.add_subcommand(
      "cv", "Cross-validate the L1 strength on a release");
  cv_cmd->add_option("--data", cv_opts.data_path, "Encrypted data CSV")
      ->required();
  cv_cmd->add_option("--release", cv_opts.release_path, "Release sidecar JSON")
      ->required();
  cv_cmd->add_option("--solver", cv_opts.solver, "cd | admm");
  cv_cmd->add_option("--folds", cv_opts.folds, "CV folds");
  cv_cmd->add_option("--grid", cv_opts.grid,
                     "Explicit descending lambda grid");
  cv_cmd->add_option("--grid-size", cv_opts.grid_size, "Default grid size");
  cv_cmd->add_option("--cv-rule", cv_opts.cv_rule, "min_mse | drop_knee");
  add_common(cv_cmd, cv_opts.common);

  EvaluateOpts evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "Score a recovered structure against a truth");
  evaluate_cmd->add_option("--theta", evaluate.theta_path, "Estimated theta CSV")
      ->required();
  evaluate_cmd->add_option("--truth", evaluate.truth_path, "True edges CSV");
  evaluate_cmd->add_option(
      "--proxy-truth", evaluate.proxy_truth_path,
      "Raw data CSV; vanilla graphical lasso provides the truth");
  add_common(evaluate_cmd, evaluate.common);

  TrialOpts trial;
  CLI::App* trial_cmd = app.add_subcommand(
      "trial", "Repeated-seed generate/encrypt/estimate/score runs");
  trial_cmd->add_option("--kind", trial.kind, "chain | sparse");
  trial_cmd->add_option("-p,--nodes", trial.p, "Variable count")->required();
  trial_cmd->add_option("-n,--samples", trial.n, "Sample count")->required();
  trial_cmd->add_option("--sparsity", trial.sparsity,
                        "Zero fraction (sparse generator)");
  trial_cmd
      ->add_option("--snr", trial.snr_levels,
                   "SNR levels in dB; 'none' for no noise")
      ->required()
      ->delimiter(',');
  trial_cmd->add_option("--family", trial.family, "continuous | discrete");
  trial_cmd->add_option("--integer-scale", trial.integer_scale,
                        "Scale and round samples to integers");
  trial_cmd->add_option("--solver", trial.solver, "cd | admm");
  trial_cmd->add_option("--lambda", trial.lambda, "Fixed L1 strength")
      ->each([&trial](const std::string&) { trial.lambda_given = true; });
  trial_cmd->add_flag("--cv", trial.use_cv, "CV lambda per trial");
  trial_cmd->add_flag("--cv-first", trial.use_cv_first,
                      "CV lambda on the first seed, reused");
  trial_cmd->add_option("--folds", trial.folds, "CV folds");
  trial_cmd->add_option("--seeds", trial.seeds, "Number of seeds");
  add_common(trial_cmd, trial.common);

  PipelineOpts pipeline;
  CLI::App* pipeline_cmd = app.add_subcommand(
      "pipeline", "synth -> encrypt -> estimate -> evaluate in one shot");
  pipeline_cmd->add_option("--kind", pipeline.kind, "chain | sparse");
  pipeline_cmd->add_option("-p,--nodes", pipeline.p, "Variable count")
      ->required();
  pipeline_cmd->add_option("-n,--samples", pipeline.n, "Sample count")
      ->required();
  pipeline_cmd->add_option("--sparsity", pipeline.sparsity,
                           "Zero fraction (sparse generator)");
  pipeline_cmd->add_option("--family", pipeline.family,
                           "continuous | discrete");
  pipeline_cmd->add_option("--snr-db", pipeline.snr_db, "Target SNR in dB");
  pipeline_cmd->add_option("--solver", pipeline.solver, "cd | admm");
  pipeline_cmd->add_option("--lambda", pipeline.lambda, "Fixed L1 strength")
      ->each(
          [&pipeline](const std::string&) { pipeline.lambda_given = true; });
  pipeline_cmd->add_option("--integer-scale", pipeline.integer_scale,
                           "Scale and round samples to integers");
  add_common(pipeline_cmd, pipeline.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (encrypt_cmd->parsed()) return run_encrypt(encrypt);
    if (estimate_cmd->parsed()) return run_estimate(estimate);
    if (cv_cmd->parsed()) return run_cv(cv_opts);
    if (evaluate_cmd->parsed()) return run_evaluate(evaluate);
    if (trial_cmd->parsed()) return run_trial(trial);
    if (pipeline_cmd->parsed()) return run_pipeline(pipeline);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
