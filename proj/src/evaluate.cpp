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

#include "privglasso/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "privglasso/rng.hpp"

namespace privglasso {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct SingleTrialResult {
  double auc = 0.0;
  double epsilon_simple = kNan;
};

DataMatrix generate_data(const TrialScenario& sc, std::uint64_t seed,
                         PrecisionMatrix* theta_out) {
  PrecisionMatrix theta =
      sc.generator == GeneratorKind::kChain
          ? chain_precision(sc.p)
          : sparse_random_precision(sc.p, sc.sparsity, derive_seed(seed, 1));
  DataMatrix data = sample_gaussian(theta, sc.n, derive_seed(seed, 2));
  if (sc.integer_scale > 0.0) {
    data.values = (data.values * sc.integer_scale).array().round();
    data.centered = false;
  }
  if (theta_out != nullptr) *theta_out = std::move(theta);
  return data;
}

SingleTrialResult run_single(const TrialScenario& sc, std::uint64_t seed,
                             std::optional<double> snr_db, double lambda,
                             const EdgeSet& truth) {
  DataMatrix raw = generate_data(sc, seed, nullptr);
  const DataMatrix centered = center(raw);

  EncryptedRelease release;
  SingleTrialResult out;
  if (snr_db.has_value()) {
    const SnrResult snr = snr_accounting(centered, *snr_db);
    NoiseSpec spec{sc.family, snr.sigma_n, derive_seed(seed, 3)};
    release = sc.family == NoiseFamily::kContinuous
                  ? encrypt_continuous(centered, spec)
                  : encrypt_discrete(centered, spec);
    out.epsilon_simple = snr.epsilon_simple;
  } else {
    release.data = raw;
    release.family = NoiseFamily::kContinuous;
    release.sigma = 0.0;
  }

  LassoConfig cfg = sc.lasso;
  cfg.lambda = lambda;
  auto [theta_hat, diag] = estimate_from_release(release, cfg, sc.solver);
  out.auc = roc_auc(theta_hat.entries(), truth).auc;
  return out;
}

double cv_pick_lambda(const TrialScenario& sc, std::uint64_t seed,
                      std::optional<double> snr_db) {
  DataMatrix raw = generate_data(sc, seed, nullptr);
  const DataMatrix centered = center(raw);
  EncryptedRelease release;
  if (snr_db.has_value()) {
    const SnrResult snr = snr_accounting(centered, *snr_db);
    NoiseSpec spec{sc.family, snr.sigma_n, derive_seed(seed, 3)};
    release = sc.family == NoiseFamily::kContinuous
                  ? encrypt_continuous(centered, spec)
                  : encrypt_discrete(centered, spec);
  } else {
    release.data = raw;
    release.sigma = 0.0;
  }
  CvConfig cv = sc.cv;
  cv.solver = sc.solver;
  cv.lasso = sc.lasso;
  return cv_lambda(release, cv).chosen_lambda;
}

}  // namespace

RocCurve roc_auc(const Eigen::MatrixXd& theta_hat, const EdgeSet& truth) {
  const Eigen::Index p = theta_hat.rows();
  if (theta_hat.cols() != p) {
    throw ValidationError("theta must be square");
  }
  if (truth.p != p) {
    throw ValidationError("truth edge set dimension does not match theta");
  }
  const std::size_t n_pairs = static_cast<std::size_t>(p) * (p - 1) / 2;
  const std::size_t n_pos = truth.edges.size();
  if (n_pos == 0 || n_pos == n_pairs) {
    throw ValidationError(
        "degenerate truth: needs at least one edge and one non-edge");
  }

  std::vector<std::pair<double, bool>> scored;
  scored.reserve(n_pairs);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      scored.emplace_back(std::abs(theta_hat(i, j)),
                          truth.edges.count({i, j}) > 0);
    }
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  const double npos = static_cast<double>(n_pos);
  const double nneg = static_cast<double>(n_pairs - n_pos);
  RocCurve roc;
  roc.points.reserve(n_pairs + 1);
  roc.points.emplace_back(0.0, 0.0);
  std::size_t cum_tp = 0;
  std::size_t cum_fp = 0;
  std::size_t i = 0;
  while (i < scored.size()) {
    // One ROC vertex per distinct score: the midrank tie convention.
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      if (scored[j].second) {
        ++cum_tp;
      } else {
        ++cum_fp;
      }
      ++j;
    }
    roc.points.emplace_back(static_cast<double>(cum_fp) / nneg,
                            static_cast<double>(cum_tp) / npos);
    i = j;
  }

  double auc = 0.0;
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    const auto& [x0, y0] = roc.points[k - 1];
    const auto& [x1, y1] = roc.points[k];
    auc += (x1 - x0) * (y1 + y0) / 2.0;
  }
  roc.auc = auc;
  return roc;
}

ProxyTruth proxy_truth(const DataMatrix& raw, const CvConfig& cfg) {
  EncryptedRelease passthrough;
  passthrough.data = raw;
  passthrough.family = NoiseFamily::kContinuous;
  passthrough.sigma = 0.0;
  const CvResult cv = cv_lambda(passthrough, cfg);
  LassoConfig fit_cfg = cfg.lasso;
  fit_cfg.lambda = cv.chosen_lambda;
  auto [theta, diag] = estimate_from_release(passthrough, fit_cfg, cfg.solver);
  ProxyTruth out;
  out.edges =
      adjacency_of(theta.entries(), PrecisionMatrix::kDefaultEdgeTolerance);
  out.chosen_lambda = cv.chosen_lambda;
  out.low_confidence = raw.n() < raw.p();
  return out;
}

std::vector<TrialReport> run_trials(const TrialScenario& scenario) {
  if (scenario.seeds.empty()) {
    throw ValidationError("run_trials requires at least one seed");
  }
  for (std::size_t i = 0; i < scenario.seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < scenario.seeds.size(); ++j) {
      if (scenario.seeds[i] == scenario.seeds[j]) {
        throw ValidationError("trial seeds must be distinct");
      }
    }
  }

  std::vector<TrialReport> reports;
  for (const auto& snr : scenario.snr_db_levels) {
    TrialReport report;
    report.snr_db = snr;
    report.trials.resize(scenario.seeds.size());

    double shared_lambda = scenario.lambda;
    if (scenario.lambda_rule == LambdaRule::kCvFirstSeed) {
      shared_lambda = cv_pick_lambda(scenario, scenario.seeds.front(), snr);
    }

    // The chain's truth is seed-independent; the sparse generator's is not.
    const int n_trials = static_cast<int>(scenario.seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < n_trials; ++t) {
      const std::uint64_t seed = scenario.seeds[static_cast<std::size_t>(t)];
      TrialOutcome& outcome = report.trials[static_cast<std::size_t>(t)];
      outcome.seed = seed;
      const auto started = std::chrono::steady_clock::now();
      try {
        PrecisionMatrix theta_true =
            scenario.generator == GeneratorKind::kChain
                ? chain_precision(scenario.p)
                : sparse_random_precision(scenario.p, scenario.sparsity,
                                          derive_seed(seed, 1));
        const EdgeSet truth =
            adjacency_of(theta_true, PrecisionMatrix::kDefaultEdgeTolerance);
        double lambda = shared_lambda;
        if (scenario.lambda_rule == LambdaRule::kCvEachTrial) {
          lambda = cv_pick_lambda(scenario, seed, snr);
        }
        const SingleTrialResult r =
            run_single(scenario, seed, snr, lambda, truth);
        outcome.auc = r.auc;
        outcome.epsilon_simple = r.epsilon_simple;
        outcome.lambda = lambda;
      } catch (const std::exception& e) {
        outcome.failed = true;
        outcome.error = e.what();
      }
      outcome.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        started)
              .count();
    }

    double auc_sum = 0.0;
    double eps_sum = 0.0;
    int ok = 0;
    for (const auto& trial : report.trials) {
      if (trial.failed) {
        ++report.failures;
        continue;
      }
      auc_sum += trial.auc;
      if (!std::isnan(trial.epsilon_simple)) eps_sum += trial.epsilon_simple;
      ++ok;
    }
    if (ok > 0) {
      report.auc_mean = auc_sum / ok;
      double var = 0.0;
      for (const auto& trial : report.trials) {
        if (trial.failed) continue;
        var += (trial.auc - report.auc_mean) * (trial.auc - report.auc_mean);
      }
      report.auc_std = std::sqrt(var / ok);  // population std
      report.epsilon_simple_mean = snr.has_value() ? eps_sum / ok : kNan;
    } else {
      report.auc_mean = kNan;
      report.auc_std = kNan;
      report.epsilon_simple_mean = kNan;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace privglasso
