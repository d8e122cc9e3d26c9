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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "privglasso/modelselect.hpp"

namespace privglasso {

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0)..(1,1)
  double auc = 0.0;
};

// Scores each pair (i,j), i<j by |theta_hat(i,j)| against the edge labels of
// `truth`; ties follow the midrank convention, so the trapezoidal AUC equals
// the Mann-Whitney statistic.
RocCurve roc_auc(const Eigen::MatrixXd& theta_hat, const EdgeSet& truth);

struct ProxyTruth {
  EdgeSet edges;
  double chosen_lambda = 0.0;
  bool low_confidence = false;  // n < p
};

// Edge set of the vanilla graphical lasso on the raw data at the CV-chosen
// lambda; used as ground truth when no true structure is known.
ProxyTruth proxy_truth(const DataMatrix& raw, const CvConfig& cfg);

enum class GeneratorKind { kChain, kSparseRandom };
enum class LambdaRule { kFixed, kCvEachTrial, kCvFirstSeed };

struct TrialScenario {
  GeneratorKind generator = GeneratorKind::kChain;
  Eigen::Index p = 50;
  Eigen::Index n = 5000;
  double sparsity = 0.99;  // sparse generator only
  // One report per level; nullopt means no encryption.
  std::vector<std::optional<double>> snr_db_levels;
  NoiseFamily family = NoiseFamily::kContinuous;
  // > 0: samples are scaled by this factor and rounded, producing the
  // integer-valued data required by the discrete mechanism.
  double integer_scale = 0.0;
  SolverKind solver = SolverKind::kCoordinateDescent;
  LambdaRule lambda_rule = LambdaRule::kFixed;
  double lambda = 0.1;
  CvConfig cv;
  LassoConfig lasso;
  std::vector<std::uint64_t> seeds;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  double auc = 0.0;
  double epsilon_simple = 0.0;  // NaN when no noise was added
  double lambda = 0.0;
  double seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct TrialReport {
  std::optional<double> snr_db;
  std::vector<TrialOutcome> trials;
  double auc_mean = 0.0;
  double auc_std = 0.0;  // population std over successful trials
  double epsilon_simple_mean = 0.0;
  int failures = 0;
};

// generate -> encrypt at each SNR -> estimate -> AUC against the generator's
// true edge set, repeated over seeds. Trials are independent and run in
// parallel; the report is identical to a sequential run.
std::vector<TrialReport> run_trials(const TrialScenario& scenario);

}  // namespace privglasso
