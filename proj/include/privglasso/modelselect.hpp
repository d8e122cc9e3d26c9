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
#include <vector>

#include "privglasso/estimator.hpp"

namespace privglasso {

enum class CvRule { kMinMse, kDropKnee };

struct CvConfig {
  int k_folds = 5;
  // Descending lambda values; empty means the default grid built from the
  // debiased covariance of the full data.
  std::vector<double> grid;
  int grid_size = 15;  // size of the default grid when `grid` is empty
  CvRule rule = CvRule::kMinMse;
  double knee_band = 0.05;  // fraction of the MSE drop treated as plateau
  SolverKind solver = SolverKind::kCoordinateDescent;
  LassoConfig lasso;  // lambda is taken from the grid
  std::uint64_t seed = 0;
};

struct CvResult {
  std::vector<double> lambda_grid;
  std::vector<double> mse_mean;
  std::vector<double> mse_std;
  std::vector<int> edge_counts;    // edges of the full-data fit per lambda
  std::vector<int> nonconverged;   // folds excluded from the mean per lambda
  double chosen_lambda = 0.0;      // per the configured rule
  double lambda_min_mse = 0.0;
  double lambda_drop_knee = 0.0;
  CvRule rule = CvRule::kMinMse;
};

// 15 logarithmically spaced values over [10^-2.5, 1] * max |off-diag(s_hat)|,
// descending.
std::vector<double> default_lambda_grid(const CovarianceEstimate& s_hat,
                                        int size = 15);

// K-fold cross-validation of the l1 strength on an encrypted release. Each
// fold scores the mean squared entrywise difference between the fitted
// inverse precision and the debiased validation covariance. Fold x lambda
// fits are independent and run in parallel with results identical to a
// sequential run.
CvResult cv_lambda(const EncryptedRelease& release, const CvConfig& cfg);

}  // namespace privglasso
