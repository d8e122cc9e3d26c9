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

#include "privglasso/modelselect.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "privglasso/rng.hpp"

namespace privglasso {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

CovarianceEstimate debiased_covariance(const Eigen::MatrixXd& rows,
                                       const EncryptedRelease& release) {
  DataMatrix block{rows, false};
  CovarianceEstimate cov = empirical_covariance(center(block));
  cov.kind = CovKind::kEncrypted;
  EncryptedRelease meta = release;  // same family/sigma, rows replaced
  meta.data = DataMatrix{};
  return debias(cov, meta);
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& values,
                            const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        values.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

}  // namespace

std::vector<double> default_lambda_grid(const CovarianceEstimate& s_hat,
                                        int size) {
  if (size < 1) throw ValidationError("grid size must be at least 1");
  const Eigen::Index p = s_hat.p();
  double max_off = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i != j) max_off = std::max(max_off, std::abs(s_hat.entries(i, j)));
    }
  }
  if (!(max_off > 0.0)) max_off = 1.0;
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) {
    const double t =
        size == 1 ? 0.0
                  : -2.5 * static_cast<double>(i) / static_cast<double>(size - 1);
    grid[static_cast<std::size_t>(i)] = max_off * std::pow(10.0, t);
  }
  return grid;  // descending: max_off * 10^0 ... max_off * 10^-2.5
}

CvResult cv_lambda(const EncryptedRelease& release, const CvConfig& cfg) {
  const Eigen::Index n = release.data.n();
  const Eigen::Index p = release.data.p();
  if (cfg.k_folds < 2) throw ValidationError("cross-validation requires K >= 2");
  if (n < cfg.k_folds) throw ValidationError("cross-validation requires n >= K");
  if (p < 2) throw ValidationError("cross-validation requires p >= 2");

  const CovarianceEstimate full = debiased_covariance(release.data.values, release);

  std::vector<double> grid = cfg.grid;
  if (grid.empty()) grid = default_lambda_grid(full, cfg.grid_size);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) {
      throw ValidationError("lambda grid must be strictly descending");
    }
  }
  const int n_lambda = static_cast<int>(grid.size());
  const int k_folds = cfg.k_folds;

  // Seeded shuffle, then fold f takes every K-th row: a true partition.
  const auto perm =
      random_permutation(static_cast<std::size_t>(n), cfg.seed, 0);
  std::vector<std::vector<std::size_t>> fold_rows(
      static_cast<std::size_t>(k_folds));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    fold_rows[i % static_cast<std::size_t>(k_folds)].push_back(perm[i]);
  }

  std::vector<CovarianceEstimate> train_cov(static_cast<std::size_t>(k_folds));
  std::vector<CovarianceEstimate> valid_cov(static_cast<std::size_t>(k_folds));
  for (int f = 0; f < k_folds; ++f) {
    std::vector<std::size_t> train;
    for (int g = 0; g < k_folds; ++g) {
      if (g == f) continue;
      train.insert(train.end(), fold_rows[static_cast<std::size_t>(g)].begin(),
                   fold_rows[static_cast<std::size_t>(g)].end());
    }
    train_cov[static_cast<std::size_t>(f)] =
        debiased_covariance(gather_rows(release.data.values, train), release);
    valid_cov[static_cast<std::size_t>(f)] = debiased_covariance(
        gather_rows(release.data.values,
                    fold_rows[static_cast<std::size_t>(f)]),
        release);
  }

  // Fold x lambda fits are independent; the flat loop parallelizes without
  // changing any result.
  Eigen::MatrixXd mse(k_folds, n_lambda);
  mse.setConstant(kNan);
  const int tasks = k_folds * n_lambda;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < tasks; ++t) {
    const int f = t / n_lambda;
    const int l = t % n_lambda;
    LassoConfig fit_cfg = cfg.lasso;
    fit_cfg.lambda = grid[static_cast<std::size_t>(l)];
    try {
      auto [theta, diag] =
          cfg.solver == SolverKind::kCoordinateDescent
              ? glasso_cd(train_cov[static_cast<std::size_t>(f)], fit_cfg)
              : glasso_admm(train_cov[static_cast<std::size_t>(f)], fit_cfg);
      if (!diag.converged) continue;  // excluded, counted below
      const Eigen::MatrixXd predicted =
          Eigen::LLT<Eigen::MatrixXd>(theta.entries())
              .solve(Eigen::MatrixXd::Identity(p, p));
      const double err =
          (predicted - valid_cov[static_cast<std::size_t>(f)].entries)
              .squaredNorm() /
          static_cast<double>(p * p);
      mse(f, l) = err;
    } catch (const std::exception&) {
      // non-convergent or failed fit: excluded from the fold mean
    }
  }

  CvResult result;
  result.lambda_grid = grid;
  result.rule = cfg.rule;
  result.mse_mean.assign(grid.size(), kNan);
  result.mse_std.assign(grid.size(), kNan);
  result.nonconverged.assign(grid.size(), 0);
  for (int l = 0; l < n_lambda; ++l) {
    double sum = 0.0;
    int count = 0;
    for (int f = 0; f < k_folds; ++f) {
      if (std::isnan(mse(f, l))) continue;
      sum += mse(f, l);
      ++count;
    }
    result.nonconverged[static_cast<std::size_t>(l)] = k_folds - count;
    if (count == 0) continue;
    const double mean = sum / count;
    double var = 0.0;
    for (int f = 0; f < k_folds; ++f) {
      if (std::isnan(mse(f, l))) continue;
      var += (mse(f, l) - mean) * (mse(f, l) - mean);
    }
    result.mse_mean[static_cast<std::size_t>(l)] = mean;
    result.mse_std[static_cast<std::size_t>(l)] =
        std::sqrt(var / count);  // population std across folds
  }

  // Edge counts come from fits on the full data.
  result.edge_counts.assign(grid.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (int l = 0; l < n_lambda; ++l) {
    LassoConfig fit_cfg = cfg.lasso;
    fit_cfg.lambda = grid[static_cast<std::size_t>(l)];
    try {
      auto [theta, diag] = cfg.solver == SolverKind::kCoordinateDescent
                               ? glasso_cd(full, fit_cfg)
                               : glasso_admm(full, fit_cfg);
      result.edge_counts[static_cast<std::size_t>(l)] = static_cast<int>(
          adjacency_of(theta.entries(), PrecisionMatrix::kDefaultEdgeTolerance)
              .edges.size());
    } catch (const std::exception&) {
      result.edge_counts[static_cast<std::size_t>(l)] = 0;
    }
  }

  bool any_edges = false;
  for (const int e : result.edge_counts) any_edges = any_edges || e > 0;
  if (!any_edges) {
    throw ValidationError(
        "every lambda in the grid produced an empty graph; retry with "
        "smaller lambdas");
  }

  // MinMse: smallest mean MSE among lambdas with a nonempty graph; ties go to
  // the larger lambda (the grid is descending).
  double best = std::numeric_limits<double>::infinity();
  int best_l = -1;
  for (int l = 0; l < n_lambda; ++l) {
    const double m = result.mse_mean[static_cast<std::size_t>(l)];
    if (std::isnan(m) || result.edge_counts[static_cast<std::size_t>(l)] == 0) {
      continue;
    }
    if (m < best) {
      best = m;
      best_l = l;
    }
  }
  if (best_l < 0) {
    throw ValidationError(
        "no lambda produced both a converged fit and a nonempty graph");
  }
  result.lambda_min_mse = grid[static_cast<std::size_t>(best_l)];

  // DropKnee: scanning from the largest lambda, the first mean MSE inside the
  // plateau band (with a nonempty graph).
  double plateau = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (const double m : result.mse_mean) {
    if (std::isnan(m)) continue;
    plateau = std::min(plateau, m);
    worst = std::max(worst, m);
  }
  const double band = plateau + cfg.knee_band * (worst - plateau);
  result.lambda_drop_knee = result.lambda_min_mse;
  for (int l = 0; l < n_lambda; ++l) {
    const double m = result.mse_mean[static_cast<std::size_t>(l)];
    if (std::isnan(m) || result.edge_counts[static_cast<std::size_t>(l)] == 0) {
      continue;
    }
    if (m <= band) {
      result.lambda_drop_knee = grid[static_cast<std::size_t>(l)];
      break;
    }
  }

  result.chosen_lambda = cfg.rule == CvRule::kMinMse ? result.lambda_min_mse
                                                     : result.lambda_drop_knee;
  return result;
}

}  // namespace privglasso
