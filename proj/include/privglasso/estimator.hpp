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

#include <string>
#include <utility>
#include <vector>

#include "privglasso/graph_model.hpp"
#include "privglasso/privacy.hpp"

namespace privglasso {

enum class CovKind { kRaw, kEncrypted, kDebiased };

struct CovarianceEstimate {
  Eigen::MatrixXd entries;
  CovKind kind = CovKind::kRaw;
  // Debiasing can push small eigenvalues below zero; recorded here.
  bool maybe_indefinite = false;

  Eigen::Index p() const { return entries.rows(); }
};

struct LassoConfig {
  double lambda = 0.1;
  double rho = 1.0;          // ADMM quadratic penalty
  double tol = 1e-6;
  int max_outer_admm = 500;
  int max_sweeps_cd = 100;
  double inner_tol = 1e-9;   // lasso subproblem coordinate-change tolerance
  int max_inner = 1000;
  double psd_floor = -1.0;   // eigenvalue floor; < 0 means 1e-4 * mean diagonal
  bool penalize_diagonal = true;
};

void validate(const LassoConfig& cfg);

enum class ReturnedIterate { kCd, kZ, kThetaMasked, kTheta };

struct SolveDiagnostics {
  int iterations = 0;
  // ADMM: penalized log-likelihood J per iteration. Coordinate descent: the
  // dual merit log det W per sweep, which the sweeps increase monotonically
  // (the primal J is not monotone along this path).
  std::vector<double> objective_trace;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
  bool input_repaired = false;  // eigenvalue floor was applied to the input
  ReturnedIterate returned = ReturnedIterate::kCd;
};

enum class SolverKind { kCoordinateDescent, kAdmm };

// S = X^T X / n; requires centered input.
CovarianceEstimate empirical_covariance(const DataMatrix& data);

// Subtracts sigma^2 (continuous) or sigma_bar (discrete) from the diagonal.
CovarianceEstimate debias(const CovarianceEstimate& s_tilde,
                          const EncryptedRelease& release);

// Penalized log-likelihood J = log det(theta) - Tr(S theta) - lambda *
// ||theta||_1. The l1 norm runs over all entries unless penalize_diagonal is
// false.
double objective(const Eigen::MatrixXd& theta, const CovarianceEstimate& s_hat,
                 double lambda, bool penalize_diagonal = true);

inline double soft_threshold(double x, double kappa) {
  if (x > kappa) return x - kappa;
  if (x < -kappa) return x + kappa;
  return 0.0;
}

// argmin_beta (1/2) beta^T W11 beta - s12^T beta + lambda ||beta||_1 by
// cyclic coordinate descent. `beta` is the warm start and the result.
void lasso_subproblem(const Eigen::MatrixXd& w11, const Eigen::VectorXd& s12,
                      double lambda, const LassoConfig& cfg,
                      Eigen::VectorXd& beta);
Eigen::VectorXd lasso_subproblem(const Eigen::MatrixXd& w11,
                                 const Eigen::VectorXd& s12, double lambda,
                                 const LassoConfig& cfg);

// Column-wise coordinate descent on W = S + lambda I (the diagonal of W is
// held fixed); indefinite inputs are repaired by an eigenvalue floor first.
std::pair<PrecisionMatrix, SolveDiagnostics> glasso_cd(
    const CovarianceEstimate& s_hat, const LassoConfig& cfg);

// ADMM with the closed-form log-det proximal step; handles indefinite inputs
// without repair. Returns the exactly sparse Z iterate when it is positive
// definite, otherwise the (always positive definite) theta iterate with Z's
// support imposed.
std::pair<PrecisionMatrix, SolveDiagnostics> glasso_admm(
    const CovarianceEstimate& s_hat, const LassoConfig& cfg);

// Largest violation of the stationarity conditions of J at theta:
// |(theta^{-1} - S)_ij - lambda sign(theta_ij)| on the support and
// max(0, |(theta^{-1} - S)_ij| - lambda) off it.
double kkt_residual(const Eigen::MatrixXd& theta,
                    const CovarianceEstimate& s_hat, double lambda,
                    bool penalize_diagonal = true);

// center -> empirical covariance -> debias -> chosen solver.
std::pair<PrecisionMatrix, SolveDiagnostics> estimate_from_release(
    const EncryptedRelease& release, const LassoConfig& cfg,
    SolverKind solver);

const char* to_string(SolverKind solver);
const char* to_string(ReturnedIterate it);

}  // namespace privglasso
