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

#include "privglasso/estimator.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace privglasso {

namespace {

constexpr double kSupportMaskTol = 1e-8;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

double auto_psd_floor(const Eigen::MatrixXd& s, const LassoConfig& cfg) {
  if (cfg.psd_floor >= 0.0) return cfg.psd_floor;
  const double mean_diag = s.diagonal().mean();
  return 1e-4 * (mean_diag > 0.0 ? mean_diag : 1.0);
}

// Clamps eigenvalues at `floor`; returns true when a repair happened.
bool floor_eigenvalues(Eigen::MatrixXd& s, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) {
    throw NumericError("eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() >= floor) return false;
  const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(floor);
  s = symmetrized(es.eigenvectors() * clamped.asDiagonal() *
                  es.eigenvectors().transpose());
  return true;
}

double mean_abs_offdiag(const Eigen::MatrixXd& s) {
  const Eigen::Index p = s.rows();
  if (p < 2) return 0.0;
  const double total = s.cwiseAbs().sum() - s.diagonal().cwiseAbs().sum();
  return total / static_cast<double>(p * (p - 1));
}

bool is_pd(const Eigen::MatrixXd& m) {
  return Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success;
}

double log_det_pd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericError("log det requires a positive definite matrix");
  }
  return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}

// Copies W without row/column j into w11.
void partition(const Eigen::MatrixXd& w, Eigen::Index j,
               Eigen::MatrixXd& w11) {
  const Eigen::Index p = w.rows();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (i == j) continue;
    Eigen::Index c = 0;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (k == j) continue;
      w11(r, c) = w(i, k);
      ++c;
    }
    ++r;
  }
}

// Rebuilds theta from the final W and per-column lasso coefficients:
// theta_jj = 1 / (w_jj - w12' beta_j), theta column j = -beta_j * theta_jj.
Eigen::MatrixXd recover_theta(const Eigen::MatrixXd& w,
                              const Eigen::MatrixXd& betas) {
  const Eigen::Index p = w.rows();
  Eigen::MatrixXd theta(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double dot = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i != j) dot += w(i, j) * betas(i, j);
    }
    const double denom = w(j, j) - dot;
    if (!(denom > 0.0)) {
      throw NumericError("coordinate descent produced a non-positive pivot");
    }
    const double tjj = 1.0 / denom;
    theta(j, j) = tjj;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i != j) theta(i, j) = -betas(i, j) * tjj;
    }
  }
  return symmetrized(theta);
}

}  // namespace

void validate(const LassoConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (!(cfg.rho > 0.0)) throw ValidationError("rho must be positive");
  if (!(cfg.tol > 0.0)) throw ValidationError("tol must be positive");
  if (!(cfg.inner_tol > 0.0)) {
    throw ValidationError("inner_tol must be positive");
  }
  if (cfg.max_outer_admm < 1 || cfg.max_sweeps_cd < 1 || cfg.max_inner < 1) {
    throw ValidationError("iteration caps must be at least 1");
  }
}

CovarianceEstimate empirical_covariance(const DataMatrix& data) {
  if (!data.centered || !is_centered(data)) {
    throw ValidationError("empirical_covariance requires centered data");
  }
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  CovarianceEstimate out;
  out.entries.resize(p, p);
  out.kind = CovKind::kRaw;
  // Each (j, k) entry is one sequential dot product, so the parallel fill is
  // bit-identical to a serial one.
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j; k < p; ++k) {
      const double v =
          data.values.col(j).dot(data.values.col(k)) / static_cast<double>(n);
      out.entries(j, k) = v;
      out.entries(k, j) = v;
    }
  }
  return out;
}

CovarianceEstimate debias(const CovarianceEstimate& s_tilde,
                          const EncryptedRelease& release) {
  if (s_tilde.kind != CovKind::kEncrypted) {
    throw ValidationError("debias expects an encrypted covariance");
  }
  double shift = 0.0;
  if (release.family == NoiseFamily::kContinuous) {
    shift = release.sigma * release.sigma;
  } else {
    if (!release.sigma_bar.has_value()) {
      throw ValidationError(
          "discrete release is missing sigma_bar; the debias shift is the "
          "exact noise variance");
    }
    shift = *release.sigma_bar;
  }
  CovarianceEstimate out;
  out.entries = s_tilde.entries;
  out.entries.diagonal().array() -= shift;
  out.kind = CovKind::kDebiased;
  out.maybe_indefinite = !is_pd(out.entries);
  return out;
}

double objective(const Eigen::MatrixXd& theta, const CovarianceEstimate& s_hat,
                 double lambda, bool penalize_diagonal) {
  const double logdet = log_det_pd(theta);
  const double trace = (s_hat.entries.array() * theta.array()).sum();
  double l1 = theta.cwiseAbs().sum();
  if (!penalize_diagonal) l1 -= theta.diagonal().cwiseAbs().sum();
  return logdet - trace - lambda * l1;
}

void lasso_subproblem(const Eigen::MatrixXd& w11, const Eigen::VectorXd& s12,
                      double lambda, const LassoConfig& cfg,
                      Eigen::VectorXd& beta) {
  const Eigen::Index m = w11.rows();
  if (w11.cols() != m || s12.size() != m || beta.size() != m) {
    throw ValidationError("lasso subproblem dimensions disagree");
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(w11(k, k) > 0.0)) {
      throw NumericError("lasso subproblem requires a positive diagonal");
    }
  }
  Eigen::VectorXd grad = w11 * beta;
  for (int it = 0; it < cfg.max_inner; ++it) {
    double max_delta = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double akk = w11(k, k);
      const double partial = s12(k) - (grad(k) - akk * beta(k));
      const double updated = soft_threshold(partial, lambda) / akk;
      const double delta = updated - beta(k);
      if (delta != 0.0) {
        grad.noalias() += w11.col(k) * delta;
        beta(k) = updated;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta <= cfg.inner_tol) break;
  }
}

Eigen::VectorXd lasso_subproblem(const Eigen::MatrixXd& w11,
                                 const Eigen::VectorXd& s12, double lambda,
                                 const LassoConfig& cfg) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(s12.size());
  lasso_subproblem(w11, s12, lambda, cfg, beta);
  return beta;
}

std::pair<PrecisionMatrix, SolveDiagnostics> glasso_cd(
    const CovarianceEstimate& s_hat, const LassoConfig& cfg) {
  validate(cfg);
  const Eigen::Index p = s_hat.p();
  if (p < 2) throw ValidationError("glasso_cd requires p >= 2");

  SolveDiagnostics diag;
  diag.returned = ReturnedIterate::kCd;
  Eigen::MatrixXd s = symmetrized(s_hat.entries);
  diag.input_repaired = floor_eigenvalues(s, auto_psd_floor(s, cfg));

  Eigen::MatrixXd w = s;
  if (cfg.penalize_diagonal) w.diagonal().array() += cfg.lambda;
  // The diagonal of W stays fixed from here on.

  Eigen::MatrixXd betas = Eigen::MatrixXd::Zero(p, p);
  const double sweep_scale = mean_abs_offdiag(s);

  Eigen::MatrixXd w11(p - 1, p - 1);
  Eigen::VectorXd s12(p - 1), beta(p - 1), w12(p - 1);

  int sweep = 0;
  for (sweep = 1; sweep <= cfg.max_sweeps_cd; ++sweep) {
    double w_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      partition(w, j, w11);
      Eigen::Index r = 0;
      for (Eigen::Index i = 0; i < p; ++i) {
        if (i == j) continue;
        s12(r) = s(i, j);
        beta(r) = betas(i, j);
        ++r;
      }
      lasso_subproblem(w11, s12, cfg.lambda, cfg, beta);
      w12.noalias() = w11 * beta;
      r = 0;
      for (Eigen::Index i = 0; i < p; ++i) {
        if (i == j) continue;
        w_change = std::max(w_change, std::abs(w(i, j) - w12(r)));
        w(i, j) = w12(r);
        w(j, i) = w12(r);
        betas(i, j) = beta(r);
        ++r;
      }
    }
    // Dual merit of the sweep; the column updates increase it monotonically.
    diag.objective_trace.push_back(log_det_pd(w));
    if (w_change <= cfg.tol * sweep_scale) {
      diag.converged = true;
      break;
    }
  }
  diag.iterations = std::min(sweep, cfg.max_sweeps_cd);

  Eigen::MatrixXd theta = recover_theta(w, betas);
  CovarianceEstimate solved{s, s_hat.kind, false};
  diag.kkt_residual =
      kkt_residual(theta, solved, cfg.lambda, cfg.penalize_diagonal);
  return {PrecisionMatrix(std::move(theta)), std::move(diag)};
}

std::pair<PrecisionMatrix, SolveDiagnostics> glasso_admm(
    const CovarianceEstimate& s_hat, const LassoConfig& cfg) {
  validate(cfg);
  const Eigen::Index p = s_hat.p();
  if (p < 2) throw ValidationError("glasso_admm requires p >= 2");

  SolveDiagnostics diag;
  const Eigen::MatrixXd s = symmetrized(s_hat.entries);
  const double rho = cfg.rho;
  const double floor = auto_psd_floor(s, cfg);

  // Z starts at the elementwise inverse of a floored diagonal.
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    z(i, i) = 1.0 / std::max(s(i, i), floor);
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd theta(p, p), z_old(p, p);

  const CovarianceEstimate solved{s, s_hat.kind, s_hat.maybe_indefinite};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  const double stop = cfg.tol * static_cast<double>(p);

  int iter = 0;
  for (iter = 1; iter <= cfg.max_outer_admm; ++iter) {
    // theta step: rho*theta - theta^{-1} = rho(z - u) - s, solved by mapping
    // the eigenvalues d -> (d + sqrt(d^2 + 4 rho)) / (2 rho).
    es.compute(rho * (z - u) - s);
    if (es.info() != Eigen::Success) {
      throw NumericError("eigendecomposition failed in the theta step");
    }
    const Eigen::ArrayXd d = es.eigenvalues().array();
    const Eigen::VectorXd mapped =
        ((d + (d.square() + 4.0 * rho).sqrt()) / (2.0 * rho)).matrix();
    theta = symmetrized(es.eigenvectors() * mapped.asDiagonal() *
                        es.eigenvectors().transpose());

    z_old = z;
    const double kappa = cfg.lambda / rho;
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = 0; i < p; ++i) {
        const double v = theta(i, j) + u(i, j);
        z(i, j) = (!cfg.penalize_diagonal && i == j) ? v
                                                     : soft_threshold(v, kappa);
      }
    }
    u += theta - z;

    diag.primal_residual = (theta - z).norm();
    diag.dual_residual = rho * (z - z_old).norm();
    diag.objective_trace.push_back(
        objective(theta, solved, cfg.lambda, cfg.penalize_diagonal));
    if (diag.primal_residual < stop && diag.dual_residual < stop) {
      diag.converged = true;
      break;
    }
  }
  diag.iterations = std::min(iter, cfg.max_outer_admm);

  // Prefer the exactly sparse Z iterate; fall back to theta with Z's support.
  Eigen::MatrixXd result;
  if (is_pd(z)) {
    result = z;
    diag.returned = ReturnedIterate::kZ;
  } else {
    Eigen::MatrixXd masked = theta;
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(z(i, j)) <= kSupportMaskTol) masked(i, j) = 0.0;
      }
    }
    masked = symmetrized(masked);
    if (is_pd(masked)) {
      result = std::move(masked);
      diag.returned = ReturnedIterate::kThetaMasked;
    } else {
      result = theta;
      diag.returned = ReturnedIterate::kTheta;
    }
  }
  diag.kkt_residual =
      kkt_residual(result, solved, cfg.lambda, cfg.penalize_diagonal);
  return {PrecisionMatrix(std::move(result)), std::move(diag)};
}

double kkt_residual(const Eigen::MatrixXd& theta,
                    const CovarianceEstimate& s_hat, double lambda,
                    bool penalize_diagonal) {
  const Eigen::Index p = theta.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(theta);
  if (llt.info() != Eigen::Success) {
    throw NumericError("kkt_residual requires a positive definite theta");
  }
  const Eigen::MatrixXd grad =
      llt.solve(Eigen::MatrixXd::Identity(p, p)) - s_hat.entries;
  const double zero_tol = 1e-12 * theta.cwiseAbs().maxCoeff();
  double residual = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      double r;
      if (!penalize_diagonal && i == j) {
        r = std::abs(grad(i, j));
      } else if (std::abs(theta(i, j)) > zero_tol) {
        const double sign = theta(i, j) > 0.0 ? 1.0 : -1.0;
        r = std::abs(grad(i, j) - lambda * sign);
      } else {
        r = std::max(0.0, std::abs(grad(i, j)) - lambda);
      }
      residual = std::max(residual, r);
    }
  }
  return residual;
}

std::pair<PrecisionMatrix, SolveDiagnostics> estimate_from_release(
    const EncryptedRelease& release, const LassoConfig& cfg,
    SolverKind solver) {
  if (release.sigma < 0.0) {
    throw ValidationError("release sigma must be nonnegative");
  }
  const DataMatrix centered = center(release.data);
  CovarianceEstimate s_tilde = empirical_covariance(centered);
  s_tilde.kind = CovKind::kEncrypted;
  const CovarianceEstimate s_hat = debias(s_tilde, release);
  return solver == SolverKind::kCoordinateDescent ? glasso_cd(s_hat, cfg)
                                                  : glasso_admm(s_hat, cfg);
}

const char* to_string(SolverKind solver) {
  return solver == SolverKind::kCoordinateDescent ? "cd" : "admm";
}

const char* to_string(ReturnedIterate it) {
  switch (it) {
    case ReturnedIterate::kCd: return "cd";
    case ReturnedIterate::kZ: return "z";
    case ReturnedIterate::kThetaMasked: return "theta_masked";
    case ReturnedIterate::kTheta: return "theta";
  }
  return "unknown";
}

}  // namespace privglasso
