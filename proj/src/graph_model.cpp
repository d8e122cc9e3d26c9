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

#include "privglasso/graph_model.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "privglasso/rng.hpp"

namespace privglasso {

namespace {

// Largest dimension for which the covariance is formed by explicit inversion.
constexpr Eigen::Index kMaxSamplingDim = 5000;

}  // namespace

PrecisionMatrix::PrecisionMatrix(Eigen::MatrixXd entries,
                                 double edge_tolerance)
    : entries_(std::move(entries)), edge_tolerance_(edge_tolerance) {
  const Eigen::Index p = entries_.rows();
  if (p == 0 || entries_.cols() != p) {
    throw ValidationError("precision matrix must be square and nonempty");
  }
  if (edge_tolerance_ < 0) {
    throw ValidationError("edge tolerance must be nonnegative");
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (entries_(i, j) != entries_(j, i)) {
        throw ValidationError("precision matrix must be exactly symmetric");
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("precision matrix is not positive definite");
  }
}

PrecisionMatrix chain_precision(Eigen::Index p) {
  if (p < 2) throw ValidationError("chain_precision requires p >= 2");
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    theta(i, i) = 1.0;
    if (i > 0) {
      theta(i, i - 1) = 0.5;
      theta(i - 1, i) = 0.5;
    }
  }
  return PrecisionMatrix(std::move(theta));
}

PrecisionMatrix sparse_random_precision(Eigen::Index p, double sparsity,
                                        std::uint64_t seed) {
  if (p < 2) throw ValidationError("sparse_random_precision requires p >= 2");
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw ValidationError("sparsity must lie in [0, 1]");
  }
  // Fraction of zeros over all p^2 entries equals `sparsity`; the diagonal is
  // always nonzero, so the edge count follows from the zero budget.
  const double pd = static_cast<double>(p);
  const double edges_wanted = (pd * pd * (1.0 - sparsity) - pd) / 2.0;
  const std::size_t max_edges = static_cast<std::size_t>(p) * (p - 1) / 2;
  const std::size_t m = static_cast<std::size_t>(std::clamp(
      std::llround(edges_wanted), 0LL, static_cast<long long>(max_edges)));

  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
  const auto chosen = sample_without_replacement(max_edges, m, seed, 0);
  for (const std::size_t flat : chosen) {
    // Unrank the flat upper-triangle index into (i, j), i < j.
    std::size_t remaining = flat;
    Eigen::Index i = 0;
    std::size_t row_len = static_cast<std::size_t>(p) - 1;
    while (remaining >= row_len) {
      remaining -= row_len;
      --row_len;
      ++i;
    }
    const Eigen::Index j = i + 1 + static_cast<Eigen::Index>(remaining);
    theta(i, j) = 0.1;
    theta(j, i) = 0.1;
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j != i) row_sum += std::abs(theta(i, j));
    }
    theta(i, i) = row_sum + 0.1;  // ridge keeps the matrix strictly PD
  }
  return PrecisionMatrix(std::move(theta));
}

DataMatrix sample_gaussian(const PrecisionMatrix& theta, Eigen::Index n,
                           std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_gaussian requires n >= 1");
  const Eigen::Index p = theta.p();
  if (p > kMaxSamplingDim) {
    throw ValidationError("sample_gaussian supports p <= " +
                          std::to_string(kMaxSamplingDim));
  }
  Eigen::LLT<Eigen::MatrixXd> llt_theta(theta.entries());
  if (llt_theta.info() != Eigen::Success) {
    throw NumericError("factorization of the precision matrix failed");
  }
  const Eigen::MatrixXd sigma =
      llt_theta.solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::LLT<Eigen::MatrixXd> llt_sigma(sigma);
  if (llt_sigma.info() != Eigen::Success) {
    throw NumericError("factorization of the covariance failed");
  }
  const Eigen::MatrixXd chol = llt_sigma.matrixL();

  DataMatrix out;
  out.values.resize(n, p);
  // Row i uses stream i; each output entry is accumulated by one worker in a
  // fixed order, so the result matches a serial fill at any thread count.
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z(k) = rng.next_normal();
    for (Eigen::Index j = 0; j < p; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k <= j; ++k) acc += chol(j, k) * z(k);
      out.values(i, j) = acc;
    }
  }
  out.centered = false;
  return out;
}

EdgeSet adjacency_of(const Eigen::MatrixXd& m, double tol) {
  if (tol < 0) throw ValidationError("edge tolerance must be nonnegative");
  EdgeSet out;
  out.p = m.rows();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > tol) out.edges.emplace(i, j);
    }
  }
  return out;
}

EdgeSet adjacency_of(const PrecisionMatrix& theta, double tol) {
  return adjacency_of(theta.entries(), tol);
}

}  // namespace privglasso
