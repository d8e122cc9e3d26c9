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

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <utility>

#include "privglasso/errors.hpp"

namespace privglasso {

// n x p sample matrix, rows are observations.
struct DataMatrix {
  Eigen::MatrixXd values;
  bool centered = false;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index p() const { return values.cols(); }
};

// Symmetric positive-definite precision matrix; off-diagonal support is the
// graph. Symmetry and positive definiteness are checked at construction.
class PrecisionMatrix {
 public:
  static constexpr double kDefaultEdgeTolerance = 1e-6;

  explicit PrecisionMatrix(Eigen::MatrixXd entries,
                           double edge_tolerance = kDefaultEdgeTolerance);

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index p() const { return entries_.rows(); }
  double edge_tolerance() const { return edge_tolerance_; }

 private:
  Eigen::MatrixXd entries_;
  double edge_tolerance_;
};

// Undirected edge set over p vertices, pairs stored with i < j.
struct EdgeSet {
  Eigen::Index p = 0;
  std::set<std::pair<Eigen::Index, Eigen::Index>> edges;

  bool operator==(const EdgeSet& other) const {
    return p == other.p && edges == other.edges;
  }
};

// Tridiagonal chain: unit diagonal, 0.5 couplings between neighbours.
PrecisionMatrix chain_precision(Eigen::Index p);

// Random sparse precision matrix: the fraction of zero entries matches
// `sparsity` (within one edge slot), nonzero off-diagonals are 0.1, and the
// diagonal is the row sum of off-diagonal magnitudes plus a 0.1 ridge so the
// matrix is strictly positive definite.
PrecisionMatrix sparse_random_precision(Eigen::Index p, double sparsity,
                                        std::uint64_t seed);

// n i.i.d. rows from N(0, theta^{-1}); deterministic given seed.
DataMatrix sample_gaussian(const PrecisionMatrix& theta, Eigen::Index n,
                           std::uint64_t seed);

// Edges {(i,j) : i < j, |m(i,j)| > tol}.
EdgeSet adjacency_of(const Eigen::MatrixXd& m, double tol);
EdgeSet adjacency_of(const PrecisionMatrix& theta, double tol);
inline EdgeSet adjacency_of(const PrecisionMatrix& theta) {
  return adjacency_of(theta, theta.edge_tolerance());
}

}  // namespace privglasso
