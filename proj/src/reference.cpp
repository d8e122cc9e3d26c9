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

#include "privglasso/reference.hpp"

#include <Eigen/Cholesky>

#include "privglasso/privacy.hpp"
#include "privglasso/rng.hpp"

namespace privglasso::reference {

Eigen::MatrixXd empirical_covariance_serial(const Eigen::MatrixXd& centered) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index p = centered.cols();
  Eigen::MatrixXd s(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j; k < p; ++k) {
      double acc = 0.0;
      for (Eigen::Index l = 0; l < n; ++l) {
        acc += centered(l, j) * centered(l, k);
      }
      const double v = acc / static_cast<double>(n);
      s(j, k) = v;
      s(k, j) = v;
    }
  }
  return s;
}

Eigen::MatrixXd gaussian_noise_serial(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed) {
  Eigen::MatrixXd noise(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      noise(i, j) = sigma * rng.next_normal();
    }
  }
  return noise;
}

Eigen::MatrixXd discrete_noise_serial(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed) {
  const DiscreteGaussianSampler sampler(sigma);
  Eigen::MatrixXd noise(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      noise(i, j) = static_cast<double>(sampler.sample(rng));
    }
  }
  return noise;
}

Eigen::MatrixXd sample_gaussian_serial(const PrecisionMatrix& theta,
                                       Eigen::Index n, std::uint64_t seed) {
  const Eigen::Index p = theta.p();
  const Eigen::MatrixXd sigma =
      Eigen::LLT<Eigen::MatrixXd>(theta.entries())
          .solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd chol =
      Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
  Eigen::MatrixXd out(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z(k) = rng.next_normal();
    for (Eigen::Index j = 0; j < p; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k <= j; ++k) acc += chol(j, k) * z(k);
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace privglasso::reference
