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

#include "privglasso/graph_model.hpp"

// Plain-loop serial implementations of the OpenMP kernels. The parallel
// kernels must reproduce these bit for bit at any thread count; the test
// suite and the benchmark target compare the two.

namespace privglasso::reference {

Eigen::MatrixXd empirical_covariance_serial(const Eigen::MatrixXd& centered);

Eigen::MatrixXd gaussian_noise_serial(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed);

Eigen::MatrixXd discrete_noise_serial(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed);

Eigen::MatrixXd sample_gaussian_serial(const PrecisionMatrix& theta,
                                       Eigen::Index n, std::uint64_t seed);

}  // namespace privglasso::reference
