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

#include "privglasso/graph_model.hpp"
#include "privglasso/rng.hpp"

namespace privglasso {

enum class NoiseFamily { kContinuous, kDiscrete };

// Smallest noise scale for which the discrete-Gaussian tail comparison with
// the continuous Gaussian is valid: sigma > 1/sqrt(2*pi).
inline constexpr double kDiscreteSigmaFloor = 0.3989422804014327;

// Publisher-side noise description. The seed never leaves the publisher.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kContinuous;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

void validate(const NoiseSpec& spec);

// What the publisher releases: the noised data plus the noise family and
// scale (and, for discrete noise, its exact variance). No seed.
struct EncryptedRelease {
  DataMatrix data;
  NoiseFamily family = NoiseFamily::kContinuous;
  double sigma = 0.0;  // 0 is the consumer-side "no noise" passthrough
  std::optional<double> sigma_bar;  // variance of the discrete noise
};

// Publisher's audit record: GDP parameter, sensitivity, the data-dependent
// constants entering the bound, and the (epsilon, delta) trade-off curve.
struct PrivacyReport {
  double mu = 0.0;
  double delta_f = 0.0;
  std::optional<double> C;  // min normalized column energy (continuous bound)
  std::optional<double> K;  // min normalized entry magnitude (discrete bound)
  double epsilon_simple = 0.0;
  double snr_db = 0.0;
  double signal_power = 0.0;
  std::string power_convention = "mean squared entry of the centered data";
  std::vector<std::pair<double, double>> delta_curve;
};

// Subtracts the column means; the result is flagged centered.
DataMatrix center(const DataMatrix& data);

// True when each column mean is within 1e-10 * (column std + 1) of zero.
bool is_centered(const DataMatrix& data);

// True when, per column, all entries share one fractional offset within
// 1e-9, i.e. the data was integer-valued before (column-wise) centering.
bool is_integer_lattice(const DataMatrix& data, double tol = 1e-9);

// X + E with E i.i.d. N(0, sigma^2); requires centered input.
EncryptedRelease encrypt_continuous(const DataMatrix& data,
                                    const NoiseSpec& spec);

// X + E with E i.i.d. integer-valued Gaussian draws; requires centered input
// that was integer-valued before centering.
EncryptedRelease encrypt_discrete(const DataMatrix& data,
                                  const NoiseSpec& spec);

// Inverse-CDF sampler for the Gaussian distribution restricted to the
// integers, truncated at ceil(12*sigma) where the tail mass is below 1e-30.
class DiscreteGaussianSampler {
 public:
  explicit DiscreteGaussianSampler(double sigma);
  long long sample(StreamRng& rng) const;
  long long radius() const { return radius_; }

 private:
  long long radius_;
  std::vector<double> cdf_;  // cumulative mass over [-radius, radius]
};

// count i.i.d. draws with P[x] proportional to exp(-x^2 / (2 sigma^2)).
std::vector<long long> sample_discrete_gaussian(double sigma,
                                                std::uint64_t seed,
                                                std::size_t count);

// Exact variance of the integer-valued Gaussian, by truncated series. The
// true value provably lies in (0, sigma^2); the rounded sum is kept strictly
// inside that interval.
double discrete_variance(double sigma);

// Default sensitivity 2 * (max - min)^2 / n over all entries.
double sensitivity_default(const DataMatrix& data);

// GDP parameter of the continuous mechanism: delta_f / (sigma * sqrt(2C)),
// C = min_k (1/n^2) sum_l X_lk^2.
double gdp_mu_continuous(const DataMatrix& data, double sigma, double delta_f);

// GDP parameter of the discrete mechanism: (delta_f + 2K) / (sqrt(2n) K
// sigma), K = (1/n) min |x_li|; every entry must be nonzero.
double gdp_mu_discrete(const DataMatrix& data, double sigma, double delta_f);

// Dual (epsilon, delta) curve of mu-GDP:
// delta = Phi(-eps/mu + mu/2) - exp(eps) * Phi(-eps/mu - mu/2),
// with the second term evaluated in log space for large eps.
double delta_of_epsilon(double mu, double epsilon);

struct SnrResult {
  double sigma_n = 0.0;
  double epsilon_simple = 0.0;
  double signal_power = 0.0;
};

// Noise scale for a target SNR (dB). Signal power is the mean squared entry
// of the centered data; epsilon_simple = delta_f / sigma_n.
SnrResult snr_accounting(const DataMatrix& data, double snr_db);

// Full audit record for publishing `centered` with `spec`.
PrivacyReport make_privacy_report(const DataMatrix& centered,
                                  const NoiseSpec& spec);

namespace detail {
// n x p matrix of N(0, sigma^2) draws; row i comes from stream i of `seed`,
// so row blocks can be generated concurrently without changing the result.
Eigen::MatrixXd gaussian_noise_matrix(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed);
// Same layout for integer-valued Gaussian noise.
Eigen::MatrixXd discrete_noise_matrix(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed);
}  // namespace detail

}  // namespace privglasso
