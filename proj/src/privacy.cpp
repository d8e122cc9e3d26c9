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

#include "privglasso/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace privglasso {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double ndtr(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// log Phi(x), stable far into the lower tail where erfc underflows.
double log_ndtr(double x) {
  if (x > -1.0) return std::log(ndtr(x));
  const double t = -x / kSqrt2;
  if (t < 25.0) return std::log(0.5) + std::log(std::erfc(t));
  // Asymptotic expansion Phi(x) ~ phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - ...).
  const double x2 = x * x;
  const double series =
      1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-x) +
         std::log(series);
}

}  // namespace

void validate(const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (spec.family == NoiseFamily::kDiscrete &&
      !(spec.sigma > kDiscreteSigmaFloor)) {
    throw ValidationError(
        "discrete noise requires sigma > 1/sqrt(2*pi), the validity floor of "
        "the integer-Gaussian tail bound");
  }
}

DataMatrix center(const DataMatrix& data) {
  if (data.n() < 1) throw ValidationError("center requires n >= 1");
  DataMatrix out;
  out.values = data.values;
  out.values.rowwise() -= data.values.colwise().mean();
  out.centered = true;
  return out;
}

bool is_centered(const DataMatrix& data) {
  if (data.n() < 1) return false;
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    const auto col = data.values.col(j);
    const double mean = col.mean();
    const double sd =
        std::sqrt((col.array() - mean).square().sum() /
                  static_cast<double>(data.n()));
    if (std::abs(mean) > 1e-10 * (sd + 1.0)) return false;
  }
  return true;
}

bool is_integer_lattice(const DataMatrix& data, double tol) {
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    const double ref = data.values(0, j);
    for (Eigen::Index i = 1; i < data.n(); ++i) {
      const double d = data.values(i, j) - ref;
      if (std::abs(d - std::round(d)) > tol) return false;
    }
  }
  return true;
}

namespace detail {

Eigen::MatrixXd gaussian_noise_matrix(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed) {
  Eigen::MatrixXd noise(n, p);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      noise(i, j) = sigma * rng.next_normal();
    }
  }
  return noise;
}

Eigen::MatrixXd discrete_noise_matrix(Eigen::Index n, Eigen::Index p,
                                      double sigma, std::uint64_t seed) {
  const DiscreteGaussianSampler sampler(sigma);
  Eigen::MatrixXd noise(n, p);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      noise(i, j) = static_cast<double>(sampler.sample(rng));
    }
  }
  return noise;
}

}  // namespace detail

EncryptedRelease encrypt_continuous(const DataMatrix& data,
                                    const NoiseSpec& spec) {
  if (spec.family != NoiseFamily::kContinuous) {
    throw ValidationError("encrypt_continuous requires a continuous spec");
  }
  validate(spec);
  if (!data.centered || !is_centered(data)) {
    throw ValidationError("encrypt_continuous requires centered data");
  }
  EncryptedRelease out;
  out.data.values =
      data.values +
      detail::gaussian_noise_matrix(data.n(), data.p(), spec.sigma, spec.seed);
  out.data.centered = false;
  out.family = NoiseFamily::kContinuous;
  out.sigma = spec.sigma;
  return out;
}

EncryptedRelease encrypt_discrete(const DataMatrix& data,
                                  const NoiseSpec& spec) {
  if (spec.family != NoiseFamily::kDiscrete) {
    throw ValidationError("encrypt_discrete requires a discrete spec");
  }
  validate(spec);
  if (!data.centered || !is_centered(data)) {
    throw ValidationError("encrypt_discrete requires centered data");
  }
  if (!is_integer_lattice(data)) {
    throw ValidationError(
        "encrypt_discrete requires data that was integer-valued before "
        "centering");
  }
  EncryptedRelease out;
  out.data.values =
      data.values +
      detail::discrete_noise_matrix(data.n(), data.p(), spec.sigma, spec.seed);
  out.data.centered = false;
  out.family = NoiseFamily::kDiscrete;
  out.sigma = spec.sigma;
  out.sigma_bar = discrete_variance(spec.sigma);
  return out;
}

DiscreteGaussianSampler::DiscreteGaussianSampler(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  radius_ = static_cast<long long>(std::ceil(12.0 * sigma));
  const std::size_t size = static_cast<std::size_t>(2 * radius_ + 1);
  cdf_.resize(size);
  double total = 0.0;
  for (long long z = -radius_; z <= radius_; ++z) {
    const double w =
        std::exp(-static_cast<double>(z) * static_cast<double>(z) /
                 (2.0 * sigma * sigma));
    total += w;
    cdf_[static_cast<std::size_t>(z + radius_)] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

long long DiscreteGaussianSampler::sample(StreamRng& rng) const {
  const double u = rng.next_uniform();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<long long>(it - cdf_.begin()) - radius_;
}

std::vector<long long> sample_discrete_gaussian(double sigma,
                                                std::uint64_t seed,
                                                std::size_t count) {
  const DiscreteGaussianSampler sampler(sigma);
  StreamRng rng(seed, 0);
  std::vector<long long> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = sampler.sample(rng);
  return out;
}

double discrete_variance(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  const long long radius = static_cast<long long>(std::ceil(12.0 * sigma)) + 1;
  double num = 0.0;
  double den = 0.0;
  for (long long z = -radius; z <= radius; ++z) {
    const double zd = static_cast<double>(z);
    const double w = std::exp(-zd * zd / (2.0 * sigma * sigma));
    den += w;
    num += zd * zd * w;
  }
  const double sbar = num / den;
  // The exact value lies strictly below sigma^2; keep the rounded sum there.
  return std::min(sbar, std::nextafter(sigma * sigma, 0.0));
}

double sensitivity_default(const DataMatrix& data) {
  if (data.n() < 1) throw ValidationError("sensitivity requires n >= 1");
  const double lo = data.values.minCoeff();
  const double hi = data.values.maxCoeff();
  const double range = hi - lo;
  return 2.0 * range * range / static_cast<double>(data.n());
}

double gdp_mu_continuous(const DataMatrix& data, double sigma,
                         double delta_f) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  const double n2 = static_cast<double>(data.n()) * data.n();
  double c = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    c = std::min(c, data.values.col(j).squaredNorm() / n2);
  }
  if (!(c > 0.0)) {
    throw ValidationError(
        "privacy bound undefined: a column has zero energy (C = 0)");
  }
  return delta_f / (sigma * std::sqrt(2.0 * c));
}

double gdp_mu_discrete(const DataMatrix& data, double sigma, double delta_f) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  const double min_abs = data.values.cwiseAbs().minCoeff();
  if (!(min_abs > 0.0)) {
    throw ValidationError(
        "discrete privacy bound assumes no zero entries; the data contains a "
        "zero (K = 0)");
  }
  const double n = static_cast<double>(data.n());
  const double k = min_abs / n;
  return (delta_f + 2.0 * k) / (std::sqrt(2.0 * n) * k * sigma);
}

double delta_of_epsilon(double mu, double epsilon) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  if (epsilon < 0.0) throw ValidationError("epsilon must be nonnegative");
  const double a = -epsilon / mu + mu / 2.0;
  const double b = -epsilon / mu - mu / 2.0;
  const double first = ndtr(a);
  double second;
  if (epsilon > 30.0) {
    second = std::exp(epsilon + log_ndtr(b));  // avoids exp(eps) * 0
  } else {
    second = std::exp(epsilon) * ndtr(b);
  }
  return std::clamp(first - second, 0.0, 1.0);
}

SnrResult snr_accounting(const DataMatrix& data, double snr_db) {
  const DataMatrix centered = data.centered ? data : center(data);
  const double power =
      centered.values.squaredNorm() /
      (static_cast<double>(data.n()) * static_cast<double>(data.p()));
  if (!(power > 0.0)) {
    throw ValidationError("zero signal power: data is constant");
  }
  SnrResult out;
  out.signal_power = power;
  out.sigma_n = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  out.epsilon_simple = sensitivity_default(data) / out.sigma_n;
  return out;
}

PrivacyReport make_privacy_report(const DataMatrix& centered,
                                  const NoiseSpec& spec) {
  validate(spec);
  if (!centered.centered) {
    throw ValidationError("privacy report requires centered data");
  }
  PrivacyReport report;
  report.delta_f = sensitivity_default(centered);
  const double power =
      centered.values.squaredNorm() /
      (static_cast<double>(centered.n()) * static_cast<double>(centered.p()));
  report.signal_power = power;
  report.snr_db = 10.0 * std::log10(power / (spec.sigma * spec.sigma));
  report.epsilon_simple = report.delta_f / spec.sigma;

  if (spec.family == NoiseFamily::kContinuous) {
    const double n2 = static_cast<double>(centered.n()) * centered.n();
    double c = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centered.p(); ++j) {
      c = std::min(c, centered.values.col(j).squaredNorm() / n2);
    }
    report.C = c;
    report.mu = gdp_mu_continuous(centered, spec.sigma, report.delta_f);
  } else {
    const double min_abs = centered.values.cwiseAbs().minCoeff();
    report.K = min_abs / static_cast<double>(centered.n());
    report.mu = gdp_mu_discrete(centered, spec.sigma, report.delta_f);
  }

  report.delta_curve.reserve(50);
  for (int i = 0; i < 50; ++i) {
    const double eps = 10.0 * static_cast<double>(i) / 49.0;
    report.delta_curve.emplace_back(eps, delta_of_epsilon(report.mu, eps));
  }
  return report;
}

}  // namespace privglasso
