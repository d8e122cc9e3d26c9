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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "privglasso/privacy.hpp"

using namespace privglasso;

namespace {

// Series oracle for the integer Gaussian, independent of the sampler: mass
// over |z| <= ceil(12 sigma).
double series_pmf(double sigma, long long x) {
  const long long radius = static_cast<long long>(std::ceil(12.0 * sigma));
  double total = 0.0;
  for (long long z = -radius; z <= radius; ++z) {
    total += std::exp(-static_cast<double>(z) * z / (2.0 * sigma * sigma));
  }
  return std::exp(-static_cast<double>(x) * x / (2.0 * sigma * sigma)) / total;
}

double series_variance(double sigma) {
  const long long radius = static_cast<long long>(std::ceil(12.0 * sigma)) + 2;
  double total = 0.0;
  double second = 0.0;
  for (long long z = -radius; z <= radius; ++z) {
    const double w =
        std::exp(-static_cast<double>(z) * z / (2.0 * sigma * sigma));
    total += w;
    second += static_cast<double>(z) * z * w;
  }
  return second / total;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

DataMatrix unit_power_data() {
  // Column means zero, every entry +-1: signal power exactly 1.
  DataMatrix d;
  d.values.resize(4, 2);
  d.values << 1, -1, -1, 1, 1, -1, -1, 1;
  d.centered = true;
  return d;
}

}  // namespace

TEST_CASE("center subtracts column means") {
  DataMatrix d;
  d.values.resize(2, 1);
  d.values << 1, 3;
  const DataMatrix c = center(d);
  CHECK(c.values(0, 0) == -1.0);
  CHECK(c.values(1, 0) == 1.0);
  CHECK(c.centered);
}

TEST_CASE("center is idempotent") {
  DataMatrix d;
  d.values.resize(3, 2);
  d.values << 0.25, -4, 1.5, 2, -1.75, 2;
  const DataMatrix once = center(d);
  const DataMatrix twice = center(once);
  CHECK((twice.values - once.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("center leaves tiny column means on random data") {
  DataMatrix d;
  d.values.resize(100, 5);
  StreamRng rng(5, 0);
  for (Eigen::Index i = 0; i < 100; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      d.values(i, j) = 10.0 * rng.next_normal() + 3.0;
    }
  }
  const DataMatrix c = center(d);
  CHECK(c.values.colwise().mean().cwiseAbs().maxCoeff() < 1e-10);
  CHECK(is_centered(c));
}

TEST_CASE("encrypt_continuous adds vanishing noise for tiny sigma") {
  DataMatrix d;
  d.values = Eigen::MatrixXd::Zero(20, 3);
  StreamRng rng(8, 0);
  for (Eigen::Index i = 0; i < 20; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) d.values(i, j) = rng.next_normal();
  }
  const DataMatrix c = center(d);
  const EncryptedRelease release =
      encrypt_continuous(c, {NoiseFamily::kContinuous, 1e-12, 4});
  CHECK((release.data.values - c.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("encrypt_continuous is deterministic and rejects uncentered data") {
  DataMatrix d;
  d.values.resize(5, 2);
  d.values << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
  CHECK_THROWS_AS(
      encrypt_continuous(d, {NoiseFamily::kContinuous, 1.0, 0}),
      ValidationError);
  const DataMatrix c = center(d);
  const EncryptedRelease a =
      encrypt_continuous(c, {NoiseFamily::kContinuous, 1.0, 9});
  const EncryptedRelease b =
      encrypt_continuous(c, {NoiseFamily::kContinuous, 1.0, 9});
  CHECK(a.data.values == b.data.values);
  CHECK(a.sigma == 1.0);
  CHECK_FALSE(a.sigma_bar.has_value());
}

TEST_CASE("continuous noise variance concentrates (sigma=2, 1e6 draws)") {
  DataMatrix d;
  d.values = Eigen::MatrixXd::Zero(1000000, 1);
  d.centered = true;
  const EncryptedRelease release =
      encrypt_continuous(d, {NoiseFamily::kContinuous, 2.0, 21});
  const Eigen::ArrayXd noise = release.data.values.col(0).array();
  const double var = (noise - noise.mean()).square().sum() / (noise.size() - 1);
  CHECK(var > 3.98);
  CHECK(var < 4.02);
}

TEST_CASE("discrete sampler matches the series pmf at zero") {
  const auto draws = sample_discrete_gaussian(1.0, 31, 1000000);
  std::size_t zeros = 0;
  for (const long long d : draws) zeros += d == 0;
  const double phat = static_cast<double>(zeros) / draws.size();
  CHECK(std::abs(phat - series_pmf(1.0, 0)) < 0.003);
}

TEST_CASE("discrete sampler is symmetric") {
  const auto draws = sample_discrete_gaussian(1.0, 32, 1000000);
  std::map<long long, double> counts;
  for (const long long d : draws) counts[d] += 1.0;
  const double n = static_cast<double>(draws.size());
  for (long long k = 1; k <= 3; ++k) {
    const double pk = counts[k] / n;
    const double pm = counts[-k] / n;
    const double se = std::sqrt((pk + pm) / n);
    CHECK(std::abs(pk - pm) <= 3.0 * se);
  }
}

TEST_CASE("discrete sampler mean vanishes at sigma=0.5") {
  const auto draws = sample_discrete_gaussian(0.5, 33, 1000000);
  double sum = 0.0;
  for (const long long d : draws) sum += static_cast<double>(d);
  CHECK(std::abs(sum / draws.size()) < 0.002);
}

TEST_CASE("empirical discrete distribution is close in total variation") {
  for (const double sigma : {0.5, 1.0, 3.0}) {
    const auto draws = sample_discrete_gaussian(sigma, 34, 1000000);
    std::map<long long, std::size_t> counts;
    for (const long long d : draws) ++counts[d];
    const long long radius = static_cast<long long>(std::ceil(12.0 * sigma));
    double tv = 0.0;
    for (long long z = -radius; z <= radius; ++z) {
      const auto it = counts.find(z);
      const double phat =
          it == counts.end()
              ? 0.0
              : static_cast<double>(it->second) / draws.size();
      tv += std::abs(phat - series_pmf(sigma, z));
    }
    CHECK(tv / 2.0 < 0.005);
  }
}

TEST_CASE("discrete_variance stays strictly below sigma^2") {
  for (const double sigma : {0.5, 1.0, 2.0, 5.0}) {
    CHECK(discrete_variance(sigma) < sigma * sigma);
    CHECK(discrete_variance(sigma) > 0.0);
  }
}

TEST_CASE("discrete_variance at sigma=5 is within a hair of sigma^2") {
  const double ratio = discrete_variance(5.0) / 25.0;
  CHECK(ratio >= 0.999);
  CHECK(ratio < 1.0);
}

TEST_CASE("discrete_variance sigma=1 pinned regression value") {
  // Independent truncated-series summation.
  CHECK(discrete_variance(1.0) ==
        doctest::Approx(0.99999978876772808).epsilon(1e-12));
  CHECK(std::abs(discrete_variance(1.0) - series_variance(1.0)) < 1e-14);
}

TEST_CASE("discrete_variance satisfies the closed-form upper bound") {
  for (const double sigma : {0.45, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double sbar = discrete_variance(sigma);
    const double s2 = sigma * sigma;
    CHECK(sbar > 0.0);
    CHECK(sbar < s2);
    const double e = 4.0 * std::numbers::pi * std::numbers::pi * s2;
    const double bound = e < 700.0 ? s2 * (1.0 - e / (std::exp(e) - 1.0)) : s2;
    CHECK(sbar <= bound);
  }
}

TEST_CASE("encrypt_discrete keeps integer offsets and is deterministic") {
  DataMatrix d;
  d.values.resize(6, 2);
  d.values << 1, 4, 2, 4, 3, 7, 1, 4, 2, 7, 3, 4;
  const DataMatrix c = center(d);
  const EncryptedRelease a =
      encrypt_discrete(c, {NoiseFamily::kDiscrete, 1.0, 3});
  const EncryptedRelease b =
      encrypt_discrete(c, {NoiseFamily::kDiscrete, 1.0, 3});
  CHECK(a.data.values == b.data.values);
  REQUIRE(a.sigma_bar.has_value());
  CHECK(*a.sigma_bar == discrete_variance(1.0));
  const Eigen::MatrixXd noise = a.data.values - c.values;
  for (Eigen::Index i = 0; i < noise.rows(); ++i) {
    for (Eigen::Index j = 0; j < noise.cols(); ++j) {
      CHECK(noise(i, j) == std::round(noise(i, j)));
    }
  }
}

TEST_CASE("discrete noise variance tracks the series value at sigma=2") {
  DataMatrix d;
  d.values = Eigen::MatrixXd::Zero(1000000, 1);
  d.centered = true;
  const EncryptedRelease release =
      encrypt_discrete(d, {NoiseFamily::kDiscrete, 2.0, 15});
  const Eigen::ArrayXd noise = release.data.values.col(0).array();
  const double var = (noise - noise.mean()).square().sum() / (noise.size() - 1);
  CHECK(std::abs(var - discrete_variance(2.0)) < 0.01 * discrete_variance(2.0));
}

TEST_CASE("encrypt_discrete rejects sigma at or below the validity floor") {
  DataMatrix d;
  d.values = Eigen::MatrixXd::Zero(4, 1);
  d.centered = true;
  CHECK_THROWS_AS(encrypt_discrete(d, {NoiseFamily::kDiscrete, 0.3, 0}),
                  ValidationError);
}

TEST_CASE("encrypt_discrete rejects non-integer data") {
  DataMatrix d;
  d.values.resize(4, 1);
  d.values << 0.5, 1.0, 2.0, 3.25;
  const DataMatrix c = center(d);
  CHECK_THROWS_AS(encrypt_discrete(c, {NoiseFamily::kDiscrete, 1.0, 0}),
                  ValidationError);
}

TEST_CASE("sensitivity_default closed form") {
  DataMatrix flat;
  flat.values = Eigen::MatrixXd::Constant(10, 3, 2.5);
  CHECK(sensitivity_default(flat) == 0.0);

  DataMatrix ranged;
  ranged.values = Eigen::MatrixXd::Zero(100, 1);
  ranged.values(0, 0) = -1.0;
  ranged.values(1, 0) = 1.0;
  CHECK(sensitivity_default(ranged) == doctest::Approx(0.08).epsilon(1e-15));
}

TEST_CASE("sensitivity_default is 2-homogeneous") {
  StreamRng rng(44, 0);
  for (int trial = 0; trial < 20; ++trial) {
    DataMatrix d;
    d.values.resize(8, 3);
    for (Eigen::Index i = 0; i < 8; ++i) {
      for (Eigen::Index j = 0; j < 3; ++j) d.values(i, j) = rng.next_normal();
    }
    const double c = 0.1 + 5.0 * rng.next_uniform();
    DataMatrix scaled;
    scaled.values = c * d.values;
    CHECK(sensitivity_default(scaled) ==
          doctest::Approx(c * c * sensitivity_default(d)).epsilon(1e-12));
  }
}

TEST_CASE("gdp_mu_continuous hand-evaluated example") {
  DataMatrix d;
  d.values.resize(2, 2);
  d.values << 1, 0, 0, 1;
  const double delta_f = sensitivity_default(d);  // 2 * 1 / 2 = 1
  CHECK(delta_f == 1.0);
  const double mu = gdp_mu_continuous(d, 1.0, delta_f);
  CHECK(mu == doctest::Approx(1.0 / std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("gdp_mu_continuous halves when sigma doubles") {
  DataMatrix d;
  d.values.resize(3, 2);
  d.values << 1, -2, -1, 1, 0.5, 1;
  const double m1 = gdp_mu_continuous(d, 1.0, 0.7);
  const double m2 = gdp_mu_continuous(d, 2.0, 0.7);
  CHECK(m2 == doctest::Approx(m1 / 2.0).epsilon(1e-14));
}

TEST_CASE("gdp_mu_continuous rejects an all-zero column") {
  DataMatrix d;
  d.values.resize(3, 2);
  d.values << 1, 0, -1, 0, 0.5, 0;
  CHECK_THROWS_AS(gdp_mu_continuous(d, 1.0, 1.0), ValidationError);
}

TEST_CASE("gdp_mu_discrete hand-evaluated example") {
  DataMatrix d;
  d.values.resize(4, 1);
  d.values << 1, -1, 1, -1;
  const double delta_f = sensitivity_default(d);  // 2 * 4 / 4 = 2
  CHECK(delta_f == 2.0);
  // K = 1/4; mu = (2 + 0.5) / (sqrt(8) * 0.25 * sigma).
  const double expect = 2.5 / (std::sqrt(8.0) * 0.25);
  CHECK(gdp_mu_discrete(d, 1.0, delta_f) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(gdp_mu_discrete(d, 2.0, delta_f) ==
        doctest::Approx(expect / 2.0).epsilon(1e-12));
}

TEST_CASE("gdp_mu_discrete rejects zero entries, naming the assumption") {
  DataMatrix d;
  d.values.resize(3, 1);
  d.values << 1, 0, -1;
  try {
    gdp_mu_discrete(d, 1.0, 1.0);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("zero") != std::string::npos);
  }
}

TEST_CASE("delta_of_epsilon at epsilon 0 collapses to 2*Phi(mu/2)-1") {
  for (const double mu : {0.2, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(delta_of_epsilon(mu, 0.0) ==
          doctest::Approx(2.0 * normal_cdf(mu / 2.0) - 1.0).epsilon(1e-10));
  }
  CHECK(delta_of_epsilon(1.0, 0.0) ==
        doctest::Approx(0.3829249225480262).epsilon(1e-10));
}

TEST_CASE("delta_of_epsilon vanishes for large epsilon") {
  CHECK(delta_of_epsilon(1.0, 10.0) < 1e-15);
  CHECK(delta_of_epsilon(1.0, 10.0) >= 0.0);
  // Log-space branch stays finite and tiny.
  CHECK(delta_of_epsilon(1.0, 100.0) >= 0.0);
  CHECK(delta_of_epsilon(1.0, 100.0) < 1e-300);
  CHECK(delta_of_epsilon(1.0, 1000.0) == 0.0);
}

TEST_CASE("delta curve is monotone on 50-point grids") {
  double previous = 1.1;
  for (int i = 0; i < 50; ++i) {
    const double eps = 8.0 * i / 49.0;
    const double d = delta_of_epsilon(1.0, eps);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(d < previous);
    previous = d;
  }
  previous = -1.0;
  for (int i = 0; i < 50; ++i) {
    const double mu = 0.1 + 4.9 * i / 49.0;
    const double d = delta_of_epsilon(mu, 1.0);
    CHECK(d > previous);
    previous = d;
  }
}

TEST_CASE("gdp mu is strictly decreasing in sigma for both families") {
  DataMatrix d;
  d.values.resize(4, 2);
  d.values << 1, 2, -1, 3, 2, -2, -2, -3;
  const double delta_f = sensitivity_default(d);
  double prev_c = std::numeric_limits<double>::infinity();
  double prev_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double sigma = 0.5 + 0.1 * i;
    const double mc = gdp_mu_continuous(d, sigma, delta_f);
    const double md = gdp_mu_discrete(d, sigma, delta_f);
    CHECK(mc < prev_c);
    CHECK(md < prev_d);
    prev_c = mc;
    prev_d = md;
  }
}

TEST_CASE("snr_accounting follows dB algebra") {
  DataMatrix d;
  d.values.resize(50, 2);
  StreamRng rng(17, 0);
  for (Eigen::Index i = 0; i < 50; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) d.values(i, j) = rng.next_normal();
  }
  const SnrResult a = snr_accounting(d, 40.0);
  const SnrResult b = snr_accounting(d, 20.0);
  CHECK(b.sigma_n == doctest::Approx(10.0 * a.sigma_n).epsilon(1e-12));
  CHECK(b.epsilon_simple ==
        doctest::Approx(a.epsilon_simple / 10.0).epsilon(1e-12));
}

TEST_CASE("snr_accounting on unit-power data gives sigma exactly 0.1") {
  const DataMatrix d = unit_power_data();
  const SnrResult r = snr_accounting(d, 20.0);
  CHECK(r.signal_power == 1.0);
  CHECK(r.sigma_n == 0.1);
  CHECK(r.epsilon_simple == sensitivity_default(d) / 0.1);
}

TEST_CASE("snr_accounting rejects constant data") {
  DataMatrix d;
  d.values = Eigen::MatrixXd::Constant(5, 2, 3.0);
  CHECK_THROWS_AS(snr_accounting(d, 20.0), ValidationError);
}

TEST_CASE("noise is uncorrelated with the data") {
  DataMatrix d;
  d.values.resize(20000, 5);
  StreamRng rng(63, 0);
  for (Eigen::Index i = 0; i < 20000; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) d.values(i, j) = rng.next_normal();
  }
  const DataMatrix c = center(d);
  const EncryptedRelease release =
      encrypt_continuous(c, {NoiseFamily::kContinuous, 1.0, 7});
  const Eigen::MatrixXd noise = release.data.values - c.values;
  const double n = static_cast<double>(c.values.size());
  const double xm = c.values.mean();
  const double em = noise.mean();
  const double cov =
      ((c.values.array() - xm) * (noise.array() - em)).sum() / n;
  const double corr = cov / (std::sqrt((c.values.array() - xm).square().sum() / n) *
                             std::sqrt((noise.array() - em).square().sum() / n));
  CHECK(std::abs(corr) <= 3.0 / std::sqrt(n));
}

TEST_CASE("privacy report carries the bound constants and a sane curve") {
  DataMatrix d;
  d.values.resize(50, 3);
  StreamRng rng(29, 0);
  for (Eigen::Index i = 0; i < 50; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      d.values(i, j) = rng.next_normal() + 0.01;
    }
  }
  const DataMatrix c = center(d);
  const PrivacyReport report =
      make_privacy_report(c, {NoiseFamily::kContinuous, 0.5, 1});
  CHECK(report.mu > 0.0);
  CHECK(report.C.has_value());
  CHECK_FALSE(report.K.has_value());
  CHECK(report.delta_curve.size() == 50);
  double prev = 1.1;
  for (const auto& [eps, delta] : report.delta_curve) {
    CHECK(delta >= 0.0);
    CHECK(delta <= 1.0);
    CHECK(delta <= prev);
    prev = delta;
  }
}
