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
#include <vector>

#include "privglasso/evaluate.hpp"
#include "privglasso/rng.hpp"

using namespace privglasso;

namespace {

// Exhaustive Mann-Whitney count in integers: 2*wins + ties over all
// (edge, non-edge) pairs. AUC = count / (2 m n).
long long brute_force_pair_count(const Eigen::MatrixXd& theta,
                                 const EdgeSet& truth) {
  std::vector<double> pos;
  std::vector<double> neg;
  const Eigen::Index p = theta.rows();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      (truth.edges.count({i, j}) > 0 ? pos : neg)
          .push_back(std::abs(theta(i, j)));
    }
  }
  long long count = 0;
  for (const double a : pos) {
    for (const double b : neg) {
      if (a > b) count += 2;
      if (a == b) count += 1;
    }
  }
  return count;
}

EdgeSet make_edges(
    Eigen::Index p,
    std::initializer_list<std::pair<Eigen::Index, Eigen::Index>> pairs) {
  EdgeSet out;
  out.p = p;
  for (const auto& e : pairs) out.edges.insert(e);
  return out;
}

Eigen::MatrixXd random_scores(Eigen::Index p, std::uint64_t seed) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  StreamRng rng(seed, 0);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double v = rng.next_uniform();
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

EdgeSet random_truth(Eigen::Index p, std::uint64_t seed) {
  EdgeSet t;
  t.p = p;
  StreamRng rng(seed, 1);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (rng.next_uniform() < 0.4) t.edges.emplace(i, j);
    }
  }
  if (t.edges.empty()) t.edges.emplace(0, 1);
  if (t.edges.size() == static_cast<std::size_t>(p * (p - 1) / 2)) {
    t.edges.erase(t.edges.begin());
  }
  return t;
}

}  // namespace

TEST_CASE("perfect scores give AUC one") {
  const PrecisionMatrix chain = chain_precision(6);
  const RocCurve roc = roc_auc(chain.entries(), adjacency_of(chain, 0.0));
  CHECK(roc.auc == 1.0);
  CHECK(roc.points.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(roc.points.back() == std::pair<double, double>{1.0, 1.0});
}

TEST_CASE("constant scores give AUC one half") {
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(5, 5, 0.7);
  const RocCurve roc =
      roc_auc(flat, make_edges(5, {{0, 1}, {2, 3}}));
  CHECK(roc.auc == 0.5);
}

TEST_CASE("six-pair instance matches the exhaustive pair count") {
  Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(4, 4);
  auto set = [&](Eigen::Index i, Eigen::Index j, double v) {
    theta(i, j) = v;
    theta(j, i) = v;
  };
  set(0, 1, 0.9);
  set(0, 2, 0.4);
  set(0, 3, 0.4);  // tied with a non-edge
  set(1, 2, 0.0);
  set(1, 3, -0.2);
  set(2, 3, 0.1);
  const EdgeSet truth = make_edges(4, {{0, 1}, {0, 3}, {2, 3}});
  const RocCurve roc = roc_auc(theta, truth);
  const long long count = brute_force_pair_count(theta, truth);
  CHECK(roc.auc == doctest::Approx(static_cast<double>(count) /
                                   (2.0 * 3.0 * 3.0))
                       .epsilon(1e-12));
}

TEST_CASE("AUC is invariant under strictly monotone score transforms") {
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index p = 6;
    const Eigen::MatrixXd scores =
        random_scores(p, 700 + static_cast<std::uint64_t>(trial));
    const EdgeSet truth =
        random_truth(p, 700 + static_cast<std::uint64_t>(trial));
    const Eigen::MatrixXd cubed = scores.array().pow(3.0).matrix();
    CHECK(roc_auc(scores, truth).auc == roc_auc(cubed, truth).auc);
  }
}

TEST_CASE("reversing the score order complements the AUC") {
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index p = 7;
    const Eigen::MatrixXd scores =
        random_scores(p, 900 + static_cast<std::uint64_t>(trial));
    const EdgeSet truth =
        random_truth(p, 900 + static_cast<std::uint64_t>(trial));
    // 1 - s reverses the ranking of scores in (0, 1) while staying positive.
    const Eigen::MatrixXd reversed =
        (1.0 - scores.array()).matrix() -
        Eigen::MatrixXd::Identity(p, p);  // keep the diagonal out of range
    const long long a = brute_force_pair_count(scores, truth);
    const long long b = brute_force_pair_count(reversed, truth);
    const long long pairs =
        static_cast<long long>(truth.edges.size()) *
        (static_cast<long long>(p * (p - 1) / 2) -
         static_cast<long long>(truth.edges.size()));
    CHECK(a + b == 2 * pairs);
    CHECK(std::abs(roc_auc(scores, truth).auc + roc_auc(reversed, truth).auc -
                   1.0) <= 1e-12);
  }
}

TEST_CASE("the AUC equals the trapezoidal integral of the curve") {
  const Eigen::MatrixXd scores = random_scores(8, 333);
  const EdgeSet truth = random_truth(8, 333);
  const RocCurve roc = roc_auc(scores, truth);
  double integral = 0.0;
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    integral += (roc.points[k].first - roc.points[k - 1].first) *
                (roc.points[k].second + roc.points[k - 1].second) / 2.0;
  }
  CHECK(std::abs(integral - roc.auc) <= 1e-12);
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    CHECK(roc.points[k].first >= roc.points[k - 1].first);
    CHECK(roc.points[k].second >= roc.points[k - 1].second);
  }
}

TEST_CASE("degenerate truths are rejected") {
  const Eigen::MatrixXd scores = random_scores(4, 1);
  EdgeSet none;
  none.p = 4;
  CHECK_THROWS_AS(roc_auc(scores, none), ValidationError);
  EdgeSet all;
  all.p = 4;
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = i + 1; j < 4; ++j) all.edges.emplace(i, j);
  }
  CHECK_THROWS_AS(roc_auc(scores, all), ValidationError);
  EdgeSet wrong = make_edges(5, {{0, 1}});
  CHECK_THROWS_AS(roc_auc(scores, wrong), ValidationError);
}

TEST_CASE("proxy truth on a noiseless chain keeps the chain couplings") {
  const DataMatrix raw = sample_gaussian(chain_precision(10), 2000, 40);
  CvConfig cfg;
  cfg.seed = 4;
  const ProxyTruth proxy = proxy_truth(raw, cfg);
  CHECK_FALSE(proxy.low_confidence);
  CHECK(proxy.chosen_lambda > 0.0);
  // Weak second-neighbour entries survive any lambda for this generator, so
  // the proxy is a superset of the chain rather than an exact match.
  const EdgeSet chain_edges = adjacency_of(chain_precision(10), 0.0);
  for (const auto& e : chain_edges.edges) {
    CHECK(proxy.edges.edges.count(e) == 1);
  }

  const ProxyTruth again = proxy_truth(raw, cfg);
  CHECK(again.edges == proxy.edges);
  CHECK(again.chosen_lambda == proxy.chosen_lambda);
}

TEST_CASE("proxy truth flags tiny samples instead of crashing") {
  const DataMatrix raw = sample_gaussian(chain_precision(12), 8, 41);
  CvConfig cfg;
  cfg.seed = 4;
  cfg.k_folds = 2;
  const ProxyTruth proxy = proxy_truth(raw, cfg);
  CHECK(proxy.low_confidence);
}

TEST_CASE("run_trials reproduces itself bit for bit") {
  TrialScenario sc;
  sc.p = 12;
  sc.n = 400;
  sc.snr_db_levels = {std::nullopt, 40.0};
  sc.lambda = 0.1;
  sc.seeds = {1, 2, 3};
  const auto a = run_trials(sc);
  const auto b = run_trials(sc);
  REQUIRE(a.size() == b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].auc_mean == b[r].auc_mean);
    CHECK(a[r].auc_std == b[r].auc_std);
    for (std::size_t t = 0; t < a[r].trials.size(); ++t) {
      CHECK(a[r].trials[t].auc == b[r].trials[t].auc);
    }
  }
}

TEST_CASE("run_trials recovers an easy chain perfectly") {
  TrialScenario sc;
  sc.p = 20;
  sc.n = 2000;
  sc.snr_db_levels = {std::nullopt};
  sc.lambda = 0.1;
  sc.seeds = {5, 6, 7};
  const auto reports = run_trials(sc);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].auc_mean == 1.0);
  CHECK(reports[0].auc_std == 0.0);
  CHECK(reports[0].failures == 0);
  CHECK(std::isnan(reports[0].epsilon_simple_mean));
}

TEST_CASE("run_trials validates seeds") {
  TrialScenario sc;
  sc.seeds = {};
  CHECK_THROWS_AS(run_trials(sc), ValidationError);
  sc.seeds = {1, 1};
  CHECK_THROWS_AS(run_trials(sc), ValidationError);
}

TEST_CASE("individual trial failures are recorded, not fatal") {
  TrialScenario sc;
  sc.p = 8;
  sc.n = 100;
  sc.snr_db_levels = {20.0};
  sc.family = NoiseFamily::kDiscrete;
  sc.integer_scale = 0.0;  // samples stay non-integer: every trial fails
  sc.seeds = {1, 2};
  const auto reports = run_trials(sc);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].failures == 2);
  CHECK(reports[0].trials[0].failed);
  CHECK_FALSE(reports[0].trials[0].error.empty());
}

TEST_CASE("the sparse generator path scores against its own truth") {
  TrialScenario sc;
  sc.generator = GeneratorKind::kSparseRandom;
  sc.p = 40;
  sc.n = 800;
  sc.sparsity = 0.95;
  sc.snr_db_levels = {40.0};
  sc.lambda = 0.02;
  sc.seeds = {11, 12};
  const auto reports = run_trials(sc);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].failures == 0);
  CHECK(reports[0].auc_mean > 0.9);
  CHECK(reports[0].epsilon_simple_mean > 0.0);
}
