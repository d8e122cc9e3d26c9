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

#include "privglasso/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace privglasso {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

json number_or_null(double v) {
  if (std::isnan(v) || std::isinf(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        row.push_back(v);
      } catch (const std::exception&) {
        throw IoError("malformed number '" + cell + "' in " + path.string());
      }
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw IoError("ragged CSV rows in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV: " + path.string());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

void write_edges_csv(const std::filesystem::path& path, const EdgeSet& edges) {
  std::ofstream out = open_out(path);
  for (const auto& [i, j] : edges.edges) {
    out << i << ',' << j << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

EdgeSet read_edges_csv(const std::filesystem::path& path, Eigen::Index p) {
  std::ifstream in = open_in(path);
  EdgeSet out;
  out.p = p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long long i = 0;
    long long j = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld", &i, &j) != 2) {
      throw IoError("malformed edge line '" + line + "' in " + path.string());
    }
    if (i < 0 || j < 0 || i >= p || j >= p || i == j) {
      throw IoError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                    ") out of range in " + path.string());
    }
    out.edges.emplace(std::min<Eigen::Index>(i, j),
                      std::max<Eigen::Index>(i, j));
  }
  return out;
}

void write_release_meta(const std::filesystem::path& path,
                        const EncryptedRelease& release) {
  json j;
  j["family"] =
      release.family == NoiseFamily::kContinuous ? "continuous" : "discrete";
  j["sigma"] = release.sigma;
  if (release.sigma_bar.has_value()) j["sigma_bar"] = *release.sigma_bar;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void read_release_meta(const std::filesystem::path& path,
                       EncryptedRelease& release) {
  const json j = parse_json_file(path);
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ValidationError("release metadata is missing 'family'");
  }
  const std::string family = j["family"].get<std::string>();
  if (family == "continuous") {
    release.family = NoiseFamily::kContinuous;
  } else if (family == "discrete") {
    release.family = NoiseFamily::kDiscrete;
  } else {
    throw ValidationError("unknown noise family '" + family + "'");
  }
  if (!j.contains("sigma") || !j["sigma"].is_number()) {
    throw ValidationError(
        "release metadata is missing the noise scale 'sigma'; recovery is "
        "impossible without it");
  }
  release.sigma = j["sigma"].get<double>();
  if (j.contains("sigma_bar")) {
    release.sigma_bar = j["sigma_bar"].get<double>();
    if (!(*release.sigma_bar < release.sigma * release.sigma)) {
      throw ValidationError(
          "sigma_bar must be strictly below sigma^2 (the discrete noise "
          "variance always is)");
    }
  } else {
    release.sigma_bar.reset();
    if (release.family == NoiseFamily::kDiscrete) {
      throw ValidationError(
          "discrete release metadata is missing 'sigma_bar'");
    }
  }
}

void write_privacy_report(const std::filesystem::path& path,
                          const PrivacyReport& report) {
  json j;
  j["mu"] = report.mu;
  j["delta_f"] = report.delta_f;
  if (report.C.has_value()) j["C"] = *report.C;
  if (report.K.has_value()) j["K"] = *report.K;
  j["epsilon_simple"] = report.epsilon_simple;
  j["snr_db"] = number_or_null(report.snr_db);
  j["signal_power"] = report.signal_power;
  j["power_convention"] = report.power_convention;
  json curve = json::array();
  for (const auto& [eps, delta] : report.delta_curve) {
    curve.push_back(json::array({eps, delta}));
  }
  j["delta_curve"] = std::move(curve);
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_diagnostics(const std::filesystem::path& path,
                       const SolveDiagnostics& diag, SolverKind solver,
                       double lambda) {
  json j;
  j["solver"] = to_string(solver);
  j["lambda"] = lambda;
  j["iterations"] = diag.iterations;
  j["converged"] = diag.converged;
  j["primal_residual"] = diag.primal_residual;
  j["dual_residual"] = diag.dual_residual;
  j["kkt_residual"] = diag.kkt_residual;
  j["input_repaired"] = diag.input_repaired;
  j["returned_iterate"] = to_string(diag.returned);
  j["objective_trace"] = diag.objective_trace;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_cv_result_json(const std::filesystem::path& path,
                          const CvResult& cv) {
  json j;
  j["lambda_grid"] = cv.lambda_grid;
  json mse_mean = json::array();
  json mse_std = json::array();
  for (std::size_t i = 0; i < cv.mse_mean.size(); ++i) {
    mse_mean.push_back(number_or_null(cv.mse_mean[i]));
    mse_std.push_back(number_or_null(cv.mse_std[i]));
  }
  j["mse_mean"] = std::move(mse_mean);
  j["mse_std"] = std::move(mse_std);
  j["edge_counts"] = cv.edge_counts;
  j["nonconverged"] = cv.nonconverged;
  j["chosen_lambda"] = cv.chosen_lambda;
  j["lambda_min_mse"] = cv.lambda_min_mse;
  j["lambda_drop_knee"] = cv.lambda_drop_knee;
  j["rule"] = cv.rule == CvRule::kMinMse ? "min_mse" : "drop_knee";
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_cv_result_csv(const std::filesystem::path& path,
                         const CvResult& cv) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < cv.lambda_grid.size(); ++i) {
    out << format_double(cv.lambda_grid[i]) << ','
        << format_double(cv.mse_mean[i]) << ',' << format_double(cv.mse_std[i])
        << ',' << cv.edge_counts[i] << '\n';
  }
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& roc) {
  std::ofstream out = open_out(path);
  for (const auto& [fpr, tpr] : roc.points) {
    out << format_double(fpr) << ',' << format_double(tpr) << '\n';
  }
}

void write_trial_reports_json(const std::filesystem::path& path,
                              const std::vector<TrialReport>& reports) {
  json rows = json::array();
  for (const auto& report : reports) {
    json row;
    row["snr_db"] = report.snr_db.has_value() ? json(*report.snr_db)
                                              : json(nullptr);
    row["auc_mean"] = number_or_null(report.auc_mean);
    row["auc_std"] = number_or_null(report.auc_std);
    row["epsilon_simple_mean"] = number_or_null(report.epsilon_simple_mean);
    row["failures"] = report.failures;
    json trials = json::array();
    for (const auto& t : report.trials) {
      json tj;
      tj["seed"] = t.seed;
      tj["auc"] = number_or_null(t.auc);
      tj["epsilon_simple"] = number_or_null(t.epsilon_simple);
      tj["lambda"] = t.lambda;
      tj["seconds"] = t.seconds;
      tj["failed"] = t.failed;
      if (t.failed) tj["error"] = t.error;
      trials.push_back(std::move(tj));
    }
    row["trials"] = std::move(trials);
    rows.push_back(std::move(row));
  }
  std::ofstream out = open_out(path);
  out << rows.dump(2) << '\n';
}

void write_trial_reports_csv(const std::filesystem::path& path,
                             const std::vector<TrialReport>& reports) {
  std::ofstream out = open_out(path);
  for (const auto& report : reports) {
    if (report.snr_db.has_value()) {
      out << format_double(*report.snr_db);
    }
    out << ',';
    if (!std::isnan(report.epsilon_simple_mean)) {
      out << format_double(report.epsilon_simple_mean);
    }
    out << ',' << format_double(report.auc_mean) << ','
        << format_double(report.auc_std) << ','
        << (report.trials.size() - report.failures) << ',' << report.failures
        << '\n';
  }
}

}  // namespace privglasso
