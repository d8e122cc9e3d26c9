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

#include <filesystem>
#include <string>

#include "privglasso/evaluate.hpp"

namespace privglasso {

// Headerless CSV, one row per line, full-precision (%.17g) decimals.
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

// One "i,j" pair per line.
void write_edges_csv(const std::filesystem::path& path, const EdgeSet& edges);
EdgeSet read_edges_csv(const std::filesystem::path& path, Eigen::Index p);

// Release sidecar: {"family", "sigma", "sigma_bar"?}. Never the seed.
void write_release_meta(const std::filesystem::path& path,
                        const EncryptedRelease& release);
// Reads the sidecar into `release` (data left untouched).
void read_release_meta(const std::filesystem::path& path,
                       EncryptedRelease& release);

void write_privacy_report(const std::filesystem::path& path,
                          const PrivacyReport& report);

void write_diagnostics(const std::filesystem::path& path,
                       const SolveDiagnostics& diag, SolverKind solver,
                       double lambda);

void write_cv_result_json(const std::filesystem::path& path,
                          const CvResult& cv);
// lambda, mse mean, mse std, edge count per line.
void write_cv_result_csv(const std::filesystem::path& path,
                         const CvResult& cv);

// fpr, tpr per line.
void write_roc_csv(const std::filesystem::path& path, const RocCurve& roc);

void write_trial_reports_json(const std::filesystem::path& path,
                              const std::vector<TrialReport>& reports);
// snr_db (empty for no noise), epsilon, auc mean, auc std, seeds, failures.
void write_trial_reports_csv(const std::filesystem::path& path,
                             const std::vector<TrialReport>& reports);

std::string format_double(double v);

}  // namespace privglasso
