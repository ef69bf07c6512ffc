// Copyright 2026 The PrivReg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVREG_BENCH_H_
#define PRIVREG_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "privreg/dataio.hpp"
#include "privreg/dpsgd.hpp"
#include "privreg/pac.hpp"
#include "privreg/regression.hpp"

namespace privreg {

enum class Method { kNonPrivate, kDpsgd, kPac };

Method method_from_string(const std::string& s);
std::string to_string(Method method);

struct SplitSpec {
  double fraction = 0.2;
  std::uint64_t seed = 42;
};

struct DpGrid {
  std::vector<double> learning_rates = {0.001, 0.01, 0.1};
  std::vector<int> batch_sizes = {8, 16, 32};
  std::vector<double> clip_norms = {0.1, 1.0, 10.0};
  std::vector<int> epochs = {10, 20, 50};
};

struct PacGrid {
  std::vector<FitKind> kinds = {FitKind::kRidge};
  // Default 2^-10 .. 2^10 (21 values); OLS ignores lambda and contributes
  // a single grid point.
  std::vector<double> lambdas;

  PacGrid();
};

struct ExperimentSpec {
  std::string name;
  DatasetManifest dataset;
  std::vector<Method> methods = {Method::kNonPrivate, Method::kDpsgd,
                                 Method::kPac};
  std::vector<double> psr_levels = {0.52, 0.55, 0.65, 0.75,
                                    0.85, 0.95, 0.98};
  int trials = 50;
  double delta = 1e-5;
  bool normalization = true;
  SplitSpec split;
  std::uint64_t master_seed = 1;
  DpGrid dp_grid;
  PacGrid pac_grid;
  PacMode pac_mode = PacMode::kCovarianceCorrect;
  bool pac_svd_projection = true;
  PacEstimationConfig pac_estimation;

  static ExperimentSpec from_json_file(const std::string& path);
  static ExperimentSpec from_json(const std::string& text);
  std::string to_json() const;
};

// One grid point for one method.
struct MethodConfig {
  Method method = Method::kNonPrivate;
  DpSgdConfig dp;   // dpsgd only; noise_multiplier is calibrated per psr
  FitSpec fit;      // pac and non_private

  std::string to_json() const;
};

// Aggregated result for one (method, psr, config) cell.
struct TrialCell {
  std::string dataset;
  Method method = Method::kNonPrivate;
  double psr = 0.0;      // 0 for non_private
  double epsilon = 0.0;  // DP budget (dpsgd) or DP-equivalent (pac)
  double mi = 0.0;
  std::string config_json;
  std::vector<double> rmse_raw;
  std::vector<double> r2_raw;
  double rmse_mean = 0.0, rmse_std = 0.0;
  double r2_mean = 0.0, r2_std = 0.0;
  int trials = 0;
  int failures = 0;
  bool valid = true;  // false when >10% of trials failed
};

struct TrialReport {
  std::string dataset;
  std::uint64_t master_seed = 0;
  std::string split_json;
  bool normalization = true;
  std::string pac_mode;
  std::vector<TrialCell> cells;

  std::string to_json() const;
  std::string to_csv() const;
  // Per-method (psr, rmse_mean, rmse_std) series plus a non_private
  // reference entry, as JSON.
  std::string to_plotdata() const;
};

// Train/test split with the scaler fitted on the training part only.
struct PreparedData {
  std::string name;
  Dataset train;
  Dataset test;
  ScalerParams scaler;
};

PreparedData prepare_data(const ExperimentSpec& spec);

// Runs spec.trials independent privatized trainings with trial-indexed
// seeds and aggregates test-set metrics. For PAC the noise profile is
// estimated once and reused; only the Gaussian draw varies per trial.
TrialCell run_trials(const PreparedData& data, const ExperimentSpec& spec,
                     double psr, const MethodConfig& config);

std::vector<MethodConfig> enumerate_grid(const ExperimentSpec& spec,
                                         Method method);

// Evaluates every grid point and returns the cell minimizing rmse_mean;
// ties go to the earlier grid point in canonical order.
TrialCell grid_search(const PreparedData& data, const ExperimentSpec& spec,
                      Method method, double psr);

// Full benchmark: grid search per (method, psr), best cells collected.
TrialReport run_benchmark(const ExperimentSpec& spec);

void emit_report(const TrialReport& report, const std::string& format,
                 const std::string& path);

}  // namespace privreg

#endif  // PRIVREG_BENCH_H_
