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

#ifndef PRIVREG_PAC_H_
#define PRIVREG_PAC_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "privreg/conversions.hpp"
#include "privreg/dataio.hpp"
#include "privreg/regression.hpp"

namespace privreg {

// Orthonormal basis for the mechanism's output space (rows of v_t are the
// right-singular vectors of a sample of mechanism outputs).
struct ProjectionBasis {
  Eigen::MatrixXd v_t;  // p x p, orthogonal
  Eigen::VectorXd singular_values;

  static ProjectionBasis identity(int p);
  bool is_identity() const;
};

enum class PacMode {
  // Noise is sampled per-dimension in the projected basis and mapped back
  // with V, i.e. covariance V * diag(e) * V^T in original coordinates.
  // The leave-one-out comparison uses B = A + {x}.
  kCovarianceCorrect,
  // Verbatim pseudocode reading: B = D' + {x}, and the diagonal of
  // V^T * diag(e) is read off as per-coordinate variances.
  kPaperLiteral,
};

PacMode pac_mode_from_string(const std::string& s);
std::string to_string(PacMode mode);

struct PacEstimationConfig {
  double sampling_rate = 0.5;           // Poisson rate q over D'
  double convergence_threshold = 1e-4;  // per-dimension running-mean motion
  int min_rounds = 30;
  int max_rounds = 1000;
  ProjectionBasis projection;           // empty -> identity
  double mi_budget = 0.1;               // > 0
  PacMode mode = PacMode::kCovarianceCorrect;
  std::uint64_t seed = 0;
  // 0 = estimate over every instance; otherwise cap the left-out loop to
  // this many instances (evenly strided) to bound cost on large datasets.
  int max_instances = 0;
};

// Per-left-out-instance estimation record, kept for diagnostics/tests.
struct PacInstanceStats {
  Eigen::VectorXd mean_sq_dev;  // v-bar, projected basis
  Eigen::VectorXd variances;    // e, before the cross-instance max
  int rounds = 0;
  bool converged = false;
};

// Output of the anisotropic noise estimation: per-dimension Gaussian
// variances e_max plus the basis they were estimated in.
struct NoiseProfile {
  Eigen::VectorXd variances;  // length p = d+1, >= 0
  ProjectionBasis basis;
  double mi_budget = 0.0;
  PacMode mode = PacMode::kCovarianceCorrect;
  bool converged = true;
  Eigen::VectorXd per_dim_mean_sq_dev;  // v-bar of the variance-maximizing pass
  std::vector<int> rounds_per_instance;
  std::vector<PacInstanceStats> instances;  // not serialized

  std::string to_json() const;
  static NoiseProfile from_json(const std::string& text);
};

using Mechanism = std::function<Coefficients(const Dataset&)>;

// Deterministic mechanism for a FitSpec; an empty subsample yields the
// zero model so Poisson draws on tiny datasets stay total.
Mechanism make_fit_mechanism(const FitSpec& spec);

// SVD of the column-mean-centered sample matrix of k mechanism outputs.
// Degenerate all-identical samples yield the identity basis.
ProjectionBasis compute_projection(const Eigen::MatrixXd& weight_samples);

// Runs the mechanism on k Poisson(q) resamples of the data and extracts
// the SVD basis from the stacked outputs.
ProjectionBasis estimate_projection(const Dataset& data,
                                    const Mechanism& mechanism, int k,
                                    double q, std::uint64_t seed);

// Leave-one-out anisotropic noise estimation. For each instance x, repeats
// rounds of Poisson(q)-sampling A from D\{x} and comparing projected
// mechanism outputs on A vs A+{x}; per-dimension variances are
// e[i] = sqrt(vbar[i]) * sum_j sqrt(vbar[j]) / (4*MI), and the profile
// keeps the per-dimension max across instances.
NoiseProfile estimate_noise(const Dataset& data, const Mechanism& mechanism,
                            const PacEstimationConfig& config);

// Adds the profile's Gaussian noise (variances, per mode) to the flattened
// (weights, intercept) vector.
Coefficients add_noise(const Coefficients& model, const NoiseProfile& profile,
                       std::uint64_t seed);

// estimate_noise -> fit on the full data -> add_noise. The config's
// mi_budget is overridden by level.mi.
Coefficients pac_train(const Dataset& data, const FitSpec& fit_spec,
                       const PrivacyLevel& level,
                       const PacEstimationConfig& config, std::uint64_t seed);

}  // namespace privreg

#endif  // PRIVREG_PAC_H_
