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

#ifndef PRIVREG_REGRESSION_H_
#define PRIVREG_REGRESSION_H_

#include <Eigen/Dense>
#include <string>

namespace privreg {

// Linear model parameters. The perturbable output of both privacy
// mechanisms is the length-(d+1) vector (weights, intercept).
struct Coefficients {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  // Set when the normal equations were rank-deficient and the fit fell
  // back to an SVD pseudoinverse.
  bool rank_deficient = false;

  int dimension() const { return static_cast<int>(weights.size()); }

  // Flattened (weights..., intercept) view used by the privacy engines.
  Eigen::VectorXd as_vector() const;
  static Coefficients from_vector(const Eigen::VectorXd& v);

  std::string to_json() const;
  static Coefficients from_json(const std::string& text);
};

enum class FitKind { kOls, kRidge, kLasso };

struct FitSpec {
  FitKind kind = FitKind::kOls;
  double lambda = 0.0;  // regularization strength; must be 0 for OLS
};

FitKind fit_kind_from_string(const std::string& s);
std::string to_string(FitKind kind);

// Ordinary least squares on the intercept-augmented system. Rank-deficient
// systems are solved via SVD pseudoinverse and flagged.
Coefficients fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Ridge closed form with the penalty applied to weight rows only; solved
// with a dense symmetric solve. include_intercept=false fits through the
// origin (then all rows are penalized).
Coefficients fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double lambda, bool include_intercept = true);

// Lasso objective ||y - Xb - c||_2^2 + lambda*||b||_1 minimized by cyclic
// coordinate descent with soft-thresholding; intercept unpenalized.
// Converges when the max coefficient change in a sweep is < 1e-8; throws
// after 10000 sweeps without convergence.
Coefficients fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double lambda);

Coefficients fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const FitSpec& spec);

Eigen::VectorXd predict(const Coefficients& model, const Eigen::MatrixXd& X);

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

// 1 - SS_res/SS_tot. Throws when y is constant (SS_tot = 0).
double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

}  // namespace privreg

#endif  // PRIVREG_REGRESSION_H_
