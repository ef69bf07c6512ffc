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

#include "privreg/regression.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace privreg {
namespace {

constexpr double kLassoTol = 1e-8;
constexpr int kLassoMaxSweeps = 10000;
constexpr double kRankTol = 1e-10;

Eigen::MatrixXd augment(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd A(X.rows(), X.cols() + 1);
  A.leftCols(X.cols()) = X;
  A.col(X.cols()).setOnes();
  return A;
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

Eigen::VectorXd Coefficients::as_vector() const {
  Eigen::VectorXd v(weights.size() + 1);
  v.head(weights.size()) = weights;
  v(weights.size()) = intercept;
  return v;
}

Coefficients Coefficients::from_vector(const Eigen::VectorXd& v) {
  Coefficients c;
  c.weights = v.head(v.size() - 1);
  c.intercept = v(v.size() - 1);
  return c;
}

std::string Coefficients::to_json() const {
  nlohmann::json j;
  j["weights"] = std::vector<double>(weights.data(), weights.data() + weights.size());
  j["intercept"] = intercept;
  return j.dump(2);
}

Coefficients Coefficients::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Coefficients c;
  auto w = j.at("weights").get<std::vector<double>>();
  c.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<int>(w.size()));
  c.intercept = j.at("intercept").get<double>();
  return c;
}

FitKind fit_kind_from_string(const std::string& s) {
  if (s == "ols") return FitKind::kOls;
  if (s == "ridge") return FitKind::kRidge;
  if (s == "lasso") return FitKind::kLasso;
  throw std::runtime_error("unknown fit kind: " + s);
}

std::string to_string(FitKind kind) {
  switch (kind) {
    case FitKind::kOls: return "ols";
    case FitKind::kRidge: return "ridge";
    case FitKind::kLasso: return "lasso";
  }
  return "?";
}

Coefficients fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() < 1 || X.rows() != y.size())
    throw std::runtime_error("fit_ols: bad shapes");
  const Eigen::MatrixXd A = augment(X);
  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::VectorXd rhs = A.transpose() * y;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(kRankTol * gram.norm());
  Coefficients out;
  if (lu.rank() == gram.rows()) {
    Eigen::VectorXd beta = lu.solve(rhs);
    out = Coefficients::from_vector(beta);
  } else {
    // Minimum-norm least-squares solution via SVD.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd beta = svd.solve(y);
    out = Coefficients::from_vector(beta);
    out.rank_deficient = true;
  }
  if (!out.weights.allFinite() || !std::isfinite(out.intercept))
    throw std::runtime_error("fit_ols: non-finite solution");
  return out;
}

Coefficients fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double lambda, bool include_intercept) {
  if (lambda < 0) throw std::runtime_error("fit_ridge: negative lambda");
  if (lambda == 0 && include_intercept) return fit_ols(X, y);

  const Eigen::MatrixXd A = include_intercept ? augment(X) : X;
  Eigen::MatrixXd gram = A.transpose() * A;
  // Only weight rows are penalized; the intercept row (last) is not.
  for (int i = 0; i < X.cols(); ++i) gram(i, i) += lambda;
  Eigen::VectorXd beta = gram.ldlt().solve(A.transpose() * y);
  Coefficients out;
  if (include_intercept) {
    out = Coefficients::from_vector(beta);
  } else {
    out.weights = beta;
    out.intercept = 0.0;
  }
  return out;
}

Coefficients fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double lambda) {
  if (lambda < 0) throw std::runtime_error("fit_lasso: negative lambda");
  if (lambda == 0) return fit_ols(X, y);

  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  double intercept = y.mean();
  Eigen::VectorXd col_sq(d);
  for (int j = 0; j < d; ++j) col_sq(j) = X.col(j).squaredNorm();

  // residual r = y - X*beta - intercept, maintained incrementally
  Eigen::VectorXd r = y - Eigen::VectorXd::Constant(n, intercept);

  for (int sweep = 0; sweep < kLassoMaxSweeps; ++sweep) {
    double max_change = 0.0;
    for (int j = 0; j < d; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double old = beta(j);
      const double rho = X.col(j).dot(r) + col_sq(j) * old;
      const double updated = soft_threshold(rho, lambda / 2.0) / col_sq(j);
      if (updated != old) {
        r -= X.col(j) * (updated - old);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    const double new_intercept = intercept + r.mean();
    if (new_intercept != intercept) {
      r.array() -= new_intercept - intercept;
      max_change = std::max(max_change, std::abs(new_intercept - intercept));
      intercept = new_intercept;
    }
    if (max_change < kLassoTol) {
      Coefficients out;
      out.weights = beta;
      out.intercept = intercept;
      return out;
    }
  }
  throw std::runtime_error("fit_lasso: no convergence after " +
                           std::to_string(kLassoMaxSweeps) + " sweeps");
}

Coefficients fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const FitSpec& spec) {
  switch (spec.kind) {
    case FitKind::kOls:
      return fit_ols(X, y);
    case FitKind::kRidge:
      return fit_ridge(X, y, spec.lambda);
    case FitKind::kLasso:
      return fit_lasso(X, y, spec.lambda);
  }
  throw std::runtime_error("unknown fit kind");
}

Eigen::VectorXd predict(const Coefficients& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.weights.size())
    throw std::runtime_error("predict: dimension mismatch");
  return (X * model.weights).array() + model.intercept;
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size() || y.size() == 0)
    throw std::runtime_error("rmse: bad lengths");
  return std::sqrt((y - y_hat).squaredNorm() / y.size());
}

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size() || y.size() == 0)
    throw std::runtime_error("r_squared: bad lengths");
  const double ss_res = (y - y_hat).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (ss_tot == 0) throw std::runtime_error("r_squared: constant labels");
  return 1.0 - ss_res / ss_tot;
}

}  // namespace privreg
