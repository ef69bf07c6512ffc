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

#include "privreg/pac.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "privreg/rng.hpp"

namespace privreg {
namespace {

Dataset take_rows(const Dataset& data, const std::vector<int>& idx) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.features.resize(static_cast<int>(idx.size()), data.d());
  out.labels.resize(static_cast<int>(idx.size()));
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
    out.features.row(i) = data.features.row(idx[i]);
    out.labels(i) = data.labels(idx[i]);
  }
  return out;
}

std::vector<int> poisson_sample(int n, int skip, double q,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (i == skip) continue;
    if (unif(rng) < q) idx.push_back(i);
  }
  return idx;
}

Eigen::VectorXd noise_variances_from_mean_sq_dev(const Eigen::VectorXd& vbar,
                                                 double mi) {
  const Eigen::VectorXd sqrt_v = vbar.array().max(0.0).sqrt();
  const double total = sqrt_v.sum();
  return sqrt_v * (total / (4.0 * mi));
}

}  // namespace

ProjectionBasis ProjectionBasis::identity(int p) {
  ProjectionBasis basis;
  basis.v_t = Eigen::MatrixXd::Identity(p, p);
  basis.singular_values = Eigen::VectorXd::Zero(p);
  return basis;
}

bool ProjectionBasis::is_identity() const {
  return v_t.size() > 0 &&
         v_t.isApprox(Eigen::MatrixXd::Identity(v_t.rows(), v_t.cols()));
}

PacMode pac_mode_from_string(const std::string& s) {
  if (s == "covariance_correct") return PacMode::kCovarianceCorrect;
  if (s == "paper_literal") return PacMode::kPaperLiteral;
  throw std::runtime_error("unknown pac mode: " + s);
}

std::string to_string(PacMode mode) {
  return mode == PacMode::kCovarianceCorrect ? "covariance_correct"
                                             : "paper_literal";
}

std::string NoiseProfile::to_json() const {
  nlohmann::json j;
  j["variances"] =
      std::vector<double>(variances.data(), variances.data() + variances.size());
  std::vector<std::vector<double>> vt(basis.v_t.rows(),
                                      std::vector<double>(basis.v_t.cols()));
  for (int r = 0; r < basis.v_t.rows(); ++r)
    for (int c = 0; c < basis.v_t.cols(); ++c) vt[r][c] = basis.v_t(r, c);
  j["v_t"] = vt;
  j["mi_budget"] = mi_budget;
  j["mode"] = privreg::to_string(mode);
  j["converged"] = converged;
  j["rounds_per_instance"] = rounds_per_instance;
  return j.dump(2);
}

NoiseProfile NoiseProfile::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  NoiseProfile p;
  auto vars = j.at("variances").get<std::vector<double>>();
  p.variances =
      Eigen::Map<Eigen::VectorXd>(vars.data(), static_cast<int>(vars.size()));
  auto vt = j.at("v_t").get<std::vector<std::vector<double>>>();
  const int rows = static_cast<int>(vt.size());
  const int cols = rows > 0 ? static_cast<int>(vt[0].size()) : 0;
  p.basis.v_t.resize(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) p.basis.v_t(r, c) = vt[r][c];
  p.basis.singular_values = Eigen::VectorXd::Zero(rows);
  p.mi_budget = j.at("mi_budget").get<double>();
  p.mode = pac_mode_from_string(j.at("mode").get<std::string>());
  p.converged = j.at("converged").get<bool>();
  p.rounds_per_instance =
      j.at("rounds_per_instance").get<std::vector<int>>();
  return p;
}

Mechanism make_fit_mechanism(const FitSpec& spec) {
  return [spec](const Dataset& data) -> Coefficients {
    if (data.n() == 0) {
      Coefficients zero;
      zero.weights = Eigen::VectorXd::Zero(data.d());
      return zero;
    }
    return fit(data.features, data.labels, spec);
  };
}

ProjectionBasis compute_projection(const Eigen::MatrixXd& weight_samples) {
  const int k = static_cast<int>(weight_samples.rows());
  const int p = static_cast<int>(weight_samples.cols());
  if (k < 2) throw std::runtime_error("compute_projection: need k >= 2 samples");

  Eigen::MatrixXd centered =
      weight_samples.rowwise() - weight_samples.colwise().mean();
  if (centered.norm() < 1e-14) return ProjectionBasis::identity(p);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProjectionBasis basis;
  basis.v_t = svd.matrixV().transpose();
  basis.singular_values = Eigen::VectorXd::Zero(p);
  const int r = static_cast<int>(svd.singularValues().size());
  basis.singular_values.head(std::min(r, p)) =
      svd.singularValues().head(std::min(r, p));
  return basis;
}

ProjectionBasis estimate_projection(const Dataset& data,
                                    const Mechanism& mechanism, int k,
                                    double q, std::uint64_t seed) {
  const int p = data.d() + 1;
  Eigen::MatrixXd samples(k, p);
  for (int i = 0; i < k; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const auto idx = poisson_sample(data.n(), -1, q, rng);
    samples.row(i) = mechanism(take_rows(data, idx)).as_vector();
  }
  return compute_projection(samples);
}

NoiseProfile estimate_noise(const Dataset& data, const Mechanism& mechanism,
                            const PacEstimationConfig& config) {
  if (config.mi_budget <= 0)
    throw std::runtime_error("estimate_noise: mi_budget must be > 0");
  if (!(config.sampling_rate > 0 && config.sampling_rate < 1))
    throw std::runtime_error("estimate_noise: sampling_rate must be in (0,1)");
  if (config.min_rounds < 2)
    throw std::runtime_error("estimate_noise: min_rounds must be >= 2");

  const int n = data.n();
  const int p = data.d() + 1;
  const ProjectionBasis basis = config.projection.v_t.size() > 0
                                    ? config.projection
                                    : ProjectionBasis::identity(p);
  if (basis.v_t.rows() != p || basis.v_t.cols() != p)
    throw std::runtime_error("estimate_noise: projection dimension mismatch");

  std::vector<int> instance_ids;
  if (config.max_instances > 0 && config.max_instances < n) {
    // Evenly strided subset.
    for (int k = 0; k < config.max_instances; ++k)
      instance_ids.push_back(static_cast<int>(
          static_cast<long long>(k) * n / config.max_instances));
  } else {
    instance_ids.resize(n);
    for (int i = 0; i < n; ++i) instance_ids[i] = i;
  }

  NoiseProfile profile;
  profile.basis = basis;
  profile.mi_budget = config.mi_budget;
  profile.mode = config.mode;
  profile.variances = Eigen::VectorXd::Zero(p);
  profile.per_dim_mean_sq_dev = Eigen::VectorXd::Zero(p);
  double best_total = -1.0;

  for (int x : instance_ids) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(x)));

    // Outputs on the full dataset including x, for the literal B = D' + {x}.
    Eigen::VectorXd out_full_proj;
    if (config.mode == PacMode::kPaperLiteral)
      out_full_proj = basis.v_t * mechanism(data).as_vector();

    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd prev_mean = Eigen::VectorXd::Zero(p);
    int rounds = 0;
    bool converged = false;
    while (rounds < config.max_rounds && !converged) {
      std::vector<int> a_idx = poisson_sample(n, x, config.sampling_rate, rng);
      const Eigen::VectorXd out_a =
          basis.v_t * mechanism(take_rows(data, a_idx)).as_vector();

      Eigen::VectorXd out_b;
      if (config.mode == PacMode::kPaperLiteral) {
        out_b = out_full_proj;
      } else {
        std::vector<int> b_idx = a_idx;
        b_idx.insert(std::lower_bound(b_idx.begin(), b_idx.end(), x), x);
        out_b = basis.v_t * mechanism(take_rows(data, b_idx)).as_vector();
      }

      sum_sq += (out_a - out_b).array().square().matrix();
      ++rounds;

      const Eigen::VectorXd mean = sum_sq / rounds;
      if (rounds >= config.min_rounds &&
          ((mean - prev_mean).cwiseAbs().maxCoeff() <
           config.convergence_threshold)) {
        converged = true;
      }
      prev_mean = mean;
    }

    PacInstanceStats stats;
    stats.mean_sq_dev = sum_sq / rounds;
    stats.rounds = rounds;
    stats.converged = converged;
    stats.variances =
        noise_variances_from_mean_sq_dev(stats.mean_sq_dev, config.mi_budget);

    Eigen::VectorXd e = stats.variances;
    if (config.mode == PacMode::kPaperLiteral) {
      // Verbatim pseudocode: read the diagonal of V^T * diag(e), clamped
      // to stay a valid variance.
      Eigen::VectorXd literal(p);
      for (int i = 0; i < p; ++i)
        literal(i) = std::max(0.0, basis.v_t(i, i) * e(i));
      e = literal;
    }
    profile.variances = profile.variances.cwiseMax(e);
    profile.rounds_per_instance.push_back(rounds);
    if (!converged) profile.converged = false;

    const double total = stats.variances.sum();
    if (total > best_total) {
      best_total = total;
      profile.per_dim_mean_sq_dev = stats.mean_sq_dev;
    }
    profile.instances.push_back(std::move(stats));
  }

  if (!profile.variances.allFinite())
    throw std::runtime_error("estimate_noise: non-finite variances");
  return profile;
}

Coefficients add_noise(const Coefficients& model, const NoiseProfile& profile,
                       std::uint64_t seed) {
  const int p = model.dimension() + 1;
  if (profile.variances.size() != p)
    throw std::runtime_error("add_noise: profile dimension mismatch");
  if (profile.variances.minCoeff() < 0)
    throw std::runtime_error("add_noise: negative variance in profile");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(p);
  for (int i = 0; i < p; ++i)
    z(i) = std::sqrt(profile.variances(i)) * gauss(rng);

  Eigen::VectorXd noise;
  if (profile.mode == PacMode::kCovarianceCorrect) {
    // z lives in the projected basis; map back with V.
    noise = profile.basis.v_t.transpose() * z;
  } else {
    noise = z;
  }
  return Coefficients::from_vector(model.as_vector() + noise);
}

Coefficients pac_train(const Dataset& data, const FitSpec& fit_spec,
                       const PrivacyLevel& level,
                       const PacEstimationConfig& config, std::uint64_t seed) {
  if (level.mi <= 0) throw std::runtime_error("pac_train: level.mi must be > 0");
  PacEstimationConfig cfg = config;
  cfg.mi_budget = level.mi;
  const Mechanism mechanism = make_fit_mechanism(fit_spec);
  const NoiseProfile profile = estimate_noise(data, mechanism, cfg);
  const Coefficients model = fit(data.features, data.labels, fit_spec);
  return add_noise(model, profile, seed);
}

}  // namespace privreg
