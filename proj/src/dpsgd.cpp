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

#include "privreg/dpsgd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace privreg {

std::string DpSgdConfig::to_json() const {
  nlohmann::json j;
  j["learning_rate"] = learning_rate;
  j["batch_size"] = batch_size;
  j["epochs"] = epochs;
  j["clip_norm"] = clip_norm;
  j["noise_multiplier"] = noise_multiplier;
  j["seed"] = seed;
  j["sampling"] = sampling == BatchSampling::kPoisson ? "poisson" : "fixed";
  j["init"] = init == WeightInit::kZeros ? "zeros" : "random";
  return j.dump();
}

DpSgdConfig DpSgdConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DpSgdConfig c;
  if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"];
  if (j.contains("batch_size")) c.batch_size = j["batch_size"];
  if (j.contains("epochs")) c.epochs = j["epochs"];
  if (j.contains("clip_norm")) c.clip_norm = j["clip_norm"];
  if (j.contains("noise_multiplier")) c.noise_multiplier = j["noise_multiplier"];
  if (j.contains("seed")) c.seed = j["seed"];
  if (j.contains("sampling")) {
    const std::string s = j["sampling"];
    if (s == "poisson") c.sampling = BatchSampling::kPoisson;
    else if (s == "fixed") c.sampling = BatchSampling::kFixed;
    else throw std::runtime_error("unknown sampling mode: " + s);
  }
  if (j.contains("init")) {
    const std::string s = j["init"];
    if (s == "zeros") c.init = WeightInit::kZeros;
    else if (s == "random") c.init = WeightInit::kRandom;
    else throw std::runtime_error("unknown init mode: " + s);
  }
  return c;
}

int dpsgd_steps(int n, const DpSgdConfig& config) {
  const int per_epoch = (n + config.batch_size - 1) / config.batch_size;
  return config.epochs * per_epoch;
}

Eigen::VectorXd clip_gradient(const Eigen::VectorXd& g, double clip_norm) {
  if (clip_norm <= 0) throw std::runtime_error("clip_norm must be > 0");
  const double norm = g.norm();
  if (norm <= clip_norm) return g;
  return g * (clip_norm / norm);
}

Coefficients dpsgd_train(const Dataset& data, const DpSgdConfig& config,
                         const StepObserver& observer) {
  const int n = data.n();
  const int d = data.d();
  const int p = d + 1;  // weights + intercept
  if (n < 1) throw std::runtime_error("dpsgd_train: empty dataset");
  if (config.batch_size < 1 || config.batch_size > n)
    throw std::runtime_error("dpsgd_train: batch_size must be in [1, n]");
  if (config.learning_rate <= 0 || config.epochs < 1 || config.clip_norm <= 0)
    throw std::runtime_error("dpsgd_train: bad hyperparameters");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd params = Eigen::VectorXd::Zero(p);
  if (config.init == WeightInit::kRandom) {
    for (int i = 0; i < p; ++i) params(i) = 0.1 * gauss(rng);
  }

  const double b = static_cast<double>(config.batch_size);
  const double q = b / n;
  const double noise_std = config.noise_multiplier * config.clip_norm / b;
  const int steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;

  std::vector<int> all_idx(n);
  std::iota(all_idx.begin(), all_idx.end(), 0);

  int step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int s = 0; s < steps_per_epoch; ++s, ++step) {
      std::vector<int> batch;
      if (config.sampling == BatchSampling::kPoisson) {
        for (int i = 0; i < n; ++i)
          if (unif(rng) < q) batch.push_back(i);
      } else {
        std::vector<int> idx = all_idx;
        std::shuffle(idx.begin(), idx.end(), rng);
        batch.assign(idx.begin(), idx.begin() + config.batch_size);
        std::sort(batch.begin(), batch.end());
      }

      Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
      std::vector<double> clipped_norms;
      clipped_norms.reserve(batch.size());
      for (int i : batch) {
        // Per-example gradient of 0.5*(w.x + c - y)^2.
        const double residual = data.features.row(i).dot(params.head(d)) +
                                params(d) - data.labels(i);
        Eigen::VectorXd g(p);
        g.head(d) = residual * data.features.row(i).transpose();
        g(d) = residual;
        g = clip_gradient(g, config.clip_norm);
        clipped_norms.push_back(g.norm());
        sum += g;
      }

      Eigen::VectorXd avg = sum / b;
      if (noise_std > 0) {
        for (int i = 0; i < p; ++i) avg(i) += noise_std * gauss(rng);
      }
      params -= config.learning_rate * avg;

      if (!params.allFinite())
        throw std::runtime_error("dpsgd_train: non-finite parameters at step " +
                                 std::to_string(step));
      if (observer) observer(step, clipped_norms, params);
    }
  }
  return Coefficients::from_vector(params);
}

}  // namespace privreg
