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

#ifndef PRIVREG_DPSGD_H_
#define PRIVREG_DPSGD_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>

#include "privreg/dataio.hpp"
#include "privreg/regression.hpp"

namespace privreg {

enum class BatchSampling {
  kPoisson,  // accountant-consistent: each example kept w.p. q = b/n
  kFixed,    // uniform without replacement, size exactly b
};

enum class WeightInit { kZeros, kRandom };

struct DpSgdConfig {
  double learning_rate = 0.01;
  int batch_size = 16;
  int epochs = 10;
  double clip_norm = 1.0;
  double noise_multiplier = 0.0;
  std::uint64_t seed = 0;
  BatchSampling sampling = BatchSampling::kPoisson;
  WeightInit init = WeightInit::kZeros;

  std::string to_json() const;
  static DpSgdConfig from_json(const std::string& text);
};

// Number of noisy releases used for accounting: epochs * ceil(n / b).
int dpsgd_steps(int n, const DpSgdConfig& config);

// g * min(1, clip_norm / ||g||_2); the zero vector passes through.
Eigen::VectorXd clip_gradient(const Eigen::VectorXd& g, double clip_norm);

// Called once per step with the per-example clipped gradient norms and the
// parameter vector after the update; used by tests to instrument runs.
using StepObserver =
    std::function<void(int step, const std::vector<double>& clipped_norms,
                       const Eigen::VectorXd& params)>;

// DPSGD over squared-error loss 0.5*(w.x + c - y)^2 per example. Gradients
// are taken over the full (weights, intercept) vector, clipped per example
// to clip_norm, averaged over the nominal batch size b, and perturbed with
// per-coordinate Gaussian noise of std sigma*C/b. Deterministic given the
// seed. Throws if parameters go non-finite, naming the step.
Coefficients dpsgd_train(const Dataset& data, const DpSgdConfig& config,
                         const StepObserver& observer = nullptr);

}  // namespace privreg

#endif  // PRIVREG_DPSGD_H_
