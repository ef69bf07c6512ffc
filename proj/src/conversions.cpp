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

#include "privreg/conversions.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace privreg {
namespace {

// Bisection for a strictly increasing f on (0.5, 1).
double invert_on_psr(double target, double (*f)(double, double), double delta) {
  double lo = 0.5 + 1e-15, hi = 1.0 - 1e-15;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid, delta) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double mi_fn(double psr, double) { return psr_to_mi(psr); }

}  // namespace

std::string PrivacyLevel::to_json() const {
  nlohmann::json j;
  j["psr"] = psr;
  j["mi"] = mi;
  j["epsilon"] = epsilon_equiv;
  j["delta"] = delta_equiv;
  j["prior"] = prior;
  return j.dump(2);
}

double psr_to_mi(double psr) {
  if (!(psr > 0.5 && psr < 1.0))
    throw std::runtime_error("psr must be in (0.5, 1)");
  return psr * std::log(2.0 * psr) + (1.0 - psr) * std::log(2.0 - 2.0 * psr);
}

double psr_to_epsilon(double psr, double delta) {
  if (!(psr > 0.5 && psr < 1.0))
    throw std::runtime_error("psr must be in (0.5, 1)");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::runtime_error("delta must be in [0, 1)");
  const double arg = (1.0 - delta) / (1.0 - psr) - 1.0;
  if (arg <= 0) throw std::runtime_error("psr_to_epsilon: log of nonpositive");
  return std::log(arg);
}

double mi_to_psr(double mi) {
  if (mi <= 0) throw std::runtime_error("mi must be > 0");
  const double mi_max = psr_to_mi(1.0 - 1e-15);
  if (mi >= mi_max) throw std::runtime_error("mi out of representable range");
  return invert_on_psr(mi, mi_fn, 0.0);
}

double epsilon_to_psr(double epsilon, double delta) {
  // Direct inverse of ln((1-delta)/(1-psr) - 1).
  const double psr = 1.0 - (1.0 - delta) / (1.0 + std::exp(epsilon));
  if (!(psr > 0.5 && psr < 1.0))
    throw std::runtime_error("epsilon_to_psr: result outside (0.5, 1)");
  return psr;
}

PrivacyLevel level_from_psr(double psr, double delta) {
  PrivacyLevel level;
  level.psr = psr;
  level.delta_equiv = delta;
  level.mi = psr_to_mi(psr);
  level.epsilon_equiv = psr_to_epsilon(psr, delta);
  return level;
}

PrivacyLevel level_from_mi(double mi, double delta) {
  return level_from_psr(mi_to_psr(mi), delta);
}

PrivacyLevel level_from_epsilon(double epsilon, double delta) {
  return level_from_psr(epsilon_to_psr(epsilon, delta), delta);
}

}  // namespace privreg
