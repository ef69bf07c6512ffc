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

#ifndef PRIVREG_CONVERSIONS_H_
#define PRIVREG_CONVERSIONS_H_

#include <string>

namespace privreg {

// The three-way bridge between the membership-inference posterior success
// rate, the mutual-information budget, and the DP-equivalent epsilon.
struct PrivacyLevel {
  double psr = 0.0;            // posterior success rate, in (0.5, 1)
  double mi = 0.0;             // mutual information budget, > 0
  double epsilon_equiv = 0.0;  // DP-equivalent epsilon
  double delta_equiv = 1e-5;   // delta used in the epsilon bound
  double prior = 0.5;          // adversary's prior success rate

  std::string to_json() const;
};

// psr*ln(2*psr) + (1-psr)*ln(2-2*psr); strictly increasing on (0.5, 1).
double psr_to_mi(double psr);

// ln((1-delta)/(1-psr) - 1).
double psr_to_epsilon(double psr, double delta);

// Numerical inverses (monotone bisection on (0.5, 1)).
double mi_to_psr(double mi);
double epsilon_to_psr(double epsilon, double delta);

PrivacyLevel level_from_psr(double psr, double delta);
PrivacyLevel level_from_mi(double mi, double delta);
PrivacyLevel level_from_epsilon(double epsilon, double delta);

}  // namespace privreg

#endif  // PRIVREG_CONVERSIONS_H_
