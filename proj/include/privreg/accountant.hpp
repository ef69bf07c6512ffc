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

#ifndef PRIVREG_ACCOUNTANT_H_
#define PRIVREG_ACCOUNTANT_H_

#include <vector>

namespace privreg {

struct DpParams {
  double epsilon = 1.0;      // > 0
  double delta = 1e-5;       // in (0,1)
};

// Per-step Renyi-DP guarantees of one mechanism invocation across a grid
// of orders.
struct RdpCurve {
  std::vector<double> orders;      // each > 1
  std::vector<double> rdp_values;  // matching, >= 0
};

// Order grid covering both the small-epsilon and large-epsilon regimes:
// {1.25, 1.5, 1.75, 2, 2.5, 3, 4, ..., 64, 128, 256}.
const std::vector<double>& default_rdp_orders();

// Per-step RDP of the Poisson-subsampled Gaussian mechanism with noise
// multiplier sigma and sampling rate q. At q=1 this is exactly
// alpha/(2 sigma^2); for q<1 it is the standard log-space summation bound
// (binomial series at integer orders, erfc series at fractional orders).
RdpCurve rdp_subsampled_gaussian(double sigma, double q,
                                 const std::vector<double>& orders);

// Single-order variant of the above.
double rdp_subsampled_gaussian_order(double sigma, double q, double alpha);

// Converts composed RDP to (epsilon, delta)-DP:
// epsilon = min over orders of steps*rdp(alpha) + ln(1/delta)/(alpha-1).
double rdp_to_dp(const RdpCurve& curve, int steps, double delta);

// Composed (epsilon, delta) for a full run at the default order grid.
double compute_epsilon(double sigma, double q, int steps, double delta);

// Smallest noise multiplier (within 1e-4 relative) whose composed epsilon
// is <= target.epsilon at the given sampling rate and step count. Throws
// if the target is unreachable with sigma <= 1e6.
double calibrate_sigma(const DpParams& target, double q, int steps);

}  // namespace privreg

#endif  // PRIVREG_ACCOUNTANT_H_
