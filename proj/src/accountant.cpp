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

#include "privreg/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace privreg {
namespace {

constexpr double kSigmaMax = 1e6;
constexpr double kCalibrationRelTol = 1e-4;
const double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sub(double a, double b) {
  // Requires a >= b.
  if (b == kNegInf) return a;
  if (a == b) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

// log(erfc(x)) with an asymptotic expansion for large x where erfc
// underflows.
double log_erfc(double x) {
  if (x < 20.0) {
    const double v = std::erfc(x);
    if (v > 0) return std::log(v);
  }
  // erfc(x) ~ exp(-x^2)/(x*sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4))
  const double x2 = x * x;
  return -x2 - std::log(x) - 0.5 * std::log(M_PI) +
         std::log1p(-0.5 / x2 + 0.75 / (x2 * x2));
}

// log of A_alpha for integer alpha >= 2 via the binomial expansion,
// entirely in log space.
double log_a_int(double q, double sigma, int alpha) {
  double log_a = kNegInf;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  double log_binom = 0.0;  // log C(alpha, 0)
  for (int k = 0; k <= alpha; ++k) {
    const double term = log_binom + k * log_q + (alpha - k) * log_1mq +
                        k * (k - 1) / (2.0 * sigma * sigma);
    log_a = log_add(log_a, term);
    log_binom += std::log(static_cast<double>(alpha - k)) -
                 std::log(static_cast<double>(k + 1));
  }
  return log_a;
}

// log of A_alpha for fractional alpha via the two-sided erfc series.
double log_a_frac(double q, double sigma, double alpha) {
  double log_a0 = kNegInf, log_a1 = kNegInf;
  const double z0 = sigma * sigma * std::log(1.0 / q - 1.0) + 0.5;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double s2 = sigma * sigma;

  double coef = 1.0;  // binom(alpha, i), updated iteratively
  int i = 0;
  while (true) {
    const double j = alpha - i;
    const double log_coef = std::log(std::abs(coef));
    const double log_t0 = log_coef + i * log_q + j * log_1mq;
    const double log_t1 = log_coef + j * log_q + i * log_1mq;
    const double log_e0 =
        std::log(0.5) + log_erfc((i - z0) / (std::sqrt(2.0) * sigma));
    const double log_e1 =
        std::log(0.5) + log_erfc((z0 - j) / (std::sqrt(2.0) * sigma));
    const double log_s0 = log_t0 + (i * i - i) / (2.0 * s2) + log_e0;
    const double log_s1 = log_t1 + (j * j - j) / (2.0 * s2) + log_e1;
    if (coef > 0) {
      log_a0 = log_add(log_a0, log_s0);
      log_a1 = log_add(log_a1, log_s1);
    } else {
      log_a0 = log_sub(log_a0, log_s0);
      log_a1 = log_sub(log_a1, log_s1);
    }
    ++i;
    coef *= (alpha - (i - 1)) / i;
    if (i > alpha && std::max(log_s0, log_s1) < -30.0) break;
    if (i > 5000) break;  // series has long converged by here
  }
  return log_add(log_a0, log_a1);
}

}  // namespace

const std::vector<double>& default_rdp_orders() {
  static const std::vector<double> orders = [] {
    std::vector<double> o = {1.25, 1.5, 1.75, 2.0, 2.5};
    for (int a = 3; a <= 64; ++a) o.push_back(a);
    o.push_back(128.0);
    o.push_back(256.0);
    return o;
  }();
  return orders;
}

double rdp_subsampled_gaussian_order(double sigma, double q, double alpha) {
  if (sigma <= 0) throw std::runtime_error("rdp: sigma must be > 0");
  if (!(q > 0 && q <= 1)) throw std::runtime_error("rdp: q must be in (0,1]");
  if (alpha <= 1) throw std::runtime_error("rdp: alpha must be > 1");

  if (q == 1.0) return alpha / (2.0 * sigma * sigma);

  const bool integer_alpha = std::floor(alpha) == alpha;
  const double log_a =
      integer_alpha ? log_a_int(q, sigma, static_cast<int>(alpha))
                    : log_a_frac(q, sigma, alpha);
  return std::max(0.0, log_a / (alpha - 1.0));
}

RdpCurve rdp_subsampled_gaussian(double sigma, double q,
                                 const std::vector<double>& orders) {
  RdpCurve curve;
  curve.orders = orders;
  curve.rdp_values.reserve(orders.size());
  for (double alpha : orders)
    curve.rdp_values.push_back(rdp_subsampled_gaussian_order(sigma, q, alpha));
  return curve;
}

double rdp_to_dp(const RdpCurve& curve, int steps, double delta) {
  if (curve.orders.empty()) throw std::runtime_error("rdp_to_dp: empty curve");
  if (!(delta > 0 && delta < 1))
    throw std::runtime_error("rdp_to_dp: delta must be in (0,1)");
  if (steps < 1) throw std::runtime_error("rdp_to_dp: steps must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < curve.orders.size(); ++i) {
    const double eps = steps * curve.rdp_values[i] +
                       std::log(1.0 / delta) / (curve.orders[i] - 1.0);
    best = std::min(best, eps);
  }
  return best;
}

double compute_epsilon(double sigma, double q, int steps, double delta) {
  return rdp_to_dp(rdp_subsampled_gaussian(sigma, q, default_rdp_orders()),
                   steps, delta);
}

double calibrate_sigma(const DpParams& target, double q, int steps) {
  if (target.epsilon <= 0) throw std::runtime_error("calibrate: epsilon <= 0");
  auto eps_at = [&](double sigma) {
    return compute_epsilon(sigma, q, steps, target.delta);
  };

  double lo = 1e-3;
  double hi = lo;
  while (eps_at(hi) > target.epsilon) {
    hi *= 2.0;
    if (hi > kSigmaMax)
      throw std::runtime_error("calibrate: target unreachable with sigma <= 1e6");
  }
  if (hi == lo) return lo;  // already private at the lower search bound
  lo = hi / 2.0;

  while (hi - lo > kCalibrationRelTol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (eps_at(mid) > target.epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace privreg
