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

#include <doctest.h>

#include <cmath>

#include "privreg/conversions.hpp"

using namespace privreg;

namespace {

// The published conversion table at delta = 1e-5.
struct Row { double psr, epsilon, mi; };
constexpr Row kTable[] = {
    {0.52, 0.080023, 0.000800}, {0.55, 0.200652, 0.005008},
    {0.65, 0.619023, 0.045700}, {0.75, 1.098598, 0.130812},
    {0.85, 1.734589, 0.270438}, {0.95, 2.944428, 0.494631},
    {0.98, 3.891810, 0.595108},
};

}  // namespace

TEST_CASE("conversion table rows reproduce at delta=1e-5") {
  // The published table truncates (not rounds) both columns to 6 decimals
  // (e.g. MI(0.95) = 0.4946319... is listed as 0.494631), so the MI
  // comparison happens at the table's precision.
  for (const Row& row : kTable) {
    const double mi6 = std::floor(psr_to_mi(row.psr) * 1e6) / 1e6;
    CHECK(std::abs(mi6 - row.mi) < 5e-7);
    CHECK(std::abs(psr_to_epsilon(row.psr, 1e-5) - row.epsilon) < 5e-6);
  }
}

TEST_CASE("psr_to_mi boundary behavior and monotonicity") {
  CHECK(psr_to_mi(0.5 + 1e-9) < 1e-15);
  double prev = 0.0;
  for (double psr = 0.51; psr < 0.995; psr += 0.01) {
    const double mi = psr_to_mi(psr);
    CHECK(mi > prev);
    prev = mi;
  }
  CHECK_THROWS(psr_to_mi(0.5));
  CHECK_THROWS(psr_to_mi(1.0));
  CHECK_THROWS(psr_to_mi(0.3));
}

TEST_CASE("psr_to_epsilon monotonicity and domain") {
  double prev = -1e18;
  for (double psr = 0.51; psr < 0.995; psr += 0.01) {
    const double eps = psr_to_epsilon(psr, 1e-5);
    CHECK(eps > prev);
    prev = eps;
  }
  // Decreasing in delta.
  CHECK(psr_to_epsilon(0.75, 1e-3) < psr_to_epsilon(0.75, 1e-7));
  // Argument of ln must stay positive: psr < delta boundary.
  CHECK_THROWS(psr_to_epsilon(0.51, 0.999999));
}

TEST_CASE("numerical inverses round trip") {
  for (const Row& row : kTable) {
    CHECK(mi_to_psr(row.mi + (psr_to_mi(row.psr) - row.mi)) ==
          doctest::Approx(row.psr).epsilon(1e-9));
    CHECK(epsilon_to_psr(psr_to_epsilon(row.psr, 1e-5), 1e-5) ==
          doctest::Approx(row.psr).epsilon(1e-12));
  }
  CHECK_THROWS(mi_to_psr(0.0));
}

TEST_CASE("level constructors agree") {
  const PrivacyLevel a = level_from_psr(0.85, 1e-5);
  const PrivacyLevel b = level_from_mi(a.mi, 1e-5);
  const PrivacyLevel c = level_from_epsilon(a.epsilon_equiv, 1e-5);
  CHECK(b.psr == doctest::Approx(0.85).epsilon(1e-9));
  CHECK(c.psr == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(a.prior == 0.5);
  CHECK(a.delta_equiv == 1e-5);
}
