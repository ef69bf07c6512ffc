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
#include <random>

#include "privreg/pac.hpp"

using namespace privreg;

namespace {

Dataset counting_dataset(int n, int d) {
  Dataset data;
  data.features = Eigen::MatrixXd::Zero(n, d);
  data.labels = Eigen::VectorXd::Ones(n);
  return data;
}

// Mechanism whose every output coordinate is twice the sample count, so
// adding one point moves each coordinate by exactly 2.
Coefficients count_mechanism_1d(const Dataset& data) {
  Coefficients c;
  c.weights = Eigen::VectorXd::Zero(0);
  c.intercept = 2.0 * data.n();
  return c;
}

// Two output dimensions, each moving by exactly 1 per added point.
Coefficients count_mechanism_2d(const Dataset& data) {
  Coefficients c;
  c.weights = Eigen::VectorXd::Constant(1, static_cast<double>(data.n()));
  c.intercept = static_cast<double>(data.n());
  return c;
}

Dataset gaussian_dataset(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  Dataset data;
  data.features.resize(n, d);
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.features(i, j) = g(rng);
    data.labels(i) = data.features(i, 0) - 0.5 * data.features.row(i).sum() +
                     0.3 * g(rng);
  }
  return data;
}

}  // namespace

TEST_CASE("compute_projection basics") {
  SUBCASE("rank-1 samples align the first right-singular vector") {
    Eigen::VectorXd axis(3);
    axis << 1.0, -2.0, 0.5;
    axis.normalize();
    Eigen::MatrixXd samples(10, 3);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0, 1);
    for (int i = 0; i < 10; ++i) samples.row(i) = g(rng) * axis.transpose();
    ProjectionBasis basis = compute_projection(samples);
    const double cosine = std::abs(basis.v_t.row(0).dot(axis));
    CHECK(cosine > 1.0 - 1e-8);
  }

  SUBCASE("orthogonality and reconstruction") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0, 1);
    Eigen::MatrixXd samples(12, 4);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 4; ++j) samples(i, j) = g(rng);
    ProjectionBasis basis = compute_projection(samples);
    CHECK((basis.v_t * basis.v_t.transpose() -
           Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);

    Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(
        centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXd rebuilt = svd.matrixU() *
                              svd.singularValues().asDiagonal() *
                              svd.matrixV().transpose();
    CHECK((rebuilt - centered).norm() < 1e-8);
  }

  SUBCASE("degenerate identical samples give identity basis") {
    Eigen::MatrixXd samples = Eigen::MatrixXd::Constant(5, 3, 2.5);
    ProjectionBasis basis = compute_projection(samples);
    CHECK(basis.is_identity());
  }

  SUBCASE("k < 2 rejected") {
    CHECK_THROWS(compute_projection(Eigen::MatrixXd::Zero(1, 3)));
  }
}

TEST_CASE("estimate_noise degenerate and hand-computed cases") {
  SUBCASE("constant mechanism yields zero variances") {
    Dataset data = counting_dataset(8, 1);
    PacEstimationConfig cfg;
    cfg.mi_budget = 0.1;
    cfg.min_rounds = 5;
    NoiseProfile profile = estimate_noise(
        data,
        [](const Dataset& d) {
          Coefficients c;
          c.weights = Eigen::VectorXd::Zero(d.d());
          c.intercept = 3.0;
          return c;
        },
        cfg);
    CHECK(profile.variances.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("1-d deviation of exactly 2") {
    Dataset data = counting_dataset(6, 0);
    PacEstimationConfig cfg;
    cfg.mi_budget = 0.130812;
    cfg.min_rounds = 5;
    NoiseProfile profile = estimate_noise(data, count_mechanism_1d, cfg);
    // vbar = 4 in every round: e = 2*2/(4*MI).
    CHECK(profile.variances(0) ==
          doctest::Approx(4.0 / (4.0 * 0.130812)).epsilon(1e-12));
    CHECK(profile.variances(0) == doctest::Approx(7.6446).epsilon(1e-4));
  }

  SUBCASE("2-d symmetric case") {
    Dataset data = counting_dataset(6, 1);
    PacEstimationConfig cfg;
    cfg.mi_budget = 0.5;
    cfg.min_rounds = 5;
    NoiseProfile profile = estimate_noise(data, count_mechanism_2d, cfg);
    CHECK(profile.variances(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(profile.variances(1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("MI budget identity holds per instance") {
  Dataset data = gaussian_dataset(20, 3, 77);
  PacEstimationConfig cfg;
  cfg.mi_budget = 0.270438;
  cfg.min_rounds = 10;
  cfg.max_rounds = 60;
  NoiseProfile profile =
      estimate_noise(data, make_fit_mechanism({FitKind::kRidge, 0.5}), cfg);
  REQUIRE(!profile.instances.empty());
  for (const auto& inst : profile.instances) {
    double sum = 0.0;
    for (int i = 0; i < inst.mean_sq_dev.size(); ++i) {
      if (inst.mean_sq_dev(i) > 0) sum += inst.mean_sq_dev(i) / inst.variances(i);
    }
    CHECK(sum == doctest::Approx(4.0 * cfg.mi_budget).epsilon(1e-9));
  }
}

TEST_CASE("doubling MI exactly halves every per-instance variance") {
  Dataset data = gaussian_dataset(15, 2, 5);
  PacEstimationConfig cfg;
  cfg.mi_budget = 0.1;
  cfg.min_rounds = 8;
  cfg.max_rounds = 40;
  cfg.seed = 4;
  NoiseProfile a =
      estimate_noise(data, make_fit_mechanism({FitKind::kOls, 0.0}), cfg);
  cfg.mi_budget = 0.2;
  NoiseProfile b =
      estimate_noise(data, make_fit_mechanism({FitKind::kOls, 0.0}), cfg);
  REQUIRE(a.instances.size() == b.instances.size());
  for (size_t i = 0; i < a.instances.size(); ++i) {
    for (int j = 0; j < a.instances[i].variances.size(); ++j) {
      CHECK(b.instances[i].variances(j) == a.instances[i].variances(j) / 2.0);
    }
  }
  CHECK(b.variances == a.variances / 2.0);
}

TEST_CASE("estimate_noise convergence bookkeeping") {
  Dataset data = gaussian_dataset(10, 2, 3);
  PacEstimationConfig cfg;
  cfg.mi_budget = 0.1;
  cfg.min_rounds = 4;
  cfg.max_rounds = 5;  // too tight to converge with a noisy mechanism
  cfg.convergence_threshold = 1e-14;
  NoiseProfile profile =
      estimate_noise(data, make_fit_mechanism({FitKind::kOls, 0.0}), cfg);
  CHECK_FALSE(profile.converged);
  for (int r : profile.rounds_per_instance) CHECK(r == 5);
}

TEST_CASE("estimate_noise input validation") {
  Dataset data = gaussian_dataset(8, 1, 1);
  PacEstimationConfig cfg;
  cfg.mi_budget = 0.0;
  CHECK_THROWS(estimate_noise(data, make_fit_mechanism({}), cfg));
  cfg.mi_budget = 0.1;
  cfg.min_rounds = 1;
  CHECK_THROWS(estimate_noise(data, make_fit_mechanism({}), cfg));
  cfg.min_rounds = 4;
  cfg.sampling_rate = 0.0;
  CHECK_THROWS(estimate_noise(data, make_fit_mechanism({}), cfg));
}

TEST_CASE("add_noise statistics and identities") {
  SUBCASE("all-zero profile leaves the model unchanged") {
    Coefficients model;
    model.weights.resize(2);
    model.weights << 1.5, -2.0;
    model.intercept = 0.25;
    NoiseProfile profile;
    profile.variances = Eigen::VectorXd::Zero(3);
    profile.basis = ProjectionBasis::identity(3);
    Coefficients noisy = add_noise(model, profile, 9);
    CHECK(noisy.weights == model.weights);
    CHECK(noisy.intercept == model.intercept);
  }

  SUBCASE("Monte-Carlo mean and variance per dimension") {
    const int kDraws = 100000;
    Coefficients model;
    model.weights = Eigen::VectorXd::Zero(1);
    model.intercept = 0.0;
    NoiseProfile profile;
    profile.variances.resize(2);
    profile.variances << 0.5, 2.0;
    profile.basis = ProjectionBasis::identity(2);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(2);
    for (int i = 0; i < kDraws; ++i) {
      const Eigen::VectorXd v = add_noise(model, profile, 1000 + i).as_vector();
      sum += v;
      sum_sq += v.cwiseProduct(v);
    }
    for (int j = 0; j < 2; ++j) {
      const double mean = sum(j) / kDraws;
      const double var = sum_sq(j) / kDraws - mean * mean;
      CHECK(std::abs(mean) < 4.0 * std::sqrt(profile.variances(j) / kDraws));
      CHECK(var == doctest::Approx(profile.variances(j)).epsilon(0.05));
    }
  }

  SUBCASE("projected-basis noise preserves total power") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0, 1);
    Eigen::MatrixXd samples(20, 3);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 3; ++j) samples(i, j) = g(rng);
    ProjectionBasis basis = compute_projection(samples);

    NoiseProfile profile;
    profile.variances.resize(3);
    profile.variances << 0.1, 1.0, 2.5;
    profile.basis = basis;
    profile.mode = PacMode::kCovarianceCorrect;
    // Covariance in original coordinates is V diag(e) V^T; its trace equals
    // sum(e) for any orthogonal V.
    const Eigen::MatrixXd cov = basis.v_t.transpose() *
                                profile.variances.asDiagonal() * basis.v_t;
    CHECK(cov.trace() == doctest::Approx(profile.variances.sum()).epsilon(1e-12));
  }

  SUBCASE("negative variance rejected") {
    Coefficients model;
    model.weights = Eigen::VectorXd::Zero(1);
    NoiseProfile profile;
    profile.variances.resize(2);
    profile.variances << -0.1, 1.0;
    profile.basis = ProjectionBasis::identity(2);
    CHECK_THROWS(add_noise(model, profile, 1));
  }
}

TEST_CASE("noise profile JSON round trip") {
  NoiseProfile profile;
  profile.variances.resize(2);
  profile.variances << 0.25, 4.0;
  profile.basis = ProjectionBasis::identity(2);
  profile.mi_budget = 0.13;
  profile.mode = PacMode::kPaperLiteral;
  profile.converged = false;
  profile.rounds_per_instance = {12, 30};
  NoiseProfile back = NoiseProfile::from_json(profile.to_json());
  CHECK(back.variances == profile.variances);
  CHECK(back.basis.v_t == profile.basis.v_t);
  CHECK(back.mi_budget == profile.mi_budget);
  CHECK(back.mode == profile.mode);
  CHECK(back.converged == profile.converged);
  CHECK(back.rounds_per_instance == profile.rounds_per_instance);
}

TEST_CASE("pac_train limits and determinism") {
  Dataset data = gaussian_dataset(30, 3, 13);
  PacEstimationConfig cfg;
  cfg.min_rounds = 6;
  cfg.max_rounds = 30;
  cfg.seed = 2;

  SUBCASE("vanishing-noise limit approaches the non-private fit") {
    PrivacyLevel level = level_from_psr(1.0 - 1e-12, 1e-5);
    level.mi = 1e12;  // MI -> infinity drives the variances to 0
    Coefficients noisy =
        pac_train(data, {FitKind::kOls, 0.0}, level, cfg, 8);
    Coefficients clean = fit_ols(data.features, data.labels);
    CHECK((noisy.as_vector() - clean.as_vector()).cwiseAbs().maxCoeff() < 1e-4);
  }

  SUBCASE("fixed seeds give deterministic output") {
    const PrivacyLevel level = level_from_psr(0.75, 1e-5);
    Coefficients a = pac_train(data, {FitKind::kRidge, 1.0}, level, cfg, 8);
    Coefficients b = pac_train(data, {FitKind::kRidge, 1.0}, level, cfg, 8);
    CHECK(a.weights == b.weights);
    CHECK(a.intercept == b.intercept);
  }

  SUBCASE("mi must be positive") {
    PrivacyLevel level;
    level.mi = 0.0;
    CHECK_THROWS(pac_train(data, {FitKind::kOls, 0.0}, level, cfg, 1));
  }
}

TEST_CASE("paper_literal mode compares against the full dataset") {
  Dataset data = counting_dataset(6, 0);
  PacEstimationConfig cfg;
  cfg.mi_budget = 0.1;
  cfg.min_rounds = 5;
  cfg.mode = PacMode::kPaperLiteral;
  // M(B) = M(D) = 2n; M(A) = 2*|A| with |A| ~ Binomial(n-1, 0.5), so the
  // deviations are much larger than the A vs A+{x} comparison.
  NoiseProfile literal = estimate_noise(data, count_mechanism_1d, cfg);
  cfg.mode = PacMode::kCovarianceCorrect;
  NoiseProfile bound = estimate_noise(data, count_mechanism_1d, cfg);
  CHECK(literal.variances(0) > bound.variances(0));
}
