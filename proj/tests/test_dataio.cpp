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
#include <cstdio>
#include <fstream>

#include "privreg/dataio.hpp"

using namespace privreg;

namespace {

std::string write_temp_csv(const std::string& name, const std::string& body) {
  std::string path = std::string("/tmp/privreg_test_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

const std::string kDataDir = PRIVREG_DATA_DIR;

}  // namespace

TEST_CASE("load_csv parses a small numeric table") {
  auto path = write_temp_csv("small.csv", "x,y\n1,2\n3,4\n5,6\n");
  RawTable t = load_csv(path, "y", {"?"});
  CHECK(t.num_rows() == 3);
  CHECK(t.num_cols() == 2);
  CHECK(t.kinds[0] == ColumnKind::kNumeric);
  CHECK(t.kinds[1] == ColumnKind::kNumeric);
  CHECK(t.label_index == 1);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) CHECK_FALSE(t.missing[r][c]);
  CHECK(t.values[1][0] == 3.0);
  std::remove(path.c_str());
}

TEST_CASE("load_csv flags declared missing tokens") {
  auto path = write_temp_csv("missing.csv", "a,b\n?,1\n2,3\n");
  RawTable t = load_csv(path, "b", {"?"});
  CHECK(t.missing[0][0]);
  CHECK_FALSE(t.missing[1][0]);
  CHECK(t.kinds[0] == ColumnKind::kNumeric);  // "?" does not make it categorical
  std::remove(path.c_str());
}

TEST_CASE("load_csv errors") {
  CHECK_THROWS(load_csv("/nonexistent/file.csv", "y", {}));

  auto empty = write_temp_csv("empty.csv", "");
  CHECK_THROWS(load_csv(empty, "y", {}));
  std::remove(empty.c_str());

  auto nolabel = write_temp_csv("nolabel.csv", "a,b\n1,2\n");
  CHECK_THROWS(load_csv(nolabel, "z", {}));
  std::remove(nolabel.c_str());

  auto ragged = write_temp_csv("ragged.csv", "a,b\n1,2\n1\n");
  CHECK_THROWS(load_csv(ragged, "b", {}));
  std::remove(ragged.c_str());
}

TEST_CASE("bundled concrete dataset shape") {
  RawTable t = load_csv(kDataDir + "/concrete.csv", "compressive_strength",
                        {"?", "", "NA"});
  CHECK(t.num_rows() == 103);
  CHECK(t.num_cols() == 8);  // 7 features + label
  Dataset d = encode(impute_mean(t));
  CHECK(d.n() == 103);
  CHECK(d.d() == 7);
  CHECK(d.features.allFinite());
}

TEST_CASE("impute_mean fills numeric gaps with the column mean") {
  auto path = write_temp_csv("imp.csv", "a,y\n1,0\n?,0\n3,1\n");
  RawTable t = load_csv(path, "y", {"?"});
  RawTable imp = impute_mean(t);
  CHECK(imp.values[1][0] == doctest::Approx(2.0));
  for (int r = 0; r < 3; ++r) CHECK_FALSE(imp.missing[r][0]);

  // Idempotence and identity on complete tables.
  RawTable imp2 = impute_mean(imp);
  CHECK(imp2.values == imp.values);
  std::remove(path.c_str());
}

TEST_CASE("impute_mean singleton mean") {
  auto path = write_temp_csv("imp2.csv", "a,y\n4,0\n?,0\n?,1\n");
  RawTable t = load_csv(path, "y", {"?"});
  RawTable imp = impute_mean(t);
  CHECK(imp.values[1][0] == 4.0);
  CHECK(imp.values[2][0] == 4.0);
  std::remove(path.c_str());
}

TEST_CASE("impute_mean rejects an all-missing column") {
  auto path = write_temp_csv("imp3.csv", "a,y\n?,0\n?,1\n");
  RawTable t = load_csv(path, "y", {"?"});
  CHECK_THROWS_WITH_AS(impute_mean(t), doctest::Contains("a"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("standardize: population std, constant columns, round trip") {
  Dataset d;
  d.features.resize(3, 2);
  d.features << 1, 5, 2, 5, 3, 5;
  d.labels.resize(3);
  d.labels << 10, 20, 30;
  d.feature_names = {"a", "c"};

  auto [scaled, params] = standardize(d);
  // Column [1,2,3]: mean 2, population std sqrt(2/3).
  CHECK(scaled.features(0, 0) == doctest::Approx(-1.2247448714).epsilon(1e-9));
  CHECK(scaled.features(1, 0) == doctest::Approx(0.0));
  CHECK(scaled.features(2, 0) == doctest::Approx(1.2247448714).epsilon(1e-9));
  CHECK(std::abs(scaled.features.col(0).mean()) < 1e-10);
  const double std0 =
      std::sqrt(scaled.features.col(0).array().square().sum() / 3.0);
  CHECK(std::abs(std0 - 1.0) < 1e-10);
  // Constant column becomes zeros, std recorded 0.
  CHECK(scaled.features.col(1).isZero());
  CHECK(params.stds(1) == 0.0);
  // Labels untouched.
  CHECK(scaled.labels == d.labels);

  // Idempotence on an already-standardized column.
  auto [scaled2, params2] = standardize(scaled);
  CHECK((scaled2.features.col(0) - scaled.features.col(0)).cwiseAbs().maxCoeff() <
        1e-10);

  // Round trip on non-constant columns.
  Dataset back = unstandardize(scaled, params);
  CHECK((back.features.col(0) - d.features.col(0)).cwiseAbs().maxCoeff() <
        1e-9 * d.features.col(0).cwiseAbs().maxCoeff());

  Dataset tiny;
  tiny.features.resize(1, 1);
  tiny.features << 1;
  tiny.labels.resize(1);
  tiny.labels << 1;
  CHECK_THROWS(standardize(tiny));
}

TEST_CASE("train_test_split sizes, determinism, partition") {
  Dataset d;
  d.features.resize(10, 1);
  for (int i = 0; i < 10; ++i) d.features(i, 0) = i;
  d.labels = d.features.col(0);
  d.feature_names = {"x"};

  auto [train, test] = train_test_split(d, 0.2, 7);
  CHECK(train.n() == 8);
  CHECK(test.n() == 2);

  auto [train2, test2] = train_test_split(d, 0.2, 7);
  CHECK(train.features == train2.features);
  CHECK(test.features == test2.features);

  // Disjoint partition covering all rows.
  std::set<double> seen;
  for (int i = 0; i < train.n(); ++i) seen.insert(train.features(i, 0));
  for (int i = 0; i < test.n(); ++i) seen.insert(test.features(i, 0));
  CHECK(seen.size() == 10);

  // 24 rows at fraction 0.25 -> (18, 6).
  Dataset d24;
  d24.features.resize(24, 1);
  for (int i = 0; i < 24; ++i) d24.features(i, 0) = i;
  d24.labels = d24.features.col(0);
  auto [t24, s24] = train_test_split(d24, 0.25, 1);
  CHECK(t24.n() == 18);
  CHECK(s24.n() == 6);

  CHECK_THROWS(train_test_split(d, 0.0, 1));
  CHECK_THROWS(train_test_split(d, 1.0, 1));
  Dataset one;
  one.features.resize(1, 1);
  one.features << 0;
  one.labels.resize(1);
  one.labels << 0;
  CHECK_THROWS(train_test_split(one, 0.5, 1));
}

TEST_CASE("one-hot encoding of categorical columns") {
  auto path = write_temp_csv("cat.csv", "color,y\nred,1\nblue,2\nred,3\n");
  RawTable t = load_csv(path, "y", {"?"});
  CHECK(t.kinds[0] == ColumnKind::kCategorical);
  Dataset d = encode(t);
  CHECK(d.d() == 2);  // blue, red (sorted); no drop-first
  CHECK(d.feature_names[0] == "color=blue");
  CHECK(d.feature_names[1] == "color=red");
  CHECK(d.features(0, 1) == 1.0);
  CHECK(d.features(1, 0) == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("full ingestion pipeline yields finite data on all bundled datasets") {
  for (const std::string name : {"concrete", "lenses", "automobiles"}) {
    DatasetManifest m = load_manifest(kDataDir + "/" + name + ".json");
    m.path = kDataDir + "/" + name + ".csv";
    Dataset d = load_dataset(m);
    CHECK(d.n() >= 1);
    CHECK(d.d() >= 1);
    CHECK(d.features.allFinite());
    CHECK(d.labels.allFinite());
    auto [scaled, params] = standardize(d);
    CHECK(scaled.features.allFinite());
  }
}
