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

#ifndef PRIVREG_DATAIO_H_
#define PRIVREG_DATAIO_H_

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

namespace privreg {

enum class ColumnKind { kNumeric, kCategorical };

// Parsed CSV contents before encoding. Cells keep their raw text; numeric
// columns additionally carry parsed values (NaN where missing).
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<ColumnKind> kinds;
  // Row-major; cells[r][c] is the raw string, values[r][c] the parsed
  // number for numeric columns (unspecified for categorical cells).
  std::vector<std::vector<std::string>> cells;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> missing;
  int label_index = -1;

  int num_rows() const { return static_cast<int>(cells.size()); }
  int num_cols() const { return static_cast<int>(column_names.size()); }
};

// Canonical in-memory dataset: dense features plus labels.
struct Dataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXd labels;    // n
  std::vector<std::string> feature_names;

  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }
};

struct ScalerParams {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;  // population std (divisor n); 0 marks a constant column
};

// Manifest describing how to ingest one CSV file.
struct DatasetManifest {
  std::string path;
  std::string label_column;
  std::set<std::string> missing_tokens = {"?", "", "NA"};
  // Optional override; columns listed here are treated as categorical even
  // if every cell parses as a number.
  std::set<std::string> categorical_columns;
};

DatasetManifest load_manifest(const std::string& path);

// Parses a CSV with a header row. A column is categorical if any
// non-missing cell fails numeric parse (or it is listed in the override).
// Throws std::runtime_error on missing file, empty file, absent label
// column, or ragged rows.
RawTable load_csv(const std::string& path, const std::string& label_column,
                  const std::set<std::string>& missing_tokens,
                  const std::set<std::string>& categorical_override = {});

// Replaces missing numeric cells with the column mean over non-missing
// cells, and missing categorical cells with the column mode (lexicographic
// tie-break). Throws if a column is entirely missing.
RawTable impute_mean(const RawTable& table);

// One-hot encodes categorical columns (one indicator per distinct value,
// values sorted; no drop-first) and assembles the feature matrix + labels.
// Requires the table to be fully imputed.
Dataset encode(const RawTable& table);

// Standardizes each feature column to mean 0, population std 1. Constant
// columns map to all-zeros with std recorded as 0. Labels are untouched.
std::pair<Dataset, ScalerParams> standardize(const Dataset& data);

// Applies previously fitted scaler params (e.g. train-fitted, applied to test).
Dataset apply_scaler(const Dataset& data, const ScalerParams& params);

// Inverts apply_scaler on non-constant columns.
Dataset unstandardize(const Dataset& data, const ScalerParams& params);

// Deterministic shuffle split; test size = floor(n * test_fraction), min 1.
// Throws if the fraction is outside (0,1) or either part would be empty.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double test_fraction,
                                             std::uint64_t seed);

// Full ingestion pipeline: load -> impute -> encode.
Dataset load_dataset(const DatasetManifest& manifest);

}  // namespace privreg

#endif  // PRIVREG_DATAIO_H_
