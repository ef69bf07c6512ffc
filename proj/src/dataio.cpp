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

#include "privreg/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace privreg {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno != 0) return false;
  *out = v;
  return true;
}

Dataset take_rows(const Dataset& data, const std::vector<int>& idx) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.features.resize(static_cast<int>(idx.size()), data.d());
  out.labels.resize(static_cast<int>(idx.size()));
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
    out.features.row(i) = data.features.row(idx[i]);
    out.labels(i) = data.labels(idx[i]);
  }
  return out;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest not found: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  DatasetManifest m;
  m.path = j.at("path").get<std::string>();
  // A relative CSV path is taken relative to the manifest's directory, so
  // manifests work regardless of the caller's working directory.
  std::filesystem::path csv(m.path);
  if (csv.is_relative())
    m.path = (std::filesystem::path(path).parent_path() / csv).string();
  m.label_column = j.at("label_column").get<std::string>();
  if (j.contains("missing_tokens")) {
    m.missing_tokens.clear();
    for (const auto& t : j["missing_tokens"])
      m.missing_tokens.insert(t.get<std::string>());
  }
  if (j.contains("categorical_columns")) {
    for (const auto& t : j["categorical_columns"])
      m.categorical_columns.insert(t.get<std::string>());
  }
  return m;
}

RawTable load_csv(const std::string& path, const std::string& label_column,
                  const std::set<std::string>& missing_tokens,
                  const std::set<std::string>& categorical_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("file not found: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);

  RawTable table;
  for (auto& name : split_line(line)) table.column_names.push_back(trim(name));
  const int ncols = table.num_cols();

  auto label_it = std::find(table.column_names.begin(),
                            table.column_names.end(), label_column);
  if (label_it == table.column_names.end())
    throw std::runtime_error("label column not in header: " + label_column);
  table.label_index =
      static_cast<int>(label_it - table.column_names.begin());

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (static_cast<int>(fields.size()) != ncols) {
      throw std::runtime_error("ragged row " +
                               std::to_string(table.num_rows() + 2) + " in " +
                               path + ": expected " + std::to_string(ncols) +
                               " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<std::string> cells(ncols);
    std::vector<double> values(ncols, std::nan(""));
    std::vector<bool> missing(ncols, false);
    for (int c = 0; c < ncols; ++c) {
      cells[c] = trim(fields[c]);
      missing[c] = missing_tokens.count(cells[c]) > 0;
    }
    table.cells.push_back(std::move(cells));
    table.values.push_back(std::move(values));
    table.missing.push_back(std::move(missing));
  }
  if (table.num_rows() == 0)
    throw std::runtime_error("no data rows in " + path);

  // A column is categorical if any non-missing cell fails numeric parse.
  table.kinds.assign(ncols, ColumnKind::kNumeric);
  for (int c = 0; c < ncols; ++c) {
    if (categorical_override.count(table.column_names[c])) {
      table.kinds[c] = ColumnKind::kCategorical;
      continue;
    }
    for (int r = 0; r < table.num_rows(); ++r) {
      if (table.missing[r][c]) continue;
      double v;
      if (!parse_number(table.cells[r][c], &v)) {
        table.kinds[c] = ColumnKind::kCategorical;
        break;
      }
    }
  }
  for (int c = 0; c < ncols; ++c) {
    if (table.kinds[c] != ColumnKind::kNumeric) continue;
    for (int r = 0; r < table.num_rows(); ++r) {
      if (!table.missing[r][c]) parse_number(table.cells[r][c], &table.values[r][c]);
    }
  }
  if (table.kinds[table.label_index] != ColumnKind::kNumeric)
    throw std::runtime_error("label column must be numeric: " + label_column);
  return table;
}

RawTable impute_mean(const RawTable& table) {
  RawTable out = table;
  const int n = table.num_rows();
  for (int c = 0; c < table.num_cols(); ++c) {
    bool any_missing = false;
    for (int r = 0; r < n; ++r) any_missing = any_missing || table.missing[r][c];
    if (!any_missing) continue;

    if (table.kinds[c] == ColumnKind::kNumeric) {
      double sum = 0;
      int count = 0;
      for (int r = 0; r < n; ++r) {
        if (!table.missing[r][c]) {
          sum += table.values[r][c];
          ++count;
        }
      }
      if (count == 0)
        throw std::runtime_error("column entirely missing: " +
                                 table.column_names[c]);
      const double mean = sum / count;
      for (int r = 0; r < n; ++r) {
        if (out.missing[r][c]) {
          out.values[r][c] = mean;
          std::ostringstream ss;
          ss << mean;
          out.cells[r][c] = ss.str();
          out.missing[r][c] = false;
        }
      }
    } else {
      // Mode imputation for categorical columns, lexicographic tie-break.
      std::map<std::string, int> counts;
      for (int r = 0; r < n; ++r)
        if (!table.missing[r][c]) counts[table.cells[r][c]]++;
      if (counts.empty())
        throw std::runtime_error("column entirely missing: " +
                                 table.column_names[c]);
      std::string mode;
      int best = -1;
      for (const auto& [value, count] : counts) {
        if (count > best) {
          best = count;
          mode = value;
        }
      }
      for (int r = 0; r < n; ++r) {
        if (out.missing[r][c]) {
          out.cells[r][c] = mode;
          out.missing[r][c] = false;
        }
      }
    }
  }
  return out;
}

Dataset encode(const RawTable& table) {
  const int n = table.num_rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < table.num_cols(); ++c)
      if (table.missing[r][c])
        throw std::runtime_error("encode requires an imputed table");

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (int c = 0; c < table.num_cols(); ++c) {
    if (c == table.label_index) continue;
    if (table.kinds[c] == ColumnKind::kNumeric) {
      std::vector<double> col(n);
      for (int r = 0; r < n; ++r) col[r] = table.values[r][c];
      names.push_back(table.column_names[c]);
      columns.push_back(std::move(col));
    } else {
      std::set<std::string> categories;
      for (int r = 0; r < n; ++r) categories.insert(table.cells[r][c]);
      for (const auto& cat : categories) {
        std::vector<double> col(n);
        for (int r = 0; r < n; ++r)
          col[r] = table.cells[r][c] == cat ? 1.0 : 0.0;
        names.push_back(table.column_names[c] + "=" + cat);
        columns.push_back(std::move(col));
      }
    }
  }

  Dataset data;
  data.feature_names = names;
  data.features.resize(n, static_cast<int>(columns.size()));
  for (int c = 0; c < static_cast<int>(columns.size()); ++c)
    for (int r = 0; r < n; ++r) data.features(r, c) = columns[c][r];
  data.labels.resize(n);
  for (int r = 0; r < n; ++r) data.labels(r) = table.values[r][table.label_index];

  if (!data.features.allFinite() || !data.labels.allFinite())
    throw std::runtime_error("non-finite entries after encoding");
  return data;
}

std::pair<Dataset, ScalerParams> standardize(const Dataset& data) {
  if (data.n() < 2) throw std::runtime_error("standardize requires n >= 2");
  ScalerParams params;
  params.means = data.features.colwise().mean();
  Eigen::MatrixXd centered = data.features.rowwise() - params.means.transpose();
  params.stds =
      (centered.array().square().colwise().sum() / data.n()).sqrt();
  return {apply_scaler(data, params), params};
}

Dataset apply_scaler(const Dataset& data, const ScalerParams& params) {
  Dataset out = data;
  for (int c = 0; c < data.d(); ++c) {
    if (params.stds(c) > 0) {
      out.features.col(c) =
          (data.features.col(c).array() - params.means(c)) / params.stds(c);
    } else {
      out.features.col(c).setZero();
    }
  }
  return out;
}

Dataset unstandardize(const Dataset& data, const ScalerParams& params) {
  Dataset out = data;
  for (int c = 0; c < data.d(); ++c) {
    if (params.stds(c) > 0) {
      out.features.col(c) =
          data.features.col(c).array() * params.stds(c) + params.means(c);
    }
  }
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::runtime_error("test_fraction must be in (0,1)");
  const int n = data.n();
  int test_size = std::max(1, static_cast<int>(std::floor(n * test_fraction)));
  if (test_size >= n)
    throw std::runtime_error("split would leave the training part empty");

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  std::vector<int> test_idx(idx.begin(), idx.begin() + test_size);
  std::vector<int> train_idx(idx.begin() + test_size, idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  return {take_rows(data, train_idx), take_rows(data, test_idx)};
}

Dataset load_dataset(const DatasetManifest& manifest) {
  RawTable table = load_csv(manifest.path, manifest.label_column,
                            manifest.missing_tokens,
                            manifest.categorical_columns);
  return encode(impute_mean(table));
}

}  // namespace privreg
