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

#include "privreg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "privreg/accountant.hpp"
#include "privreg/conversions.hpp"
#include "privreg/rng.hpp"

namespace privreg {
namespace {

constexpr int kProjectionSamples = 100;
constexpr double kMaxFailureFraction = 0.10;

void finalize_stats(TrialCell* cell) {
  auto stats = [](const std::vector<double>& v, double* mean, double* std_out) {
    if (v.empty()) {
      *mean = *std_out = 0.0;
      return;
    }
    // All-identical raws (the repeated non-private result) get an exact 0
    // spread instead of rounding residue.
    if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) ==
        v.end()) {
      *mean = v.front();
      *std_out = 0.0;
      return;
    }
    double m = 0;
    for (double x : v) m += x;
    m /= v.size();
    double var = 0;
    for (double x : v) var += (x - m) * (x - m);
    *mean = m;
    *std_out = std::sqrt(var / v.size());
  };
  stats(cell->rmse_raw, &cell->rmse_mean, &cell->rmse_std);
  stats(cell->r2_raw, &cell->r2_mean, &cell->r2_std);
  cell->valid =
      cell->failures <= kMaxFailureFraction * cell->trials && !cell->rmse_raw.empty();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

Method method_from_string(const std::string& s) {
  if (s == "non_private") return Method::kNonPrivate;
  if (s == "dpsgd") return Method::kDpsgd;
  if (s == "pac") return Method::kPac;
  throw std::runtime_error("unknown method: " + s);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kNonPrivate: return "non_private";
    case Method::kDpsgd: return "dpsgd";
    case Method::kPac: return "pac";
  }
  return "?";
}

PacGrid::PacGrid() {
  for (int e = -10; e <= 10; ++e) lambdas.push_back(std::ldexp(1.0, e));
}

std::string MethodConfig::to_json() const {
  nlohmann::json j;
  j["method"] = privreg::to_string(method);
  if (method == Method::kDpsgd) {
    j["dp"] = nlohmann::json::parse(dp.to_json());
  } else {
    j["fit"] = {{"kind", privreg::to_string(fit.kind)}, {"lambda", fit.lambda}};
  }
  return j.dump();
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("spec file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentSpec spec;
  if (j.contains("name")) spec.name = j["name"].get<std::string>();

  const auto& ds = j.at("dataset");
  spec.dataset.path = ds.at("path").get<std::string>();
  spec.dataset.label_column = ds.at("label_column").get<std::string>();
  if (ds.contains("missing_tokens")) {
    spec.dataset.missing_tokens.clear();
    for (const auto& t : ds["missing_tokens"])
      spec.dataset.missing_tokens.insert(t.get<std::string>());
  }
  if (ds.contains("categorical_columns")) {
    for (const auto& t : ds["categorical_columns"])
      spec.dataset.categorical_columns.insert(t.get<std::string>());
  }
  if (spec.name.empty()) spec.name = spec.dataset.path;

  if (j.contains("methods")) {
    spec.methods.clear();
    for (const auto& m : j["methods"])
      spec.methods.push_back(method_from_string(m.get<std::string>()));
  } else if (j.contains("method")) {
    spec.methods = {method_from_string(j["method"].get<std::string>())};
  }
  if (j.contains("psr_levels"))
    spec.psr_levels = j["psr_levels"].get<std::vector<double>>();
  for (double psr : spec.psr_levels) {
    if (!(psr > 0.5 && psr < 1.0))
      throw std::runtime_error("psr_levels must be in (0.5, 1)");
  }
  if (j.contains("trials")) spec.trials = j["trials"].get<int>();
  if (spec.trials < 1) throw std::runtime_error("trials must be >= 1");
  if (j.contains("delta")) spec.delta = j["delta"].get<double>();
  if (j.contains("normalization"))
    spec.normalization = j["normalization"].get<bool>();
  if (j.contains("split")) {
    if (j["split"].contains("fraction"))
      spec.split.fraction = j["split"]["fraction"].get<double>();
    if (j["split"].contains("seed"))
      spec.split.seed = j["split"]["seed"].get<std::uint64_t>();
  }
  if (j.contains("master_seed"))
    spec.master_seed = j["master_seed"].get<std::uint64_t>();

  if (j.contains("dp_grid")) {
    const auto& g = j["dp_grid"];
    if (g.contains("learning_rate"))
      spec.dp_grid.learning_rates = g["learning_rate"].get<std::vector<double>>();
    if (g.contains("batch_size"))
      spec.dp_grid.batch_sizes = g["batch_size"].get<std::vector<int>>();
    if (g.contains("clip_norm"))
      spec.dp_grid.clip_norms = g["clip_norm"].get<std::vector<double>>();
    if (g.contains("epochs"))
      spec.dp_grid.epochs = g["epochs"].get<std::vector<int>>();
  }
  if (j.contains("pac_grid")) {
    const auto& g = j["pac_grid"];
    if (g.contains("kinds")) {
      spec.pac_grid.kinds.clear();
      for (const auto& k : g["kinds"])
        spec.pac_grid.kinds.push_back(fit_kind_from_string(k.get<std::string>()));
    }
    if (g.contains("lambdas"))
      spec.pac_grid.lambdas = g["lambdas"].get<std::vector<double>>();
  }
  if (j.contains("pac_mode"))
    spec.pac_mode = pac_mode_from_string(j["pac_mode"].get<std::string>());
  if (j.contains("pac_projection")) {
    const std::string p = j["pac_projection"].get<std::string>();
    if (p == "svd") spec.pac_svd_projection = true;
    else if (p == "identity") spec.pac_svd_projection = false;
    else throw std::runtime_error("unknown pac_projection: " + p);
  }
  if (j.contains("pac_estimation")) {
    const auto& e = j["pac_estimation"];
    if (e.contains("convergence_threshold"))
      spec.pac_estimation.convergence_threshold =
          e["convergence_threshold"].get<double>();
    if (e.contains("min_rounds"))
      spec.pac_estimation.min_rounds = e["min_rounds"].get<int>();
    if (e.contains("max_rounds"))
      spec.pac_estimation.max_rounds = e["max_rounds"].get<int>();
    if (e.contains("sampling_rate"))
      spec.pac_estimation.sampling_rate = e["sampling_rate"].get<double>();
    if (e.contains("max_instances"))
      spec.pac_estimation.max_instances = e["max_instances"].get<int>();
  }
  return spec;
}

std::string ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["dataset"] = {{"path", dataset.path}, {"label_column", dataset.label_column}};
  std::vector<std::string> ms;
  for (Method m : methods) ms.push_back(privreg::to_string(m));
  j["methods"] = ms;
  j["psr_levels"] = psr_levels;
  j["trials"] = trials;
  j["delta"] = delta;
  j["normalization"] = normalization;
  j["split"] = {{"fraction", split.fraction}, {"seed", split.seed}};
  j["master_seed"] = master_seed;
  j["pac_mode"] = privreg::to_string(pac_mode);
  j["pac_projection"] = pac_svd_projection ? "svd" : "identity";
  return j.dump(2);
}

PreparedData prepare_data(const ExperimentSpec& spec) {
  PreparedData out;
  out.name = spec.name;
  Dataset full = load_dataset(spec.dataset);
  auto [train, test] = train_test_split(full, spec.split.fraction, spec.split.seed);
  if (spec.normalization) {
    auto [scaled_train, params] = standardize(train);
    out.train = std::move(scaled_train);
    out.test = apply_scaler(test, params);
    out.scaler = params;
  } else {
    out.train = std::move(train);
    out.test = std::move(test);
  }
  return out;
}

std::vector<MethodConfig> enumerate_grid(const ExperimentSpec& spec,
                                         Method method) {
  std::vector<MethodConfig> grid;
  switch (method) {
    case Method::kNonPrivate: {
      MethodConfig c;
      c.method = method;
      c.fit = {FitKind::kOls, 0.0};
      grid.push_back(c);
      break;
    }
    case Method::kDpsgd: {
      for (double lr : spec.dp_grid.learning_rates)
        for (int b : spec.dp_grid.batch_sizes)
          for (double clip : spec.dp_grid.clip_norms)
            for (int ep : spec.dp_grid.epochs) {
              MethodConfig c;
              c.method = method;
              c.dp.learning_rate = lr;
              c.dp.batch_size = b;
              c.dp.clip_norm = clip;
              c.dp.epochs = ep;
              grid.push_back(c);
            }
      break;
    }
    case Method::kPac: {
      for (FitKind kind : spec.pac_grid.kinds) {
        if (kind == FitKind::kOls) {
          MethodConfig c;
          c.method = method;
          c.fit = {kind, 0.0};
          grid.push_back(c);
          continue;
        }
        for (double lambda : spec.pac_grid.lambdas) {
          MethodConfig c;
          c.method = method;
          c.fit = {kind, lambda};
          grid.push_back(c);
        }
      }
      break;
    }
  }
  if (grid.empty()) throw std::runtime_error("empty hyperparameter grid");
  return grid;
}

TrialCell run_trials(const PreparedData& data, const ExperimentSpec& spec,
                     double psr, const MethodConfig& config) {
  TrialCell cell;
  cell.dataset = data.name;
  cell.method = config.method;
  cell.psr = config.method == Method::kNonPrivate ? 0.0 : psr;
  cell.config_json = config.to_json();
  cell.trials = spec.trials;

  const std::uint64_t cell_seed = derive_seed(
      spec.master_seed,
      fnv1a(cell.config_json + "|" + std::to_string(psr)));

  if (config.method == Method::kNonPrivate) {
    const Coefficients model =
        fit(data.train.features, data.train.labels, config.fit);
    const Eigen::VectorXd pred = predict(model, data.test.features);
    const double r = rmse(data.test.labels, pred);
    const double r2 = r_squared(data.test.labels, pred);
    cell.rmse_raw.assign(spec.trials, r);
    cell.r2_raw.assign(spec.trials, r2);
    finalize_stats(&cell);
    return cell;
  }

  const PrivacyLevel level = level_from_psr(psr, spec.delta);
  cell.epsilon = level.epsilon_equiv;
  cell.mi = level.mi;

  if (config.method == Method::kDpsgd) {
    DpSgdConfig dp = config.dp;
    dp.batch_size = std::min(dp.batch_size, data.train.n());
    const double q = static_cast<double>(dp.batch_size) / data.train.n();
    const int steps = dpsgd_steps(data.train.n(), dp);
    dp.noise_multiplier =
        calibrate_sigma({level.epsilon_equiv, spec.delta}, q, steps);

    for (int t = 0; t < spec.trials; ++t) {
      dp.seed = derive_seed(cell_seed, t);
      try {
        const Coefficients model = dpsgd_train(data.train, dp);
        const Eigen::VectorXd pred = predict(model, data.test.features);
        const double r = rmse(data.test.labels, pred);
        const double r2 = r_squared(data.test.labels, pred);
        if (!std::isfinite(r) || !std::isfinite(r2)) throw std::runtime_error("non-finite metric");
        cell.rmse_raw.push_back(r);
        cell.r2_raw.push_back(r2);
      } catch (const std::exception&) {
        ++cell.failures;
      }
    }
    finalize_stats(&cell);
    return cell;
  }

  // PAC: estimate the profile once; trials vary only the Gaussian draw.
  PacEstimationConfig pc = spec.pac_estimation;
  pc.mi_budget = level.mi;
  pc.mode = spec.pac_mode;
  pc.seed = derive_seed(cell_seed, 0x9acULL);
  const Mechanism mechanism = make_fit_mechanism(config.fit);
  if (spec.pac_svd_projection) {
    pc.projection =
        estimate_projection(data.train, mechanism, kProjectionSamples,
                            pc.sampling_rate, derive_seed(cell_seed, 0x5fdULL));
  } else {
    pc.projection = ProjectionBasis::identity(data.train.d() + 1);
  }
  const NoiseProfile profile = estimate_noise(data.train, mechanism, pc);
  const Coefficients model =
      fit(data.train.features, data.train.labels, config.fit);

  for (int t = 0; t < spec.trials; ++t) {
    try {
      const Coefficients noisy =
          add_noise(model, profile, derive_seed(cell_seed, 0x7000ULL + t));
      const Eigen::VectorXd pred = predict(noisy, data.test.features);
      const double r = rmse(data.test.labels, pred);
      const double r2 = r_squared(data.test.labels, pred);
      if (!std::isfinite(r) || !std::isfinite(r2)) throw std::runtime_error("non-finite metric");
      cell.rmse_raw.push_back(r);
      cell.r2_raw.push_back(r2);
    } catch (const std::exception&) {
      ++cell.failures;
    }
  }
  finalize_stats(&cell);
  return cell;
}

TrialCell grid_search(const PreparedData& data, const ExperimentSpec& spec,
                      Method method, double psr) {
  const auto grid = enumerate_grid(spec, method);
  std::vector<std::future<TrialCell>> futures;
  futures.reserve(grid.size());
  for (const auto& config : grid) {
    futures.push_back(std::async(std::launch::async, [&, config] {
      return run_trials(data, spec, psr, config);
    }));
  }
  std::vector<TrialCell> cells;
  cells.reserve(grid.size());
  for (auto& f : futures) cells.push_back(f.get());

  const TrialCell* best = nullptr;
  for (const auto& cell : cells) {
    if (!cell.valid) continue;
    if (best == nullptr || cell.rmse_mean < best->rmse_mean) best = &cell;
  }
  if (best == nullptr)
    throw std::runtime_error("grid_search: all grid points failed");
  return *best;
}

TrialReport run_benchmark(const ExperimentSpec& spec) {
  const PreparedData data = prepare_data(spec);
  TrialReport report;
  report.dataset = spec.name;
  report.master_seed = spec.master_seed;
  {
    nlohmann::json js = {{"fraction", spec.split.fraction},
                         {"seed", spec.split.seed}};
    report.split_json = js.dump();
  }
  report.normalization = spec.normalization;
  report.pac_mode = to_string(spec.pac_mode);

  for (Method method : spec.methods) {
    if (method == Method::kNonPrivate) {
      report.cells.push_back(grid_search(data, spec, method, 0.75));
      continue;
    }
    for (double psr : spec.psr_levels)
      report.cells.push_back(grid_search(data, spec, method, psr));
  }
  return report;
}

std::string TrialReport::to_json() const {
  nlohmann::json j;
  j["dataset"] = dataset;
  j["master_seed"] = master_seed;
  j["split"] = nlohmann::json::parse(split_json.empty() ? "{}" : split_json);
  j["normalization"] = normalization;
  j["pac_mode"] = pac_mode;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json cj;
    cj["dataset"] = c.dataset;
    cj["method"] = privreg::to_string(c.method);
    cj["psr"] = c.psr;
    cj["epsilon"] = c.epsilon;
    cj["mi"] = c.mi;
    cj["config"] = nlohmann::json::parse(c.config_json);
    cj["rmse_mean"] = c.rmse_mean;
    cj["rmse_std"] = c.rmse_std;
    cj["r2_mean"] = c.r2_mean;
    cj["r2_std"] = c.r2_std;
    cj["trials"] = c.trials;
    cj["failures"] = c.failures;
    cj["valid"] = c.valid;
    cj["rmse_raw"] = c.rmse_raw;
    cj["r2_raw"] = c.r2_raw;
    j["cells"].push_back(cj);
  }
  return j.dump(2);
}

std::string TrialReport::to_csv() const {
  std::ostringstream out;
  out << "dataset,method,psr,epsilon,mi,metric,mean,std,n_trials,config_json\n";
  out.precision(12);
  for (const auto& c : cells) {
    for (const std::string metric : {"rmse", "r2"}) {
      const double mean = metric == "rmse" ? c.rmse_mean : c.r2_mean;
      const double std_v = metric == "rmse" ? c.rmse_std : c.r2_std;
      out << c.dataset << "," << privreg::to_string(c.method) << "," << c.psr
          << "," << c.epsilon << "," << c.mi << "," << metric << "," << mean
          << "," << std_v << "," << c.trials << ","
          << csv_quote(c.config_json) << "\n";
    }
  }
  return out.str();
}

std::string TrialReport::to_plotdata() const {
  nlohmann::json j;
  j["dataset"] = dataset;
  nlohmann::json series = nlohmann::json::object();
  for (const auto& c : cells) {
    if (c.method == Method::kNonPrivate) {
      j["non_private"] = {{"rmse_mean", c.rmse_mean}, {"r2_mean", c.r2_mean}};
      continue;
    }
    const std::string name = privreg::to_string(c.method);
    if (!series.contains(name)) series[name] = nlohmann::json::array();
    series[name].push_back({{"psr", c.psr},
                            {"rmse_mean", c.rmse_mean},
                            {"rmse_std", c.rmse_std}});
  }
  j["series"] = series;
  return j.dump(2);
}

void emit_report(const TrialReport& report, const std::string& format,
                 const std::string& path) {
  std::string payload;
  if (format == "json") payload = report.to_json();
  else if (format == "csv") payload = report.to_csv();
  else if (format == "plotdata") payload = report.to_plotdata();
  else throw std::runtime_error("unknown report format: " + format);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace privreg
