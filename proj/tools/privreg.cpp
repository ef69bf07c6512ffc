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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "privreg/accountant.hpp"
#include "privreg/bench.hpp"
#include "privreg/conversions.hpp"
#include "privreg/dataio.hpp"
#include "privreg/dpsgd.hpp"
#include "privreg/pac.hpp"
#include "privreg/regression.hpp"
#include "privreg/rng.hpp"

namespace {

using namespace privreg;

struct SplitFlags {
  double fraction = 0.2;
  std::uint64_t seed = 42;
  bool normalize = true;
};

void add_split_flags(CLI::App* cmd, SplitFlags* flags) {
  cmd->add_option("--split-fraction", flags->fraction,
                  "Held-out test fraction (default 0.2)");
  cmd->add_option("--split-seed", flags->seed, "Split shuffle seed (default 42)");
  cmd->add_flag("!--no-normalize", flags->normalize,
                "Disable feature standardization");
}

PreparedData prepare(const std::string& manifest_path, const SplitFlags& flags) {
  ExperimentSpec spec;
  spec.dataset = load_manifest(manifest_path);
  spec.name = manifest_path;
  spec.split.fraction = flags.fraction;
  spec.split.seed = flags.seed;
  spec.normalization = flags.normalize;
  return prepare_data(spec);
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload;
}

void print_metrics(const Coefficients& model, const PreparedData& data) {
  const Eigen::VectorXd pred = predict(model, data.test.features);
  std::cout << "test_rmse " << rmse(data.test.labels, pred) << "\n"
            << "test_r2 " << r_squared(data.test.labels, pred) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Privacy-preserving linear regression toolkit"};
  app.require_subcommand(1);

  // convert
  auto* convert = app.add_subcommand(
      "convert", "Convert between posterior success rate, epsilon, and MI");
  std::optional<double> opt_psr, opt_eps, opt_mi;
  double delta = 1e-5;
  convert->add_option("--psr", opt_psr, "Posterior success rate in (0.5, 1)");
  convert->add_option("--epsilon", opt_eps, "DP privacy budget");
  convert->add_option("--mi", opt_mi, "Mutual information budget");
  convert->add_option("--delta", delta, "DP delta (default 1e-5)");
  convert->callback([&] {
    const int given =
        (opt_psr ? 1 : 0) + (opt_eps ? 1 : 0) + (opt_mi ? 1 : 0);
    if (given != 1)
      throw CLI::ValidationError(
          "convert", "exactly one of --psr/--epsilon/--mi must be given");
    PrivacyLevel level;
    if (opt_psr) level = level_from_psr(*opt_psr, delta);
    else if (opt_eps) level = level_from_epsilon(*opt_eps, delta);
    else level = level_from_mi(*opt_mi, delta);
    std::cout.precision(6);
    std::cout << std::fixed << "psr " << level.psr << "\nepsilon "
              << level.epsilon_equiv << "\nmi " << level.mi << "\ndelta "
              << std::scientific << level.delta_equiv << "\n";
  });

  // fit
  auto* fit_cmd =
      app.add_subcommand("fit", "Non-private regression fit on a dataset");
  std::string manifest_path, kind = "ols", out_path;
  double lambda = 0.0;
  SplitFlags fit_split;
  fit_cmd->add_option("--manifest", manifest_path, "Dataset manifest JSON")
      ->required();
  fit_cmd->add_option("--kind", kind, "ols | ridge | lasso (default ols)");
  fit_cmd->add_option("--lambda", lambda, "Regularization strength");
  fit_cmd->add_option("--out", out_path, "Write model coefficients JSON here");
  add_split_flags(fit_cmd, &fit_split);
  fit_cmd->callback([&] {
    const PreparedData data = prepare(manifest_path, fit_split);
    const Coefficients model = fit(data.train.features, data.train.labels,
                                   {fit_kind_from_string(kind), lambda});
    if (!out_path.empty()) write_file(out_path, model.to_json());
    print_metrics(model, data);
  });

  // dp-train
  auto* dp_cmd = app.add_subcommand("dp-train", "Train with DPSGD");
  std::string dp_manifest, dp_out, sampling = "poisson", init = "zeros";
  double dp_epsilon = 1.0, dp_delta = 1e-5;
  DpSgdConfig dp_cfg;
  SplitFlags dp_split;
  dp_cmd->add_option("--manifest", dp_manifest, "Dataset manifest JSON")
      ->required();
  dp_cmd->add_option("--epsilon", dp_epsilon, "Target epsilon")->required();
  dp_cmd->add_option("--delta", dp_delta, "Target delta (default 1e-5)");
  dp_cmd->add_option("--learning-rate", dp_cfg.learning_rate,
                     "Learning rate (default 0.01)");
  dp_cmd->add_option("--batch-size", dp_cfg.batch_size, "Batch size (default 16)");
  dp_cmd->add_option("--epochs", dp_cfg.epochs, "Epochs (default 10)");
  dp_cmd->add_option("--clip-norm", dp_cfg.clip_norm,
                     "Per-example gradient clip norm (default 1)");
  dp_cmd->add_option("--seed", dp_cfg.seed, "Training seed (default 0)");
  dp_cmd->add_option("--sampling", sampling, "poisson | fixed (default poisson)");
  dp_cmd->add_option("--init", init, "zeros | random (default zeros)");
  dp_cmd->add_option("--out", dp_out, "Write model coefficients JSON here");
  add_split_flags(dp_cmd, &dp_split);
  dp_cmd->callback([&] {
    const PreparedData data = prepare(dp_manifest, dp_split);
    dp_cfg.sampling =
        sampling == "fixed" ? BatchSampling::kFixed : BatchSampling::kPoisson;
    dp_cfg.init = init == "random" ? WeightInit::kRandom : WeightInit::kZeros;
    dp_cfg.batch_size = std::min(dp_cfg.batch_size, data.train.n());
    const double q = static_cast<double>(dp_cfg.batch_size) / data.train.n();
    const int steps = dpsgd_steps(data.train.n(), dp_cfg);
    dp_cfg.noise_multiplier = calibrate_sigma({dp_epsilon, dp_delta}, q, steps);
    std::cout << "noise_multiplier " << dp_cfg.noise_multiplier << "\n";
    const Coefficients model = dpsgd_train(data.train, dp_cfg);
    if (!dp_out.empty()) write_file(dp_out, model.to_json());
    print_metrics(model, data);
  });

  // Shared PAC flags.
  struct PacFlags {
    std::string manifest, kind = "ols", mode = "covariance_correct";
    std::string projection = "svd", out;
    double lambda = 0.0, psr = 0.0, mi = 0.0, delta = 1e-5;
    PacEstimationConfig cfg;
    SplitFlags split;
  };
  auto add_pac_flags = [](CLI::App* cmd, PacFlags* f) {
    cmd->add_option("--manifest", f->manifest, "Dataset manifest JSON")
        ->required();
    cmd->add_option("--psr", f->psr, "Posterior success rate in (0.5, 1)");
    cmd->add_option("--mi", f->mi, "Mutual information budget (alternative to --psr)");
    cmd->add_option("--delta", f->delta, "Delta for the epsilon bridge (default 1e-5)");
    cmd->add_option("--kind", f->kind, "Inner fit: ols | ridge | lasso (default ols)");
    cmd->add_option("--lambda", f->lambda, "Regularization strength");
    cmd->add_option("--mode", f->mode,
                    "covariance_correct | paper_literal (default covariance_correct)");
    cmd->add_option("--projection", f->projection, "svd | identity (default svd)");
    cmd->add_option("--sampling-rate", f->cfg.sampling_rate,
                    "Poisson sampling rate (default 0.5)");
    cmd->add_option("--threshold", f->cfg.convergence_threshold,
                    "Convergence threshold (default 1e-4)");
    cmd->add_option("--min-rounds", f->cfg.min_rounds, "Min rounds (default 30)");
    cmd->add_option("--max-rounds", f->cfg.max_rounds, "Max rounds (default 1000)");
    cmd->add_option("--max-instances", f->cfg.max_instances,
                    "Cap on left-out instances (0 = all)");
    cmd->add_option("--seed", f->cfg.seed, "Estimation/noise seed (default 0)");
    cmd->add_option("--out", f->out, "Output JSON path");
  };
  auto pac_setup = [](PacFlags* f) -> std::pair<PreparedData, PrivacyLevel> {
    if ((f->psr > 0) == (f->mi > 0))
      throw CLI::ValidationError("pac", "give exactly one of --psr or --mi");
    const PrivacyLevel level = f->psr > 0 ? level_from_psr(f->psr, f->delta)
                                          : level_from_mi(f->mi, f->delta);
    PreparedData data = prepare(f->manifest, f->split);
    f->cfg.mi_budget = level.mi;
    f->cfg.mode = pac_mode_from_string(f->mode);
    return {std::move(data), level};
  };
  auto pac_projection = [](PacFlags* f, const PreparedData& data,
                           const Mechanism& mechanism) {
    if (f->projection == "svd") {
      f->cfg.projection =
          estimate_projection(data.train, mechanism, 100, f->cfg.sampling_rate,
                              derive_seed(f->cfg.seed, 0x5fdULL));
    } else if (f->projection == "identity") {
      f->cfg.projection = ProjectionBasis::identity(data.train.d() + 1);
    } else {
      throw CLI::ValidationError("pac", "unknown --projection: " + f->projection);
    }
  };

  // pac-estimate
  auto* pe_cmd = app.add_subcommand(
      "pac-estimate", "Estimate the anisotropic noise profile only");
  PacFlags pe;
  add_pac_flags(pe_cmd, &pe);
  add_split_flags(pe_cmd, &pe.split);
  pe_cmd->callback([&] {
    auto [data, level] = pac_setup(&pe);
    const Mechanism mechanism =
        make_fit_mechanism({fit_kind_from_string(pe.kind), pe.lambda});
    pac_projection(&pe, data, mechanism);
    const NoiseProfile profile = estimate_noise(data.train, mechanism, pe.cfg);
    const std::string payload = profile.to_json();
    if (!pe.out.empty()) write_file(pe.out, payload);
    else std::cout << payload << "\n";
    std::cout << "total_noise_power " << profile.variances.sum() << "\n"
              << "converged " << (profile.converged ? "true" : "false") << "\n";
  });

  // pac-train
  auto* pt_cmd =
      app.add_subcommand("pac-train", "Train and privatize with PAC noise");
  PacFlags pt;
  add_pac_flags(pt_cmd, &pt);
  add_split_flags(pt_cmd, &pt.split);
  pt_cmd->callback([&] {
    auto [data, level] = pac_setup(&pt);
    const FitSpec fs{fit_kind_from_string(pt.kind), pt.lambda};
    const Mechanism mechanism = make_fit_mechanism(fs);
    pac_projection(&pt, data, mechanism);
    const Coefficients model =
        pac_train(data.train, fs, level, pt.cfg, derive_seed(pt.cfg.seed, 1));
    if (!pt.out.empty()) write_file(pt.out, model.to_json());
    print_metrics(model, data);
  });

  // benchmark
  auto* bench_cmd =
      app.add_subcommand("benchmark", "Run a full experiment spec");
  std::string spec_path, out_dir = "results";
  bench_cmd->add_option("--spec", spec_path, "Experiment spec JSON")->required();
  bench_cmd->add_option("--out-dir", out_dir, "Results directory (default results/)");
  bench_cmd->callback([&] {
    const ExperimentSpec spec = ExperimentSpec::from_json_file(spec_path);
    if (!std::filesystem::exists(spec.dataset.path))
      throw CLI::ValidationError("benchmark",
                                 "dataset path not found: " + spec.dataset.path);
    const TrialReport report = run_benchmark(spec);
    std::filesystem::create_directories(out_dir);
    const std::string base =
        out_dir + "/" + std::filesystem::path(spec.dataset.path).stem().string();
    emit_report(report, "json", base + ".json");
    emit_report(report, "csv", base + ".csv");
    emit_report(report, "plotdata", base + "_plot.json");

    std::cout << "dataset method psr epsilon rmse_mean rmse_std r2_mean\n";
    std::cout.precision(4);
    for (const auto& c : report.cells) {
      std::cout << c.dataset << " " << to_string(c.method) << " " << c.psr
                << " " << c.epsilon << " " << c.rmse_mean << " " << c.rmse_std
                << " " << c.r2_mean << "\n";
    }
    std::cout << "results written to " << out_dir << "/\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
