// Copyright 2026 The pinlf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment harness over the pinlf C API. Everything the CLI does goes
// through include/pinlf.h; core internals stay behind the shared library.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pinlf.h"

namespace {

// 0 success, 1 usage, 2 data/IO, 3 divergence.
int exit_code(pinlf_status status) {
  switch (status) {
    case PINLF_OK:
      return 0;
    case PINLF_ERR_USAGE:
      return 1;
    case PINLF_ERR_DIVERGED:
      return 3;
    default:
      return 2;
  }
}

int fail(pinlf_status status) {
  std::fprintf(stderr, "pinlf: error: %s\n", pinlf_last_error());
  return exit_code(status);
}

struct DatasetDeleter {
  void operator()(pinlf_dataset* d) const { pinlf_dataset_free(d); }
};
struct SplitDeleter {
  void operator()(pinlf_split* s) const { pinlf_split_free(s); }
};
struct ModelDeleter {
  void operator()(pinlf_model* m) const { pinlf_model_free(m); }
};
struct ReportDeleter {
  void operator()(pinlf_train_report* r) const { pinlf_report_free(r); }
};
struct SweepDeleter {
  void operator()(pinlf_sweep_report* r) const { pinlf_sweep_free(r); }
};

using DatasetPtr = std::unique_ptr<pinlf_dataset, DatasetDeleter>;
using SplitPtr = std::unique_ptr<pinlf_split, SplitDeleter>;
using ModelPtr = std::unique_ptr<pinlf_model, ModelDeleter>;
using ReportPtr = std::unique_ptr<pinlf_train_report, ReportDeleter>;
using SweepPtr = std::unique_ptr<pinlf_sweep_report, SweepDeleter>;

struct Options {
  std::string dataset;
  std::string format = "tab";
  std::string schedule = "gauss-seidel";
  pinlf_config config;
  std::vector<double> ki_grid;
  unsigned rotations = 1;
  std::string out = "pinlf-out";
};

pinlf_format parse_format(const std::string& name) {
  pinlf_format fmt;
  pinlf_format_default(&fmt);
  if (name == "comma")
    fmt.delimiter = PINLF_DELIM_COMMA;
  else if (name == "mldouble-colon")
    fmt.delimiter = PINLF_DELIM_DOUBLE_COLON;
  return fmt;  // "tab" is the default; CLI11 validated the choice
}

// Parallelism: hardware concurrency, capped by PINLF_THREADS when set.
unsigned thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("PINLF_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1 && cap < n) n = (unsigned)cap;
  }
  return n;
}

int load_dataset(const Options& opt, DatasetPtr& dataset) {
  const pinlf_format fmt = parse_format(opt.format);
  pinlf_dataset* raw = nullptr;
  const pinlf_status st = pinlf_dataset_load(opt.dataset.c_str(), &fmt, &raw);
  if (st != PINLF_OK) return fail(st);
  dataset.reset(raw);
  std::printf("dataset %s: %u x %u, %u entries, density %.4g, digest %s\n",
              opt.dataset.c_str(), pinlf_dataset_rows(raw),
              pinlf_dataset_cols(raw), pinlf_dataset_entries(raw),
              pinlf_dataset_density(raw), pinlf_dataset_digest(raw));
  return 0;
}

int run_prepare(const Options& opt) {
  DatasetPtr dataset;
  if (int rc = load_dataset(opt, dataset)) return rc;

  std::error_code ec;
  std::filesystem::create_directories(opt.out, ec);
  if (ec) {
    std::fprintf(stderr, "pinlf: error: cannot create %s: %s\n",
                 opt.out.c_str(), ec.message().c_str());
    return 2;
  }
  for (unsigned rotation = 0; rotation < opt.rotations; ++rotation) {
    pinlf_split* raw = nullptr;
    pinlf_status st =
        pinlf_split_create(dataset.get(), opt.config.seed, rotation, &raw);
    if (st != PINLF_OK) return fail(st);
    SplitPtr split(raw);
    const std::string path =
        opt.out + "/split-r" + std::to_string(rotation) + ".json";
    st = pinlf_split_write_manifest(split.get(), dataset.get(),
                                    opt.dataset.c_str(), path.c_str());
    if (st != PINLF_OK) return fail(st);
    std::printf(
        "rotation %u: train %u / validation %u / test %u entries -> %s\n",
        rotation, pinlf_split_size(split.get(), PINLF_SET_TRAIN),
        pinlf_split_size(split.get(), PINLF_SET_VALIDATION),
        pinlf_split_size(split.get(), PINLF_SET_TEST), path.c_str());
  }
  return 0;
}

void print_progress(uint32_t iteration, double objective, double val_rmse,
                    double solver_ms, void* user) {
  (void)solver_ms;
  const uint32_t stride = *static_cast<const uint32_t*>(user);
  if (iteration % stride == 0)
    std::printf("  iter %4u  objective %.6g  val RMSE %.6f\n", iteration,
                objective, val_rmse);
}

int run_train(const Options& opt) {
  DatasetPtr dataset;
  if (int rc = load_dataset(opt, dataset)) return rc;

  pinlf_split* raw_split = nullptr;
  pinlf_status st =
      pinlf_split_create(dataset.get(), opt.config.seed, 0, &raw_split);
  if (st != PINLF_OK) return fail(st);
  SplitPtr split(raw_split);

  std::error_code ec;
  std::filesystem::create_directories(opt.out, ec);
  if (ec) {
    std::fprintf(stderr, "pinlf: error: cannot create %s: %s\n",
                 opt.out.c_str(), ec.message().c_str());
    return 2;
  }

  uint32_t stride = opt.config.max_iters / 20;
  if (stride < 1) stride = 1;
  pinlf_train_options train_opt = {};
  train_opt.callback = print_progress;
  train_opt.user = &stride;

  pinlf_train_report* raw_report = nullptr;
  st = pinlf_train(dataset.get(), split.get(), &opt.config, &train_opt,
                   &raw_report);
  if (st != PINLF_OK) return fail(st);
  ReportPtr report(raw_report);

  const std::string trace_path = opt.out + "/trace.csv";
  {
    std::ofstream trace(trace_path, std::ios::trunc);
    trace << "iteration,objective,val_rmse,elapsed_ms\n";
    char line[128];
    for (uint32_t i = 0; i < pinlf_report_trace_len(report.get()); ++i) {
      uint32_t iteration = 0;
      double objective = 0, val_rmse = 0, ms = 0;
      pinlf_report_trace_row(report.get(), i, &iteration, &objective,
                             &val_rmse, &ms);
      std::snprintf(line, sizeof(line), "%u,%.17g,%.17g,%.3f\n", iteration,
                    objective, val_rmse, ms);
      trace << line;
    }
    if (!trace.flush()) {
      std::fprintf(stderr, "pinlf: error: failed writing %s\n",
                   trace_path.c_str());
      return 2;
    }
  }

  pinlf_model* raw_model = nullptr;
  st = pinlf_report_best_model(report.get(), &raw_model);
  if (st != PINLF_OK) return fail(st);
  ModelPtr best(raw_model);
  const std::string model_path = opt.out + "/model-best.bin";
  st = pinlf_model_save(best.get(), model_path.c_str());
  if (st != PINLF_OK) return fail(st);

  double test_rmse = 0.0;
  st = pinlf_model_rmse(best.get(), dataset.get(), split.get(), PINLF_SET_TEST,
                        &test_rmse);
  if (st != PINLF_OK) return fail(st);

  std::printf(
      "stopped by %s after %u iterations\n"
      "lowest validation RMSE %.6f at iteration %u; test RMSE there %.6f\n"
      "wrote %s and %s\n",
      pinlf_report_stop_reason(report.get()) == PINLF_STOP_ERROR_THRESHOLD
          ? "error threshold"
          : "iteration threshold",
      pinlf_report_iterations_run(report.get()),
      pinlf_report_best_val_rmse(report.get()),
      pinlf_report_best_iteration(report.get()), test_rmse, trace_path.c_str(),
      model_path.c_str());
  return 0;
}

void print_aggregates(const pinlf_sweep_report* report) {
  std::printf("\n  %-6s %-3s %-22s %s\n", "ki", "n", "val RMSE (mean+/-std)",
              "best iteration (mean+/-std)");
  for (uint32_t i = 0; i < pinlf_sweep_aggregate_count(report); ++i) {
    pinlf_sweep_aggregate_info agg;
    if (pinlf_sweep_aggregate(report, i, &agg) != PINLF_OK) continue;
    if (agg.n == 0) {
      std::printf("  %-6g %-3u all rotations failed\n", agg.ki, agg.n);
      continue;
    }
    std::printf("  %-6g %-3u %.6f +/- %.6f  %.1f +/- %.1f\n", agg.ki, agg.n,
                agg.mean_rmse, agg.std_rmse, agg.mean_best_iteration,
                agg.std_best_iteration);
  }
}

int run_sweep(const Options& opt) {
  DatasetPtr dataset;
  if (int rc = load_dataset(opt, dataset)) return rc;

  std::vector<double> grid = opt.ki_grid;
  if (grid.empty())
    grid = {0.00, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
  std::vector<uint32_t> rotations;
  for (unsigned rotation = 0; rotation < opt.rotations; ++rotation)
    rotations.push_back(rotation);

  const unsigned threads = thread_budget();
  std::printf("sweep: %zu ki values x %zu rotations, %u thread%s\n",
              grid.size(), rotations.size(), threads, threads == 1 ? "" : "s");

  pinlf_sweep_report* raw = nullptr;
  pinlf_status st = pinlf_sweep_run(
      dataset.get(), opt.dataset.c_str(), &opt.config, grid.data(),
      (uint32_t)grid.size(), rotations.data(), (uint32_t)rotations.size(),
      threads, &raw);
  if (st != PINLF_OK) return fail(st);
  SweepPtr report(raw);

  st = pinlf_sweep_write(report.get(), opt.out.c_str());
  if (st != PINLF_OK) return fail(st);

  for (uint32_t i = 0; i < pinlf_sweep_cell_count(report.get()); ++i) {
    pinlf_sweep_cell_info cell;
    if (pinlf_sweep_cell(report.get(), i, &cell) != PINLF_OK) continue;
    if (cell.failed)
      std::printf("  ki %-5g rot %u FAILED: %s\n", cell.ki, cell.rotation,
                  cell.fail_reason);
  }
  print_aggregates(report.get());
  std::printf("\nwrote %s/sweep.csv, %s/sweep.json, %s/traces/\n",
              opt.out.c_str(), opt.out.c_str(), opt.out.c_str());
  return 0;
}

int run_report(const Options& opt) {
  const std::string json_path = opt.out + "/sweep.json";
  pinlf_sweep_report* raw = nullptr;
  pinlf_status st = pinlf_sweep_load(json_path.c_str(), &raw);
  if (st != PINLF_OK) return fail(st);
  SweepPtr report(raw);

  st = pinlf_sweep_write(report.get(), opt.out.c_str());
  if (st != PINLF_OK) return fail(st);
  std::printf("re-rendered %s/sweep.csv from %s\n", opt.out.c_str(),
              json_path.c_str());
  print_aggregates(report.get());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinlf: non-negative latent factor analysis of sparse "
               "incomplete matrices"};
  app.set_version_flag("--version", pinlf_version());
  app.require_subcommand(1);

  Options opt;
  pinlf_config_default(&opt.config);

  const auto add_common = [&](CLI::App* cmd, bool needs_dataset) {
    if (needs_dataset)
      cmd->add_option("--dataset", opt.dataset, "ratings file to load")
          ->required();
    cmd->add_option("--format", opt.format, "input file format")
        ->check(CLI::IsMember({"tab", "comma", "mldouble-colon"}))
        ->capture_default_str();
    cmd->add_option("--seed", opt.config.seed, "PRNG seed for split and init")
        ->capture_default_str();
    cmd->add_option("--out", opt.out, "output directory")
        ->capture_default_str();
  };
  const auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--f", opt.config.latent_dim, "latent dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--lambda", opt.config.lambda, "regularization")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--kp", opt.config.kp, "proportional gain")
        ->capture_default_str();
    cmd->add_option("--max-iters", opt.config.max_iters, "iteration threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--error-threshold", opt.config.error_threshold,
                    "stop when validation RMSE moves less than this")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--schedule", opt.schedule, "update schedule")
        ->check(CLI::IsMember({"gauss-seidel", "jacobi"}))
        ->capture_default_str();
  };

  CLI::App* prepare =
      app.add_subcommand("prepare", "parse a dataset, write split manifests");
  add_common(prepare, true);
  prepare->add_option("--rotations", opt.rotations, "split rotations to write")
      ->check(CLI::Range(1u, 5u))
      ->capture_default_str();

  CLI::App* train = app.add_subcommand("train", "single training run");
  add_common(train, true);
  add_solver(train);
  train->add_option("--ki", opt.config.ki, "integral gain")
      ->capture_default_str();

  CLI::App* sweep =
      app.add_subcommand("sweep", "train across a ki grid and rotations");
  add_common(sweep, true);
  add_solver(sweep);
  sweep->add_option("--ki-grid", opt.ki_grid, "comma-separated ki values")
      ->delimiter(',');
  sweep->add_option("--rotations", opt.rotations, "number of rotations")
      ->check(CLI::Range(1u, 5u))
      ->capture_default_str();

  CLI::App* report =
      app.add_subcommand("report", "re-render artifacts from <out>/sweep.json");
  report->add_option("--out", opt.out, "directory holding sweep.json")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // help/version exit 0; any parse problem is usage
  }

  opt.config.schedule = opt.schedule == "jacobi" ? PINLF_SCHEDULE_JACOBI
                                                 : PINLF_SCHEDULE_GAUSS_SEIDEL;

  if (prepare->parsed()) return run_prepare(opt);
  if (train->parsed()) return run_train(opt);
  if (sweep->parsed()) return run_sweep(opt);
  return run_report(opt);
}
