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

#ifndef PINLF_CORE_SWEEP_HPP
#define PINLF_CORE_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/hdi.hpp"
#include "core/solver.hpp"

namespace pinlf {

// Identity of the dataset a sweep ran against, echoed into every artifact.
struct DatasetRef {
  std::string path;        // may be empty for in-memory data
  std::string digest_hex;  // HdiMatrix::content_digest()
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;
  std::uint32_t n_entries = 0;
};

struct ExperimentConfig {
  SolverConfig solver;  // hyper.ki is ignored; the grid supplies it
  std::vector<double> ki_grid = {0.00, 0.01, 0.02, 0.03, 0.04,
                                 0.05, 0.06, 0.07, 0.08, 0.09};
  std::vector<std::uint32_t> rotations = {0};  // each in 0..4
  std::uint32_t threads = 1;
};

// One (ki, rotation) run. A diverged run stays in the report as a failed
// cell; its metric fields are meaningless.
struct SweepCell {
  double ki = 0.0;
  std::uint32_t rotation = 0;
  std::string run_id;  // content hash of (dataset digest, rotation, ki, seed)
  bool failed = false;
  std::string fail_reason;
  double lowest_val_rmse = 0.0;
  std::uint32_t best_iteration = 0;
  double test_rmse = 0.0;  // at the lowest-validation-RMSE snapshot
  std::uint32_t iterations_run = 0;
  StopReason stop_reason = StopReason::kIterationThreshold;
  double wall_ms = 0.0;  // summed solver time across iterations
  std::vector<IterationRecord> trace;  // empty after load_report
};

// Mean and sample standard deviation across the successful rotations of one
// ki value.
struct KiAggregate {
  double ki = 0.0;
  std::uint32_t n = 0;
  double mean_rmse = 0.0;
  double std_rmse = 0.0;
  double mean_best_iteration = 0.0;
  double std_best_iteration = 0.0;
};

struct SweepReport {
  DatasetRef dataset;
  ExperimentConfig config;
  std::vector<SweepCell> cells;  // rotation-major, grid order within
  std::vector<KiAggregate> aggregates;
};

// Spelling used in artifacts and on the command line: "gauss-seidel",
// "jacobi", "iteration-threshold", "error-threshold".
const char* to_string(Schedule s);
const char* to_string(StopReason r);
Schedule schedule_from_string(const std::string& s);

// run-id for one cell, 16 lowercase hex digits.
std::string sweep_run_id(const std::string& dataset_digest,
                         std::uint32_t rotation, double ki,
                         std::uint64_t seed);

// Trains every (rotation, ki) pair. Within a rotation the split comes from
// split_tenfold(seed, rotation) and all ki runs start from the same
// init_factors stream (seed + rotation), so ki is the only thing that moves
// between grid neighbours. Cells may train concurrently up to
// config.threads; results land in grid order regardless. DivergenceError is
// demoted to a failed cell; anything else propagates.
SweepReport run_experiment(const HdiMatrix& data, const DatasetRef& dataset,
                           const ExperimentConfig& config);

// Writes dir/sweep.csv (one row per cell, no timing columns — byte-identical
// across reruns of the same config), dir/sweep.json (everything, timing
// included), and dir/traces/<run-id>.csv per cell with a trace.
void emit_report(const SweepReport& report, const std::string& dir);

// Rebuilds a report from sweep.json; per-iteration traces stay on disk.
SweepReport load_report(const std::string& json_path);

}  // namespace pinlf

#endif  // PINLF_CORE_SWEEP_HPP
