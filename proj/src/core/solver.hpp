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

#ifndef PINLF_CORE_SOLVER_HPP
#define PINLF_CORE_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/factors.hpp"
#include "core/hdi.hpp"
#include "core/matrix.hpp"

namespace pinlf {

// gauss-seidel refines X first and lets the Y half-step see the refined X;
// jacobi computes both halves from the iteration's starting state.
enum class Schedule { kGaussSeidel, kJacobi };

enum class StopReason { kIterationThreshold, kErrorThreshold };

struct SolverConfig {
  Hyperparams hyper;
  std::uint32_t latent_dim = 20;
  std::uint32_t max_iters = 1000;
  double error_threshold = 1e-5;  // on consecutive validation RMSE change
  Schedule schedule = Schedule::kGaussSeidel;
  std::uint64_t seed = 1;
  double init_lo = 0.0;
  double init_hi = 0.5;
};

// Running sums of the raw (pre-truncation) per-entry increments, shaped like
// the factor matrices. The integral term of the refinement reads these.
struct IncrementAccumulator {
  Matrix sum_x;
  Matrix sum_y;

  friend bool operator==(const IncrementAccumulator&,
                         const IncrementAccumulator&) = default;
};

// Everything needed to continue training exactly where it stopped.
struct TrainState {
  FactorPair factors;
  IncrementAccumulator acc;
  std::uint32_t iteration = 0;  // completed iterations

  friend bool operator==(const TrainState&, const TrainState&) = default;
};

struct IterationRecord {
  std::uint32_t iteration = 0;  // 1-based
  double objective = 0.0;       // on the training entries
  double val_rmse = 0.0;
  double solver_ms = 0.0;  // update sweep only; excludes metric evaluation
};

// Invoked after each iteration's metrics are known. The state reference is
// live: callers may snapshot it for checkpoints but must not mutate it.
using IterationHook =
    std::function<void(const IterationRecord&, const TrainState&)>;

struct TrainReport {
  std::uint32_t iterations_run = 0;    // in this call
  std::uint32_t final_iteration = 0;   // counting any resumed prefix
  StopReason stop_reason = StopReason::kIterationThreshold;
  std::vector<IterationRecord> trace;
  FactorPair final_factors;
  std::uint32_t best_iteration = 0;
  double best_val_rmse = 0.0;
  FactorPair best_factors;  // snapshot at best_iteration
};

// Multiplicative-update targets for one half-step. Entry (m, d) is
//   x . num / den,  num = sum over known (m, n) of y_nd r_mn,
//                   den = sum over known (m, n) of y_nd rhat_mn + lambda
//                         |row m| x_md,
// left unchanged where den is zero (empty rows included). Non-negativity is
// preserved: every factor in the ratio is non-negative.
Matrix nmu_expected_x(const HdiMatrix& data, const FactorPair& factors,
                      double lambda);
Matrix nmu_expected_y(const HdiMatrix& data, const FactorPair& factors,
                      double lambda);

// Per entry: the raw increment (expected - current) folds into the
// accumulator first, then
//   raw next = kp expected + (1 - kp) current + ki accumulator'
// and the state takes max(raw, 0). The accumulator keeps the raw increment
// even when truncation clips the state, and at kp = 1, ki = 0 the result is
// bit-identical to adopting the expected value outright.
void refine_and_apply(Matrix& current, const Matrix& expected,
                      Matrix& accumulator, double kp, double ki);

// One full training iteration over both factor matrices, per the schedule.
// Advances state.iteration.
void isn_iteration(const HdiMatrix& data, TrainState& state,
                   const Hyperparams& hyper, Schedule schedule);

// Runs isn_iteration until max_iters or until the validation RMSE moves by
// less than error_threshold between consecutive iterations. Factors start
// from init_factors(seed) unless `resume` supplies a state. Throws
// DivergenceError the first time the objective or validation RMSE goes
// non-finite. A non-null final_state receives the complete stop-point state
// (accumulators included), from which a later call can resume.
TrainReport train(const HdiMatrix& data,
                  std::span<const std::uint32_t> train_ids,
                  std::span<const std::uint32_t> validation_ids,
                  const SolverConfig& config, const IterationHook& hook = {},
                  const TrainState* resume = nullptr,
                  TrainState* final_state = nullptr);

}  // namespace pinlf

#endif  // PINLF_CORE_SOLVER_HPP
