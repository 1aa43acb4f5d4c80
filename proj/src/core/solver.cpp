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

#include "core/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "core/error.hpp"

namespace pinlf {

namespace {

void check_hyper(const Hyperparams& hyper) {
  if (!(hyper.lambda >= 0.0))
    throw DataError("regularization coefficient must be non-negative");
  if (!std::isfinite(hyper.kp) || !std::isfinite(hyper.ki))
    throw DataError("gains kp and ki must be finite");
}

void check_shapes(const HdiMatrix& data, const FactorPair& factors) {
  if (factors.X.rows() != data.n_rows() || factors.Y.rows() != data.n_cols() ||
      factors.X.cols() != factors.f || factors.Y.cols() != factors.f)
    throw DataError("factor shapes do not match the data matrix");
}

}  // namespace

Matrix nmu_expected_x(const HdiMatrix& data, const FactorPair& factors,
                      double lambda) {
  check_shapes(data, factors);
  const std::uint32_t f = factors.f;
  Matrix expected(data.n_rows(), f);
  std::vector<double> num(f);
  std::vector<double> den(f);

  for (std::uint32_t m = 0; m < data.n_rows(); ++m) {
    const double* xm = factors.X.row(m);
    double* out = expected.row(m);
    const auto slice = data.row_slice(m);
    if (slice.empty()) {
      std::copy(xm, xm + f, out);
      continue;
    }
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (const RatingTriple& e : slice) {
      const double* yn = factors.Y.row(e.col);
      const double rhat = detail::dot(xm, yn, f);
      for (std::uint32_t d = 0; d < f; ++d) {
        num[d] += yn[d] * e.value;
        den[d] += yn[d] * rhat;
      }
    }
    const double reg = lambda * static_cast<double>(slice.size());
    for (std::uint32_t d = 0; d < f; ++d) {
      const double denom = den[d] + reg * xm[d];
      out[d] = denom == 0.0 ? xm[d] : xm[d] * num[d] / denom;
    }
  }
  return expected;
}

Matrix nmu_expected_y(const HdiMatrix& data, const FactorPair& factors,
                      double lambda) {
  check_shapes(data, factors);
  const std::uint32_t f = factors.f;
  const auto& entries = data.entries();
  Matrix expected(data.n_cols(), f);
  std::vector<double> num(f);
  std::vector<double> den(f);

  for (std::uint32_t n = 0; n < data.n_cols(); ++n) {
    const double* yn = factors.Y.row(n);
    double* out = expected.row(n);
    const auto slice = data.col_slice(n);
    if (slice.empty()) {
      std::copy(yn, yn + f, out);
      continue;
    }
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (std::uint32_t id : slice) {
      const RatingTriple& e = entries[id];
      const double* xm = factors.X.row(e.row);
      const double rhat = detail::dot(xm, yn, f);
      for (std::uint32_t d = 0; d < f; ++d) {
        num[d] += xm[d] * e.value;
        den[d] += xm[d] * rhat;
      }
    }
    const double reg = lambda * static_cast<double>(slice.size());
    for (std::uint32_t d = 0; d < f; ++d) {
      const double denom = den[d] + reg * yn[d];
      out[d] = denom == 0.0 ? yn[d] : yn[d] * num[d] / denom;
    }
  }
  return expected;
}

void refine_and_apply(Matrix& current, const Matrix& expected,
                      Matrix& accumulator, double kp, double ki) {
  if (!current.same_shape(expected) || !current.same_shape(accumulator))
    throw DataError("refinement shapes do not match");
  double* cur = current.data();
  const double* exp = expected.data();
  double* acc = accumulator.data();
  const std::size_t size = current.size();
  // kp·expected + (1−kp)·current is current + kp·Δ rearranged so that kp=1
  // reproduces `expected` exactly rather than current + (expected − current),
  // which rounding can pull off the target.
  for (std::size_t i = 0; i < size; ++i) {
    acc[i] += exp[i] - cur[i];
    const double raw = kp * exp[i] + (1.0 - kp) * cur[i] + ki * acc[i];
    cur[i] = std::max(raw, 0.0);
  }
}

void isn_iteration(const HdiMatrix& data, TrainState& state,
                   const Hyperparams& hyper, Schedule schedule) {
  check_hyper(hyper);
  FactorPair& factors = state.factors;
  if (!factors.X.same_shape(state.acc.sum_x) ||
      !factors.Y.same_shape(state.acc.sum_y))
    throw DataError("accumulator shapes do not match the factors");

  if (schedule == Schedule::kGaussSeidel) {
    Matrix expected = nmu_expected_x(data, factors, hyper.lambda);
    refine_and_apply(factors.X, expected, state.acc.sum_x, hyper.kp, hyper.ki);
    expected = nmu_expected_y(data, factors, hyper.lambda);
    refine_and_apply(factors.Y, expected, state.acc.sum_y, hyper.kp, hyper.ki);
  } else {
    Matrix expected_x = nmu_expected_x(data, factors, hyper.lambda);
    Matrix expected_y = nmu_expected_y(data, factors, hyper.lambda);
    refine_and_apply(factors.X, expected_x, state.acc.sum_x, hyper.kp,
                     hyper.ki);
    refine_and_apply(factors.Y, expected_y, state.acc.sum_y, hyper.kp,
                     hyper.ki);
  }
  ++state.iteration;
}

TrainReport train(const HdiMatrix& data,
                  std::span<const std::uint32_t> train_ids,
                  std::span<const std::uint32_t> validation_ids,
                  const SolverConfig& config, const IterationHook& hook,
                  const TrainState* resume, TrainState* final_state) {
  check_hyper(config.hyper);
  if (config.max_iters < 1)
    throw DataError("iteration threshold must be at least 1");
  if (!(config.error_threshold >= 0.0))
    throw DataError("error threshold must be non-negative");
  if (train_ids.empty()) throw DataError("training entry set is empty");
  if (validation_ids.empty()) throw DataError("validation entry set is empty");
  if (config.hyper.ki < 0.0 || config.hyper.ki > 0.09)
    std::fprintf(stderr,
                 "pinlf: warning: ki=%g is outside the validated range "
                 "[0, 0.09]\n",
                 config.hyper.ki);

  // The update sweeps only ever see the training entries; metrics on the
  // validation set read the full matrix.
  const HdiMatrix train_matrix = data.restrict_to(train_ids);
  std::vector<std::uint32_t> train_entry_ids(train_matrix.n_entries());
  std::iota(train_entry_ids.begin(), train_entry_ids.end(), 0u);

  TrainState state;
  if (resume != nullptr) {
    state = *resume;
    check_shapes(data, state.factors);
    if (state.iteration >= config.max_iters)
      throw DataError("resumed state is already past the iteration threshold");
  } else {
    state.factors = init_factors(data.n_rows(), data.n_cols(),
                                 config.latent_dim, config.seed,
                                 config.init_lo, config.init_hi);
    state.acc.sum_x = Matrix(data.n_rows(), config.latent_dim);
    state.acc.sum_y = Matrix(data.n_cols(), config.latent_dim);
  }

  TrainReport report;
  report.stop_reason = StopReason::kIterationThreshold;
  double prev_val_rmse = 0.0;
  bool have_prev = false;
  bool have_best = false;

  while (state.iteration < config.max_iters) {
    const auto t0 = std::chrono::steady_clock::now();
    isn_iteration(train_matrix, state, config.hyper, config.schedule);
    const auto t1 = std::chrono::steady_clock::now();

    IterationRecord rec;
    rec.iteration = state.iteration;
    rec.solver_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.objective = objective(state.factors, train_matrix, train_entry_ids,
                              config.hyper.lambda);
    rec.val_rmse = rmse(state.factors, data, validation_ids);
    if (!std::isfinite(rec.objective) || !std::isfinite(rec.val_rmse))
      throw DivergenceError("training diverged", state.iteration);

    report.trace.push_back(rec);
    ++report.iterations_run;
    if (!have_best || rec.val_rmse < report.best_val_rmse) {
      have_best = true;
      report.best_val_rmse = rec.val_rmse;
      report.best_iteration = rec.iteration;
      report.best_factors = state.factors;
    }
    if (hook) hook(rec, state);

    if (have_prev &&
        std::abs(rec.val_rmse - prev_val_rmse) < config.error_threshold) {
      report.stop_reason = StopReason::kErrorThreshold;
      break;
    }
    prev_val_rmse = rec.val_rmse;
    have_prev = true;
  }

  report.final_iteration = state.iteration;
  if (final_state != nullptr) *final_state = state;
  report.final_factors = std::move(state.factors);
  return report;
}

}  // namespace pinlf
