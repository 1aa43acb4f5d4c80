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

// Acceptance gate for the library's core guarantees. Each criterion prints
// exactly one PASS/FAIL line; the exit code is nonzero if any requested
// criterion fails. Run with no arguments for the CI set (1-7 and 9);
// criterion 8 needs full-scale datasets on disk and must be asked for
// explicitly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "core/checkpoint.hpp"
#include "core/error.hpp"
#include "core/ratings.hpp"
#include "core/solver.hpp"
#include "core/split.hpp"
#include "core/sweep.hpp"
#include "oracle/dense_oracle.hpp"
#include "support/instances.hpp"

using namespace pinlf;
using pinlf_tests::max_abs_diff;
using pinlf_tests::random_instance;
using pinlf_tests::synthetic_low_rank;
using pinlf_tests::synthetic_ratings;
using pinlf_tests::to_dense;

namespace {

char g_detail[512];

void set_detail(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(g_detail, sizeof(g_detail), fmt, args);
  va_end(args);
}

TrainState fresh_state(const HdiMatrix& data, std::uint32_t f,
                       std::uint64_t seed, double init_hi = 0.5) {
  TrainState s;
  s.factors =
      init_factors(data.n_rows(), data.n_cols(), f, seed, 0.0, init_hi);
  s.acc.sum_x = Matrix(data.n_rows(), f);
  s.acc.sum_y = Matrix(data.n_cols(), f);
  return s;
}

// --- criterion 1: one multiplicative pass agrees with the dense reference --

bool run_oracle_equivalence() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const pinlf_tests::SmallInstance inst = random_instance(seed);
    const std::uint32_t f = 1 + static_cast<std::uint32_t>(seed % 3);
    for (const Schedule schedule :
         {Schedule::kGaussSeidel, Schedule::kJacobi}) {
      for (const double lambda : {0.0, 0.08}) {
        TrainState state = fresh_state(inst.sparse, f, seed * 31 + 7);
        auto x = to_dense(state.factors.X);
        auto y = to_dense(state.factors.Y);

        Hyperparams hyper;
        hyper.lambda = lambda;
        isn_iteration(inst.sparse, state, hyper, schedule);
        pinlf_oracle::dense_nmu_step(
            inst.dense, x, y, lambda,
            schedule == Schedule::kGaussSeidel
                ? pinlf_oracle::OracleSchedule::GaussSeidel
                : pinlf_oracle::OracleSchedule::Jacobi);

        worst = std::max(worst, max_abs_diff(state.factors.X, x));
        worst = std::max(worst, max_abs_diff(state.factors.Y, y));
      }
    }
  }
  set_detail("200 instances, both schedules, worst deviation %.2e", worst);
  return worst <= 1e-12;
}

// --- criterion 2: kp=1, ki=0 reproduces the plain update exactly -----------

bool run_special_case_reduction() {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const pinlf_tests::SmallInstance inst = random_instance(seed + 300);
    const std::uint32_t f = 1 + static_cast<std::uint32_t>(seed % 3);
    for (const Schedule schedule :
         {Schedule::kGaussSeidel, Schedule::kJacobi}) {
      TrainState state = fresh_state(inst.sparse, f, seed);
      FactorPair plain = state.factors;

      Hyperparams hyper;  // kp = 1, ki = 0
      for (int t = 0; t < 50; ++t) {
        isn_iteration(inst.sparse, state, hyper, schedule);
        if (schedule == Schedule::kGaussSeidel) {
          plain.X = nmu_expected_x(inst.sparse, plain, hyper.lambda);
          plain.Y = nmu_expected_y(inst.sparse, plain, hyper.lambda);
        } else {
          Matrix ex = nmu_expected_x(inst.sparse, plain, hyper.lambda);
          Matrix ey = nmu_expected_y(inst.sparse, plain, hyper.lambda);
          plain.X = std::move(ex);
          plain.Y = std::move(ey);
        }
        if (state.factors.X != plain.X || state.factors.Y != plain.Y) {
          set_detail("trajectories split at seed %llu, iteration %d",
                     static_cast<unsigned long long>(seed), t + 1);
          return false;
        }
      }
    }
  }
  set_detail("20 instances x 50 iterations, both schedules, bit-identical");
  return true;
}

// --- criterion 3: refined factors never go negative ------------------------

bool run_non_negativity() {
  std::uint64_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const pinlf_tests::SmallInstance inst = random_instance(seed + 900);
    SplitMix64 rng(seed * 107);
    const double ki = rng.uniform(0.0, 0.09);
    // Wide starting ranges overshoot hard and force truncation events.
    const double init_hi = seed % 3 == 0 ? 10.0 : (seed % 3 == 1 ? 2.0 : 0.5);
    const std::uint32_t f = 1 + static_cast<std::uint32_t>(seed % 3);

    TrainState state = fresh_state(inst.sparse, f, seed, init_hi);
    Hyperparams hyper;
    hyper.ki = ki;
    const Schedule schedule =
        seed % 2 == 0 ? Schedule::kGaussSeidel : Schedule::kJacobi;

    for (int t = 0; t < 40; ++t) {
      isn_iteration(inst.sparse, state, hyper, schedule);
      for (const Matrix* m : {&state.factors.X, &state.factors.Y}) {
        for (std::size_t i = 0; i < m->size(); ++i) {
          ++checked;
          if (!(m->data()[i] >= 0.0)) {
            set_detail("negative factor %.17g at seed %llu, iteration %d",
                       m->data()[i], static_cast<unsigned long long>(seed),
                       t + 1);
            return false;
          }
        }
      }
    }
  }
  set_detail("50 fuzzed runs (ki in [0, 0.09], init up to 10), %llu entries "
             "checked",
             static_cast<unsigned long long>(checked));
  return true;
}

// --- criterion 4: the accumulator replays its increment log ----------------

bool run_accumulator_replay() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const pinlf_tests::SmallInstance inst = random_instance(seed + 1700);
    TrainState state = fresh_state(inst.sparse, 2, seed);
    Hyperparams hyper;
    hyper.ki = 0.05;

    std::vector<std::vector<double>> log_x;
    std::vector<std::vector<double>> log_y;
    for (int t = 0; t < 100; ++t) {
      Matrix ex = nmu_expected_x(inst.sparse, state.factors, hyper.lambda);
      std::vector<double> dx(ex.size());
      for (std::size_t i = 0; i < dx.size(); ++i)
        dx[i] = ex.data()[i] - state.factors.X.data()[i];
      log_x.push_back(std::move(dx));
      refine_and_apply(state.factors.X, ex, state.acc.sum_x, hyper.kp,
                       hyper.ki);

      Matrix ey = nmu_expected_y(inst.sparse, state.factors, hyper.lambda);
      std::vector<double> dy(ey.size());
      for (std::size_t i = 0; i < dy.size(); ++i)
        dy[i] = ey.data()[i] - state.factors.Y.data()[i];
      log_y.push_back(std::move(dy));
      refine_and_apply(state.factors.Y, ey, state.acc.sum_y, hyper.kp,
                       hyper.ki);
    }

    for (std::size_t i = 0; i < state.acc.sum_x.size(); ++i) {
      double sum = 0.0;
      for (const auto& d : log_x) sum += d[i];
      worst = std::max(worst, std::abs(sum - state.acc.sum_x.data()[i]));
    }
    for (std::size_t i = 0; i < state.acc.sum_y.size(); ++i) {
      double sum = 0.0;
      for (const auto& d : log_y) sum += d[i];
      worst = std::max(worst, std::abs(sum - state.acc.sum_y.data()[i]));
    }
  }
  set_detail("10 seeds x 100 iterations, worst replay deviation %.2e", worst);
  return worst <= 1e-12;
}

// --- desk-scale synthetic instance shared by criteria 5-7 ------------------

// Rank-5 ratings-like data: mean entry near 3.5 with a +/-0.17 noise floor,
// so validation RMSE behaves like it does on real recommender matrices
// (a long descent into a flat basin rather than a razor-sharp optimum).
const HdiMatrix& synthetic_instance() {
  static const HdiMatrix data =
      synthetic_ratings(500, 300, 5, 0.02, 2024, 0.55, 1.12, 0.17);
  return data;
}

// The usual random-initialization convention for non-negative factorization:
// center the entries on s = sqrt(mean / f) so the initial reconstruction
// already sits at the data's scale, with a modest spread around it.
std::pair<double, double> scaled_init_range(const HdiMatrix& data,
                                            std::uint32_t f) {
  double mean = 0.0;
  for (std::uint32_t i = 0; i < data.n_entries(); ++i)
    mean += data.entries()[i].value;
  mean /= data.n_entries();
  const double s = std::sqrt(mean / f);
  return {0.6 * s, 1.43 * s};
}

SolverConfig synthetic_config() {
  SolverConfig config;
  config.latent_dim = 5;
  config.hyper.lambda = 0.08;
  config.max_iters = 1000;
  config.error_threshold = 5e-5;  // stop once validation RMSE plateaus
  config.seed = 11;
  const auto [lo, hi] = scaled_init_range(synthetic_instance(), 5);
  config.init_lo = lo;
  config.init_hi = hi;
  return config;
}

// --- criterion 5: the unrefined update never increases the objective -------

bool run_monotonicity() {
  const HdiMatrix& data = synthetic_instance();
  const SplitAssignment split = split_tenfold(data, 11, 0);

  SolverConfig config = synthetic_config();
  config.max_iters = 200;
  config.error_threshold = 0.0;  // monotonicity is about the full 200 steps

  const TrainReport report =
      train(data, split.train, split.validation, config);
  for (std::size_t i = 1; i < report.trace.size(); ++i) {
    const double prev = report.trace[i - 1].objective;
    const double cur = report.trace[i].objective;
    if (cur > prev * (1.0 + 1e-9)) {
      set_detail("objective rose from %.12g to %.12g at iteration %u", prev,
                 cur, report.trace[i].iteration);
      return false;
    }
  }
  set_detail("500x300 rank-5 instance, 200 iterations, objective %.6g -> %.6g",
             report.trace.front().objective, report.trace.back().objective);
  return true;
}

// --- criteria 6 and 7 share one sweep over the integral-gain grid ----------

struct GridOutcome {
  bool ok = false;
  std::string error;
  const SweepCell* baseline = nullptr;  // ki = 0
  SweepReport report;
};

const GridOutcome& synthetic_grid() {
  static const GridOutcome outcome = [] {
    GridOutcome out;
    const HdiMatrix& data = synthetic_instance();
    DatasetRef ref;
    ref.digest_hex = data.content_digest();
    ref.n_rows = data.n_rows();
    ref.n_cols = data.n_cols();
    ref.n_entries = data.n_entries();

    ExperimentConfig config;
    config.solver = synthetic_config();
    config.rotations = {0};
    out.report = run_experiment(data, ref, config);

    for (const SweepCell& cell : out.report.cells) {
      if (cell.failed) {
        out.error = "cell ki=" + std::to_string(cell.ki) +
                    " failed: " + cell.fail_reason;
        return out;
      }
      if (cell.ki == 0.0) out.baseline = &cell;
    }
    if (out.baseline == nullptr) {
      out.error = "no ki=0 baseline cell";
      return out;
    }
    out.ok = true;
    return out;
  }();
  return outcome;
}

// First iteration whose validation RMSE reaches the target; 0 if never.
std::uint32_t iterations_to(const SweepCell& cell, double target) {
  for (const IterationRecord& rec : cell.trace)
    if (rec.val_rmse <= target) return rec.iteration;
  return 0;
}

bool check_acceleration(const SweepReport& report, const SweepCell& baseline,
                        const char* label, std::string& note) {
  const double target = baseline.lowest_val_rmse + 1e-4;
  const std::uint32_t base_iters = iterations_to(baseline, target);

  const SweepCell* accelerated = nullptr;
  for (const SweepCell& cell : report.cells)
    if (cell.ki == 0.04 && cell.rotation == baseline.rotation)
      accelerated = &cell;
  if (accelerated == nullptr || base_iters == 0) {
    note = std::string(label) + ": missing ki=0.04 cell or baseline target";
    return false;
  }
  const std::uint32_t fast_iters = iterations_to(*accelerated, target);

  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: ki=0.04 hit the ki=0 floor in %u of %u "
                                  "iterations (%.0f%%)",
                label, static_cast<unsigned>(fast_iters),
                static_cast<unsigned>(base_iters),
                100.0 * fast_iters / base_iters);
  note = buf;
  return fast_iters != 0 &&
         static_cast<double>(fast_iters) <= 0.75 * base_iters;
}

// Conventional drop locations for the optional real datasets, overridable
// with PINLF_DATA_DIR.
std::string find_dataset(const char* stem) {
  std::vector<std::string> candidates;
  if (const char* dir = std::getenv("PINLF_DATA_DIR"))
    candidates.push_back(std::string(dir) + "/" + stem);
  candidates.push_back(std::string("data/") + stem);
  candidates.push_back(std::string("../data/") + stem);
  candidates.push_back(std::string("../../data/") + stem);
  for (const std::string& path : candidates)
    if (std::filesystem::exists(path)) return path;
  return {};
}

bool run_acceleration() {
  const GridOutcome& grid = synthetic_grid();
  if (!grid.ok) {
    set_detail("%s", grid.error.c_str());
    return false;
  }

  std::string synthetic_note;
  bool pass = check_acceleration(grid.report, *grid.baseline, "synthetic",
                                 synthetic_note);

  // MovieLens-100K runs too when a copy is on disk; absence is not failure.
  std::string ml_note = "ml-100k not present";
  const std::string ml_path = find_dataset("ml-100k/u.data");
  if (!ml_path.empty()) {
    FormatSpec fmt;  // u.data: user TAB item TAB rating TAB timestamp
    const ParsedRatings parsed = parse_ratings_file(ml_path, fmt);
    const HdiMatrix data = HdiMatrix::build(parsed.triples);
    DatasetRef ref;
    ref.path = ml_path;
    ref.digest_hex = data.content_digest();
    ref.n_rows = data.n_rows();
    ref.n_cols = data.n_cols();
    ref.n_entries = data.n_entries();

    ExperimentConfig config;
    config.solver.latent_dim = 20;
    config.solver.max_iters = 1000;
    config.solver.error_threshold = 1e-5;
    config.solver.seed = 11;
    const auto [lo, hi] = scaled_init_range(data, 20);
    config.solver.init_lo = lo;
    config.solver.init_hi = hi;
    config.ki_grid = {0.0, 0.04};
    config.rotations = {0};
    const SweepReport report = run_experiment(data, ref, config);
    const SweepCell* baseline = nullptr;
    for (const SweepCell& cell : report.cells)
      if (cell.ki == 0.0 && !cell.failed) baseline = &cell;
    if (baseline == nullptr) {
      ml_note = "ml-100k baseline failed";
      pass = false;
    } else {
      pass = check_acceleration(report, *baseline, "ml-100k", ml_note) && pass;
    }
  }

  set_detail("%s; %s (bound: 75%%)", synthetic_note.c_str(), ml_note.c_str());
  return pass;
}

bool run_accuracy() {
  const GridOutcome& grid = synthetic_grid();
  if (!grid.ok) {
    set_detail("%s", grid.error.c_str());
    return false;
  }

  const SweepCell* best = nullptr;
  for (const SweepCell& cell : grid.report.cells)
    if (cell.ki > 0.0 &&
        (best == nullptr || cell.lowest_val_rmse < best->lowest_val_rmse))
      best = &cell;
  if (best == nullptr) {
    set_detail("grid has no ki > 0 cells");
    return false;
  }

  const double baseline = grid.baseline->lowest_val_rmse;
  set_detail("best ki=%.2g validation RMSE %.6f vs %.6f at ki=0", best->ki,
             best->lowest_val_rmse, baseline);
  return best->lowest_val_rmse <= baseline + 1e-4;
}

// --- criterion 8: optional full-scale reference datasets -------------------

bool run_full_scale() {
  struct Target {
    const char* stem;
    double expected_rmse;
    double band;
  };
  const Target targets[] = {{"jester.tsv", 1.0096, 0.02},
                            {"hetrec-ml.tsv", 0.7695, 0.02}};

  std::string notes;
  bool any = false;
  for (const Target& target : targets) {
    const std::string path = find_dataset(target.stem);
    if (path.empty()) continue;
    any = true;

    const ParsedRatings parsed = parse_ratings_file(path, FormatSpec{});
    const HdiMatrix data = HdiMatrix::build(parsed.triples);
    const SplitAssignment split = split_tenfold(data, 11, 0);

    SolverConfig config;
    config.latent_dim = 20;
    config.hyper.lambda = 0.08;
    config.hyper.ki = 0.04;
    config.max_iters = 500;
    config.error_threshold = 1e-5;
    config.seed = 11;

    const TrainReport report =
        train(data, split.train, split.validation, config);
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "%s: lowest RMSE %.4f at iteration %u (reference %.4f "
                  "+/- %.2f; deviations documented, not failed) ",
                  target.stem, report.best_val_rmse,
                  static_cast<unsigned>(report.best_iteration),
                  target.expected_rmse, target.band);
    notes += buf;
  }
  if (!any) {
    set_detail("no full-scale datasets found (set PINLF_DATA_DIR or drop "
               "files under data/); nothing to measure");
    return true;
  }
  set_detail("%s", notes.c_str());
  return true;
}

// --- criterion 9: rerunning a sweep reproduces sweep.csv byte for byte -----

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

bool run_determinism() {
  const HdiMatrix data = synthetic_low_rank(60, 40, 3, 0.3, 5);
  DatasetRef ref;
  ref.digest_hex = data.content_digest();
  ref.n_rows = data.n_rows();
  ref.n_cols = data.n_cols();
  ref.n_entries = data.n_entries();

  ExperimentConfig config;
  config.solver.latent_dim = 3;
  config.solver.max_iters = 30;
  config.solver.error_threshold = 0.0;
  config.solver.seed = 9;
  config.ki_grid = {0.0, 0.03, 0.07};
  config.rotations = {0, 1};

  const auto base = std::filesystem::temp_directory_path();
  const auto dir_a = base / "pinlf_acceptance_det_a";
  const auto dir_b = base / "pinlf_acceptance_det_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);

  emit_report(run_experiment(data, ref, config), dir_a.string());
  emit_report(run_experiment(data, ref, config), dir_b.string());

  const std::string a = slurp(dir_a / "sweep.csv");
  const std::string b = slurp(dir_b / "sweep.csv");
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);

  if (a.empty() || a != b) {
    set_detail("sweep.csv differs between identical runs (%zu vs %zu bytes)",
               a.size(), b.size());
    return false;
  }
  set_detail("two identical sweeps, %zu-byte sweep.csv matches exactly",
             a.size());
  return true;
}

struct Criterion {
  int id;
  const char* title;
  bool (*run)();
  double budget_s;
};

const Criterion kCriteria[] = {
    {1, "sparse update matches the dense reference", run_oracle_equivalence,
     5.0},
    {2, "kp=1, ki=0 reduces to the plain update", run_special_case_reduction,
     5.0},
    {3, "factors stay non-negative under refinement", run_non_negativity,
     30.0},
    {4, "accumulator equals the raw increment sum", run_accumulator_replay,
     10.0},
    {5, "objective is non-increasing at ki=0", run_monotonicity, 60.0},
    {6, "integral gain accelerates convergence", run_acceleration, 600.0},
    {7, "accelerated accuracy does not degrade", run_accuracy, 600.0},
    {8, "full-scale reference datasets (optional)", run_full_scale, 0.0},
    {9, "sweep artifacts are byte-reproducible", run_determinism, 60.0},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> requested;
  if (argc <= 1) {
    requested = {1, 2, 3, 4, 5, 6, 7, 9};
  } else {
    for (int i = 1; i < argc; ++i) {
      char* end = nullptr;
      const long id = std::strtol(argv[i], &end, 10);
      if (end == argv[i] || *end != '\0' || id < 1 || id > 9) {
        std::fprintf(stderr, "usage: %s [criterion-number...]\n", argv[0]);
        return 2;
      }
      requested.push_back(static_cast<int>(id));
    }
  }

  bool all_pass = true;
  for (int id : requested) {
    for (const Criterion& criterion : kCriteria) {
      if (criterion.id != id) continue;
      g_detail[0] = '\0';
      const auto t0 = std::chrono::steady_clock::now();
      bool pass = false;
      try {
        pass = criterion.run();
      } catch (const std::exception& e) {
        set_detail("unexpected exception: %s", e.what());
      }
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      if (criterion.budget_s > 0.0 && elapsed > criterion.budget_s) {
        pass = false;
        std::printf("FAIL criterion %d: %s — over time budget: %.1f s > "
                    "%.0f s (%s)\n",
                    id, criterion.title, elapsed, criterion.budget_s, g_detail);
        all_pass = false;
        continue;
      }
      std::printf("%s criterion %d: %s — %s (%.2f s)\n",
                  pass ? "PASS" : "FAIL", id, criterion.title, g_detail,
                  elapsed);
      all_pass = all_pass && pass;
    }
  }
  return all_pass ? 0 : 1;
}
