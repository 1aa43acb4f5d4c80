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

#include "pinlf.h"

#include <cstring>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "core/checkpoint.hpp"
#include "core/error.hpp"
#include "core/factors.hpp"
#include "core/hdi.hpp"
#include "core/ratings.hpp"
#include "core/solver.hpp"
#include "core/split.hpp"
#include "core/sweep.hpp"

// The C structs wrap the C++ objects one to one; every entry point catches
// and maps exceptions, so no exception ever crosses the ABI boundary.

struct pinlf_dataset {
  pinlf::HdiMatrix matrix;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  std::string digest;
};

struct pinlf_split {
  pinlf::SplitAssignment split;
};

struct pinlf_model {
  pinlf::FactorPair factors;
};

struct pinlf_train_report {
  pinlf::TrainReport report;
};

struct pinlf_sweep_report {
  pinlf::SweepReport report;
};

namespace {

thread_local std::string g_last_error;

pinlf_status fail(pinlf_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
pinlf_status guarded(Fn&& fn) noexcept {
  g_last_error.clear();
  try {
    return fn();
  } catch (const pinlf::DivergenceError& e) {
    return fail(PINLF_ERR_DIVERGED, e.what());
  } catch (const pinlf::IoError& e) {
    return fail(PINLF_ERR_IO, e.what());
  } catch (const pinlf::ParseError& e) {
    return fail(PINLF_ERR_DATA, e.what());
  } catch (const pinlf::DataError& e) {
    return fail(PINLF_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PINLF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PINLF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PINLF_ERR_INTERNAL, "unknown error");
  }
}

pinlf_status usage(const char* what) { return fail(PINLF_ERR_USAGE, what); }

pinlf::FormatSpec to_format_spec(const pinlf_format& fmt) {
  pinlf::FormatSpec spec;
  switch (fmt.delimiter) {
    case PINLF_DELIM_TAB:
      spec.delim = pinlf::Delimiter::Tab;
      break;
    case PINLF_DELIM_COMMA:
      spec.delim = pinlf::Delimiter::Comma;
      break;
    case PINLF_DELIM_DOUBLE_COLON:
      spec.delim = pinlf::Delimiter::DoubleColon;
      break;
    default:
      throw pinlf::DataError("unknown delimiter code");
  }
  spec.row_field = static_cast<int>(fmt.row_field);
  spec.col_field = static_cast<int>(fmt.col_field);
  spec.value_field = static_cast<int>(fmt.value_field);
  spec.has_header = fmt.has_header != 0;
  return spec;
}

pinlf::SolverConfig to_solver_config(const pinlf_config& config) {
  pinlf::SolverConfig sc;
  sc.hyper.lambda = config.lambda;
  sc.hyper.kp = config.kp;
  sc.hyper.ki = config.ki;
  sc.latent_dim = config.latent_dim;
  sc.max_iters = config.max_iters;
  sc.error_threshold = config.error_threshold;
  sc.schedule = config.schedule == PINLF_SCHEDULE_JACOBI
                    ? pinlf::Schedule::kJacobi
                    : pinlf::Schedule::kGaussSeidel;
  sc.seed = config.seed;
  sc.init_lo = config.init_lo;
  sc.init_hi = config.init_hi;
  return sc;
}

pinlf_dataset* make_dataset(pinlf::ParsedRatings parsed) {
  auto d = std::make_unique<pinlf_dataset>();
  d->matrix = pinlf::HdiMatrix::build(
      std::move(parsed.triples),
      static_cast<std::uint32_t>(parsed.row_ids.size()),
      static_cast<std::uint32_t>(parsed.col_ids.size()));
  d->row_ids = std::move(parsed.row_ids);
  d->col_ids = std::move(parsed.col_ids);
  d->digest = d->matrix.content_digest();
  return d.release();
}

std::span<const std::uint32_t> split_side(const pinlf::SplitAssignment& split,
                                          pinlf_entry_set set) {
  switch (set) {
    case PINLF_SET_TRAIN:
      return split.train;
    case PINLF_SET_VALIDATION:
      return split.validation;
    case PINLF_SET_TEST:
      return split.test;
    default:
      throw pinlf::DataError("entry set must be train, validation or test");
  }
}

}  // namespace

extern "C" {

void pinlf_format_default(pinlf_format* fmt) {
  if (fmt == nullptr) return;
  fmt->delimiter = PINLF_DELIM_TAB;
  fmt->row_field = 0;
  fmt->col_field = 1;
  fmt->value_field = 2;
  fmt->has_header = 0;
}

void pinlf_config_default(pinlf_config* config) {
  if (config == nullptr) return;
  const pinlf::SolverConfig sc;
  config->latent_dim = sc.latent_dim;
  config->lambda = sc.hyper.lambda;
  config->kp = sc.hyper.kp;
  config->ki = sc.hyper.ki;
  config->max_iters = sc.max_iters;
  config->error_threshold = sc.error_threshold;
  config->schedule = PINLF_SCHEDULE_GAUSS_SEIDEL;
  config->seed = sc.seed;
  config->init_lo = sc.init_lo;
  config->init_hi = sc.init_hi;
}

const char* pinlf_version(void) {
#ifdef PINLF_VERSION_STR
  return PINLF_VERSION_STR;
#else
  return "0.0.0";
#endif
}

const char* pinlf_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets ---------------------------------------------------------- */

pinlf_status pinlf_dataset_load(const char* path, const pinlf_format* fmt,
                                pinlf_dataset** out) {
  if (path == nullptr || fmt == nullptr || out == nullptr)
    return usage("pinlf_dataset_load: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = make_dataset(pinlf::parse_ratings_file(path, to_format_spec(*fmt)));
    return PINLF_OK;
  });
}

pinlf_status pinlf_dataset_parse(const char* text, size_t len,
                                 const pinlf_format* fmt, pinlf_dataset** out) {
  if (text == nullptr || fmt == nullptr || out == nullptr)
    return usage("pinlf_dataset_parse: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = make_dataset(
        pinlf::parse_ratings(std::string_view(text, len), to_format_spec(*fmt)));
    return PINLF_OK;
  });
}

void pinlf_dataset_free(pinlf_dataset* dataset) { delete dataset; }

uint32_t pinlf_dataset_rows(const pinlf_dataset* d) {
  return d == nullptr ? 0 : d->matrix.n_rows();
}

uint32_t pinlf_dataset_cols(const pinlf_dataset* d) {
  return d == nullptr ? 0 : d->matrix.n_cols();
}

uint32_t pinlf_dataset_entries(const pinlf_dataset* d) {
  return d == nullptr ? 0 : d->matrix.n_entries();
}

double pinlf_dataset_density(const pinlf_dataset* d) {
  return d == nullptr ? 0.0 : d->matrix.density();
}

const char* pinlf_dataset_digest(const pinlf_dataset* d) {
  return d == nullptr ? "" : d->digest.c_str();
}

pinlf_status pinlf_dataset_entry(const pinlf_dataset* d, uint32_t id,
                                 uint32_t* row, uint32_t* col, double* value) {
  if (d == nullptr || row == nullptr || col == nullptr || value == nullptr)
    return usage("pinlf_dataset_entry: null argument");
  if (id >= d->matrix.n_entries())
    return usage("pinlf_dataset_entry: id out of range");
  const pinlf::RatingTriple& e = d->matrix.entry(id);
  *row = e.row;
  *col = e.col;
  *value = e.value;
  return PINLF_OK;
}

const char* pinlf_dataset_row_id(const pinlf_dataset* d, uint32_t row) {
  if (d == nullptr || row >= d->row_ids.size()) return nullptr;
  return d->row_ids[row].c_str();
}

const char* pinlf_dataset_col_id(const pinlf_dataset* d, uint32_t col) {
  if (d == nullptr || col >= d->col_ids.size()) return nullptr;
  return d->col_ids[col].c_str();
}

/* ---- splits ------------------------------------------------------------ */

pinlf_status pinlf_split_create(const pinlf_dataset* dataset, uint64_t seed,
                                uint32_t rotation, pinlf_split** out) {
  if (dataset == nullptr || out == nullptr)
    return usage("pinlf_split_create: null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<pinlf_split>();
    s->split = pinlf::split_tenfold(dataset->matrix, seed, rotation);
    *out = s.release();
    return PINLF_OK;
  });
}

void pinlf_split_free(pinlf_split* split) { delete split; }

uint32_t pinlf_split_size(const pinlf_split* split, pinlf_entry_set set) {
  if (split == nullptr) return 0;
  switch (set) {
    case PINLF_SET_TRAIN:
      return static_cast<uint32_t>(split->split.train.size());
    case PINLF_SET_VALIDATION:
      return static_cast<uint32_t>(split->split.validation.size());
    case PINLF_SET_TEST:
      return static_cast<uint32_t>(split->split.test.size());
    case PINLF_SET_ALL:
      return static_cast<uint32_t>(split->split.fold_of_entry.size());
  }
  return 0;
}

pinlf_status pinlf_split_write_manifest(const pinlf_split* split,
                                        const pinlf_dataset* dataset,
                                        const char* dataset_path,
                                        const char* out_path) {
  if (split == nullptr || dataset == nullptr || out_path == nullptr)
    return usage("pinlf_split_write_manifest: null argument");
  return guarded([&] {
    pinlf::write_split_manifest(split->split, dataset->matrix,
                                dataset_path == nullptr ? "" : dataset_path,
                                out_path);
    return PINLF_OK;
  });
}

/* ---- training ---------------------------------------------------------- */

pinlf_status pinlf_train(const pinlf_dataset* dataset, const pinlf_split* split,
                         const pinlf_config* config,
                         const pinlf_train_options* options,
                         pinlf_train_report** out) {
  if (dataset == nullptr || split == nullptr || config == nullptr ||
      out == nullptr)
    return usage("pinlf_train: null argument");
  const pinlf_train_options no_options = {};
  const pinlf_train_options& opt = options == nullptr ? no_options : *options;
  if (opt.checkpoint_path != nullptr && opt.checkpoint_every < 1)
    return usage("pinlf_train: checkpoint_every must be at least 1");
  *out = nullptr;

  return guarded([&] {
    const pinlf::SolverConfig sc = to_solver_config(*config);

    pinlf::TrainState resumed;
    const pinlf::TrainState* resume = nullptr;
    if (opt.resume_path != nullptr) {
      resumed = pinlf::load_train_state(opt.resume_path);
      resume = &resumed;
    }

    pinlf::IterationHook hook;
    if (opt.callback != nullptr || opt.checkpoint_path != nullptr) {
      hook = [&opt](const pinlf::IterationRecord& rec,
                    const pinlf::TrainState& state) {
        if (opt.callback != nullptr)
          opt.callback(rec.iteration, rec.objective, rec.val_rmse,
                       rec.solver_ms, opt.user);
        if (opt.checkpoint_path != nullptr &&
            rec.iteration % opt.checkpoint_every == 0)
          pinlf::save_train_state(state, opt.checkpoint_path);
      };
    }

    auto wrapper = std::make_unique<pinlf_train_report>();
    pinlf::TrainState final_state;
    wrapper->report =
        pinlf::train(dataset->matrix, split->split.train,
                     split->split.validation, sc, hook, resume, &final_state);
    // The stop-point state always lands on disk, so resuming never replays
    // more than zero iterations regardless of the checkpoint cadence.
    if (opt.checkpoint_path != nullptr)
      pinlf::save_train_state(final_state, opt.checkpoint_path);
    *out = wrapper.release();
    return PINLF_OK;
  });
}

void pinlf_report_free(pinlf_train_report* report) { delete report; }

uint32_t pinlf_report_iterations_run(const pinlf_train_report* r) {
  return r == nullptr ? 0 : r->report.iterations_run;
}

uint32_t pinlf_report_final_iteration(const pinlf_train_report* r) {
  return r == nullptr ? 0 : r->report.final_iteration;
}

pinlf_stop_reason pinlf_report_stop_reason(const pinlf_train_report* r) {
  if (r == nullptr) return PINLF_STOP_ITERATION_THRESHOLD;
  return r->report.stop_reason == pinlf::StopReason::kErrorThreshold
             ? PINLF_STOP_ERROR_THRESHOLD
             : PINLF_STOP_ITERATION_THRESHOLD;
}

uint32_t pinlf_report_best_iteration(const pinlf_train_report* r) {
  return r == nullptr ? 0 : r->report.best_iteration;
}

double pinlf_report_best_val_rmse(const pinlf_train_report* r) {
  return r == nullptr ? 0.0 : r->report.best_val_rmse;
}

uint32_t pinlf_report_trace_len(const pinlf_train_report* r) {
  return r == nullptr ? 0 : static_cast<uint32_t>(r->report.trace.size());
}

pinlf_status pinlf_report_trace_row(const pinlf_train_report* r,
                                    uint32_t index, uint32_t* iteration,
                                    double* objective, double* val_rmse,
                                    double* solver_ms) {
  if (r == nullptr || iteration == nullptr || objective == nullptr ||
      val_rmse == nullptr || solver_ms == nullptr)
    return usage("pinlf_report_trace_row: null argument");
  if (index >= r->report.trace.size())
    return usage("pinlf_report_trace_row: index out of range");
  const pinlf::IterationRecord& rec = r->report.trace[index];
  *iteration = rec.iteration;
  *objective = rec.objective;
  *val_rmse = rec.val_rmse;
  *solver_ms = rec.solver_ms;
  return PINLF_OK;
}

pinlf_status pinlf_report_final_model(const pinlf_train_report* r,
                                      pinlf_model** out) {
  if (r == nullptr || out == nullptr)
    return usage("pinlf_report_final_model: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new pinlf_model{r->report.final_factors};
    return PINLF_OK;
  });
}

pinlf_status pinlf_report_best_model(const pinlf_train_report* r,
                                     pinlf_model** out) {
  if (r == nullptr || out == nullptr)
    return usage("pinlf_report_best_model: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new pinlf_model{r->report.best_factors};
    return PINLF_OK;
  });
}

/* ---- models ------------------------------------------------------------ */

void pinlf_model_free(pinlf_model* model) { delete model; }

uint32_t pinlf_model_rows(const pinlf_model* m) {
  return m == nullptr ? 0 : static_cast<uint32_t>(m->factors.X.rows());
}

uint32_t pinlf_model_cols(const pinlf_model* m) {
  return m == nullptr ? 0 : static_cast<uint32_t>(m->factors.Y.rows());
}

uint32_t pinlf_model_latent_dim(const pinlf_model* m) {
  return m == nullptr ? 0 : m->factors.f;
}

pinlf_status pinlf_model_predict(const pinlf_model* m, uint32_t row,
                                 uint32_t col, double* out) {
  if (m == nullptr || out == nullptr)
    return usage("pinlf_model_predict: null argument");
  return guarded([&] {
    *out = pinlf::predict(m->factors, row, col);
    return PINLF_OK;
  });
}

pinlf_status pinlf_model_rmse(const pinlf_model* m, const pinlf_dataset* d,
                              const pinlf_split* split, pinlf_entry_set set,
                              double* out) {
  if (m == nullptr || d == nullptr || out == nullptr)
    return usage("pinlf_model_rmse: null argument");
  if (split == nullptr && set != PINLF_SET_ALL)
    return usage("pinlf_model_rmse: a split is required for this entry set");
  return guarded([&] {
    if (split == nullptr || set == PINLF_SET_ALL) {
      std::vector<std::uint32_t> all(d->matrix.n_entries());
      std::iota(all.begin(), all.end(), 0u);
      *out = pinlf::rmse(m->factors, d->matrix, all);
    } else {
      *out = pinlf::rmse(m->factors, d->matrix, split_side(split->split, set));
    }
    return PINLF_OK;
  });
}

pinlf_status pinlf_model_save(const pinlf_model* m, const char* path) {
  if (m == nullptr || path == nullptr)
    return usage("pinlf_model_save: null argument");
  return guarded([&] {
    pinlf::save_model(m->factors, path);
    return PINLF_OK;
  });
}

pinlf_status pinlf_model_load(const char* path, pinlf_model** out) {
  if (path == nullptr || out == nullptr)
    return usage("pinlf_model_load: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new pinlf_model{pinlf::load_model(path)};
    return PINLF_OK;
  });
}

/* ---- sweeps ------------------------------------------------------------ */

pinlf_status pinlf_sweep_run(const pinlf_dataset* dataset,
                             const char* dataset_path,
                             const pinlf_config* config, const double* ki_grid,
                             uint32_t n_ki, const uint32_t* rotations,
                             uint32_t n_rotations, uint32_t threads,
                             pinlf_sweep_report** out) {
  if (dataset == nullptr || config == nullptr || out == nullptr)
    return usage("pinlf_sweep_run: null argument");
  if ((ki_grid == nullptr && n_ki > 0) ||
      (rotations == nullptr && n_rotations > 0))
    return usage("pinlf_sweep_run: null grid with nonzero length");
  *out = nullptr;
  return guarded([&] {
    pinlf::ExperimentConfig ec;
    ec.solver = to_solver_config(*config);
    ec.ki_grid.assign(ki_grid, ki_grid + n_ki);
    ec.rotations.assign(rotations, rotations + n_rotations);
    ec.threads = threads < 1 ? 1 : threads;

    pinlf::DatasetRef ref;
    ref.path = dataset_path == nullptr ? "" : dataset_path;
    ref.digest_hex = dataset->digest;
    ref.n_rows = dataset->matrix.n_rows();
    ref.n_cols = dataset->matrix.n_cols();
    ref.n_entries = dataset->matrix.n_entries();

    auto wrapper = std::make_unique<pinlf_sweep_report>();
    wrapper->report = pinlf::run_experiment(dataset->matrix, ref, ec);
    *out = wrapper.release();
    return PINLF_OK;
  });
}

pinlf_status pinlf_sweep_write(const pinlf_sweep_report* report,
                               const char* dir) {
  if (report == nullptr || dir == nullptr)
    return usage("pinlf_sweep_write: null argument");
  return guarded([&] {
    pinlf::emit_report(report->report, dir);
    return PINLF_OK;
  });
}

pinlf_status pinlf_sweep_load(const char* json_path,
                              pinlf_sweep_report** out) {
  if (json_path == nullptr || out == nullptr)
    return usage("pinlf_sweep_load: null argument");
  *out = nullptr;
  return guarded([&] {
    auto wrapper = std::make_unique<pinlf_sweep_report>();
    wrapper->report = pinlf::load_report(json_path);
    *out = wrapper.release();
    return PINLF_OK;
  });
}

void pinlf_sweep_free(pinlf_sweep_report* report) { delete report; }

uint32_t pinlf_sweep_cell_count(const pinlf_sweep_report* r) {
  return r == nullptr ? 0 : static_cast<uint32_t>(r->report.cells.size());
}

pinlf_status pinlf_sweep_cell(const pinlf_sweep_report* r, uint32_t index,
                              pinlf_sweep_cell_info* out) {
  if (r == nullptr || out == nullptr)
    return usage("pinlf_sweep_cell: null argument");
  if (index >= r->report.cells.size())
    return usage("pinlf_sweep_cell: index out of range");
  const pinlf::SweepCell& cell = r->report.cells[index];
  out->ki = cell.ki;
  out->rotation = cell.rotation;
  out->run_id = cell.run_id.c_str();
  out->failed = cell.failed ? 1 : 0;
  out->fail_reason = cell.fail_reason.c_str();
  out->lowest_val_rmse = cell.lowest_val_rmse;
  out->best_iteration = cell.best_iteration;
  out->test_rmse = cell.test_rmse;
  out->iterations_run = cell.iterations_run;
  out->stop_reason = cell.stop_reason == pinlf::StopReason::kErrorThreshold
                         ? PINLF_STOP_ERROR_THRESHOLD
                         : PINLF_STOP_ITERATION_THRESHOLD;
  out->wall_ms = cell.wall_ms;
  return PINLF_OK;
}

uint32_t pinlf_sweep_aggregate_count(const pinlf_sweep_report* r) {
  return r == nullptr ? 0 : static_cast<uint32_t>(r->report.aggregates.size());
}

pinlf_status pinlf_sweep_aggregate(const pinlf_sweep_report* r, uint32_t index,
                                   pinlf_sweep_aggregate_info* out) {
  if (r == nullptr || out == nullptr)
    return usage("pinlf_sweep_aggregate: null argument");
  if (index >= r->report.aggregates.size())
    return usage("pinlf_sweep_aggregate: index out of range");
  const pinlf::KiAggregate& agg = r->report.aggregates[index];
  out->ki = agg.ki;
  out->n = agg.n;
  out->mean_rmse = agg.mean_rmse;
  out->std_rmse = agg.std_rmse;
  out->mean_best_iteration = agg.mean_best_iteration;
  out->std_best_iteration = agg.std_best_iteration;
  return PINLF_OK;
}

} /* extern "C" */
