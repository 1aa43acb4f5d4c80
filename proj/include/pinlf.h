/* Copyright 2026 The pinlf authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* pinlf — non-negative latent factor analysis of sparse incomplete matrices.
 *
 * C interface to the pinlf shared library. All objects are opaque handles
 * created and destroyed by the library; every fallible call returns a
 * pinlf_status, and pinlf_last_error() describes the most recent failure on
 * the calling thread. Handles are not thread-safe; distinct handles may be
 * used from distinct threads freely.
 */

#ifndef PINLF_H
#define PINLF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PINLF_API __declspec(dllexport)
#else
#define PINLF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pinlf_status {
  PINLF_OK = 0,
  PINLF_ERR_USAGE = 1,    /* null handle, bad argument */
  PINLF_ERR_DATA = 2,     /* malformed input or violated data contract */
  PINLF_ERR_IO = 3,       /* file open/read/write failure */
  PINLF_ERR_DIVERGED = 4, /* training produced a non-finite metric */
  PINLF_ERR_INTERNAL = 5
} pinlf_status;

typedef enum pinlf_schedule {
  PINLF_SCHEDULE_GAUSS_SEIDEL = 0, /* Y half-step sees the refined X */
  PINLF_SCHEDULE_JACOBI = 1        /* both halves from the old state */
} pinlf_schedule;

typedef enum pinlf_stop_reason {
  PINLF_STOP_ITERATION_THRESHOLD = 0,
  PINLF_STOP_ERROR_THRESHOLD = 1
} pinlf_stop_reason;

typedef enum pinlf_delimiter {
  PINLF_DELIM_TAB = 0,
  PINLF_DELIM_COMMA = 1,
  PINLF_DELIM_DOUBLE_COLON = 2 /* the "::" convention of MovieLens dumps */
} pinlf_delimiter;

/* Which entries of a split to evaluate against. */
typedef enum pinlf_entry_set {
  PINLF_SET_TRAIN = 0,
  PINLF_SET_VALIDATION = 1,
  PINLF_SET_TEST = 2,
  PINLF_SET_ALL = 3 /* the only choice when no split is supplied */
} pinlf_entry_set;

typedef struct pinlf_dataset pinlf_dataset;
typedef struct pinlf_split pinlf_split;
typedef struct pinlf_model pinlf_model;
typedef struct pinlf_train_report pinlf_train_report;
typedef struct pinlf_sweep_report pinlf_sweep_report;

/* Shape of a ratings text file: one entry per line, fields at configurable
 * positions. Unused positions are ignored on input and written as "-" on
 * output. */
typedef struct pinlf_format {
  pinlf_delimiter delimiter;
  uint32_t row_field;
  uint32_t col_field;
  uint32_t value_field;
  int has_header; /* skip the first non-blank line */
} pinlf_format;

/* Tab-separated "row col value", no header. */
PINLF_API void pinlf_format_default(pinlf_format* fmt);

typedef struct pinlf_config {
  uint32_t latent_dim; /* f */
  double lambda;       /* regularization coefficient, >= 0 */
  double kp;           /* proportional gain */
  double ki;           /* integral gain */
  uint32_t max_iters;
  double error_threshold; /* on consecutive validation RMSE change */
  pinlf_schedule schedule;
  uint64_t seed;
  double init_lo; /* factors start uniform on [init_lo, init_hi) */
  double init_hi;
} pinlf_config;

/* f=20, lambda=0.08, kp=1, ki=0, 1000 iterations, threshold 1e-5,
 * gauss-seidel, seed 1, init on [0, 0.5). */
PINLF_API void pinlf_config_default(pinlf_config* config);

/* Library version, e.g. "0.1.0". Static storage. */
PINLF_API const char* pinlf_version(void);

/* Message of the most recent failure on this thread; empty string if none.
 * Valid until the next pinlf call on the same thread. */
PINLF_API const char* pinlf_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

PINLF_API pinlf_status pinlf_dataset_load(const char* path,
                                          const pinlf_format* fmt,
                                          pinlf_dataset** out);
PINLF_API pinlf_status pinlf_dataset_parse(const char* text, size_t len,
                                           const pinlf_format* fmt,
                                           pinlf_dataset** out);
PINLF_API void pinlf_dataset_free(pinlf_dataset* dataset);

PINLF_API uint32_t pinlf_dataset_rows(const pinlf_dataset* dataset);
PINLF_API uint32_t pinlf_dataset_cols(const pinlf_dataset* dataset);
PINLF_API uint32_t pinlf_dataset_entries(const pinlf_dataset* dataset);
PINLF_API double pinlf_dataset_density(const pinlf_dataset* dataset);

/* 16 lowercase hex digits identifying the dataset contents. Owned by the
 * dataset. */
PINLF_API const char* pinlf_dataset_digest(const pinlf_dataset* dataset);

/* Entry by internal id, 0 <= id < pinlf_dataset_entries(). */
PINLF_API pinlf_status pinlf_dataset_entry(const pinlf_dataset* dataset,
                                           uint32_t id, uint32_t* row,
                                           uint32_t* col, double* value);

/* Original identifier tokens behind the dense row/column indices, as they
 * appeared in the input. Owned by the dataset. */
PINLF_API const char* pinlf_dataset_row_id(const pinlf_dataset* dataset,
                                           uint32_t row);
PINLF_API const char* pinlf_dataset_col_id(const pinlf_dataset* dataset,
                                           uint32_t col);

/* ---- splits ------------------------------------------------------------ */

/* Ten-fold split of the known entries: 70% train, 10% validation, 20% test.
 * rotation in 0..4 selects one of five independent reshuffles. */
PINLF_API pinlf_status pinlf_split_create(const pinlf_dataset* dataset,
                                          uint64_t seed, uint32_t rotation,
                                          pinlf_split** out);
PINLF_API void pinlf_split_free(pinlf_split* split);

PINLF_API uint32_t pinlf_split_size(const pinlf_split* split,
                                    pinlf_entry_set set);

/* JSON audit record of the split (seed, rotation, fold sizes, dataset
 * identity). dataset_path may be NULL for in-memory data. */
PINLF_API pinlf_status pinlf_split_write_manifest(const pinlf_split* split,
                                                  const pinlf_dataset* dataset,
                                                  const char* dataset_path,
                                                  const char* out_path);

/* ---- training ---------------------------------------------------------- */

/* Called after each iteration with its metrics; solver_ms covers the update
 * sweep only. Must not call back into the library on the same handles. */
typedef void (*pinlf_iteration_fn)(uint32_t iteration, double objective,
                                   double val_rmse, double solver_ms,
                                   void* user);

typedef struct pinlf_train_options {
  const char* resume_path;     /* train state to continue from, or NULL */
  const char* checkpoint_path; /* where to write train state, or NULL */
  uint32_t checkpoint_every;   /* iterations between checkpoints, >= 1 */
  pinlf_iteration_fn callback; /* per-iteration hook, or NULL */
  void* user;                  /* passed through to the callback */
} pinlf_train_options;

/* Trains on the split's training entries, watching validation RMSE. options
 * may be NULL. On PINLF_ERR_DIVERGED the iteration is in the error text. */
PINLF_API pinlf_status pinlf_train(const pinlf_dataset* dataset,
                                   const pinlf_split* split,
                                   const pinlf_config* config,
                                   const pinlf_train_options* options,
                                   pinlf_train_report** out);

PINLF_API void pinlf_report_free(pinlf_train_report* report);

PINLF_API uint32_t pinlf_report_iterations_run(const pinlf_train_report* r);
PINLF_API uint32_t pinlf_report_final_iteration(const pinlf_train_report* r);
PINLF_API pinlf_stop_reason
pinlf_report_stop_reason(const pinlf_train_report* r);
PINLF_API uint32_t pinlf_report_best_iteration(const pinlf_train_report* r);
PINLF_API double pinlf_report_best_val_rmse(const pinlf_train_report* r);

PINLF_API uint32_t pinlf_report_trace_len(const pinlf_train_report* r);
PINLF_API pinlf_status pinlf_report_trace_row(const pinlf_train_report* r,
                                              uint32_t index,
                                              uint32_t* iteration,
                                              double* objective,
                                              double* val_rmse,
                                              double* solver_ms);

/* Copies of the stop-point and lowest-validation-RMSE factor matrices. */
PINLF_API pinlf_status pinlf_report_final_model(const pinlf_train_report* r,
                                                pinlf_model** out);
PINLF_API pinlf_status pinlf_report_best_model(const pinlf_train_report* r,
                                               pinlf_model** out);

/* ---- models ------------------------------------------------------------ */

PINLF_API void pinlf_model_free(pinlf_model* model);

PINLF_API uint32_t pinlf_model_rows(const pinlf_model* model);
PINLF_API uint32_t pinlf_model_cols(const pinlf_model* model);
PINLF_API uint32_t pinlf_model_latent_dim(const pinlf_model* model);

PINLF_API pinlf_status pinlf_model_predict(const pinlf_model* model,
                                           uint32_t row, uint32_t col,
                                           double* out);

/* RMSE over one side of a split, or over every known entry when split is
 * NULL and set is PINLF_SET_ALL. */
PINLF_API pinlf_status pinlf_model_rmse(const pinlf_model* model,
                                        const pinlf_dataset* dataset,
                                        const pinlf_split* split,
                                        pinlf_entry_set set, double* out);

PINLF_API pinlf_status pinlf_model_save(const pinlf_model* model,
                                        const char* path);
PINLF_API pinlf_status pinlf_model_load(const char* path, pinlf_model** out);

/* ---- sweeps ------------------------------------------------------------ */

/* Grid experiment: for every rotation and every ki, split, train from a
 * per-rotation seed shared across the grid, and record metrics. A diverged
 * run becomes a failed cell; the sweep continues. threads caps concurrent
 * runs. dataset_path is echoed into the report and may be NULL. */
PINLF_API pinlf_status pinlf_sweep_run(const pinlf_dataset* dataset,
                                       const char* dataset_path,
                                       const pinlf_config* config,
                                       const double* ki_grid, uint32_t n_ki,
                                       const uint32_t* rotations,
                                       uint32_t n_rotations, uint32_t threads,
                                       pinlf_sweep_report** out);

/* Writes dir/sweep.csv, dir/sweep.json, dir/traces/<run-id>.csv. sweep.csv
 * is byte-identical across reruns of the same configuration. */
PINLF_API pinlf_status pinlf_sweep_write(const pinlf_sweep_report* report,
                                         const char* dir);

/* Rebuilds a report from a sweep.json (without per-iteration traces). */
PINLF_API pinlf_status pinlf_sweep_load(const char* json_path,
                                        pinlf_sweep_report** out);

PINLF_API void pinlf_sweep_free(pinlf_sweep_report* report);

typedef struct pinlf_sweep_cell_info {
  double ki;
  uint32_t rotation;
  const char* run_id;      /* owned by the report */
  int failed;
  const char* fail_reason; /* owned by the report; empty when not failed */
  double lowest_val_rmse;
  uint32_t best_iteration;
  double test_rmse;
  uint32_t iterations_run;
  pinlf_stop_reason stop_reason;
  double wall_ms;
} pinlf_sweep_cell_info;

typedef struct pinlf_sweep_aggregate_info {
  double ki;
  uint32_t n; /* rotations that completed */
  double mean_rmse;
  double std_rmse;
  double mean_best_iteration;
  double std_best_iteration;
} pinlf_sweep_aggregate_info;

PINLF_API uint32_t pinlf_sweep_cell_count(const pinlf_sweep_report* report);
PINLF_API pinlf_status pinlf_sweep_cell(const pinlf_sweep_report* report,
                                        uint32_t index,
                                        pinlf_sweep_cell_info* out);

PINLF_API uint32_t
pinlf_sweep_aggregate_count(const pinlf_sweep_report* report);
PINLF_API pinlf_status pinlf_sweep_aggregate(const pinlf_sweep_report* report,
                                             uint32_t index,
                                             pinlf_sweep_aggregate_info* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PINLF_H */
