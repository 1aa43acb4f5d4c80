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

#include "core/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "core/error.hpp"
#include "core/split.hpp"

namespace pinlf {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

StopReason stop_reason_from_name(const std::string& s) {
  if (s == "iteration-threshold") return StopReason::kIterationThreshold;
  if (s == "error-threshold") return StopReason::kErrorThreshold;
  throw DataError("unknown stop reason '" + s + "'");
}

// CSV fields are plain tokens except fail reasons, which get quoted if they
// ever grow a delimiter.
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void mean_std(const std::vector<double>& v, double& mean, double& std) {
  mean = 0.0;
  std = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  std = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void check_config(const ExperimentConfig& config) {
  for (double ki : config.ki_grid)
    if (!std::isfinite(ki)) throw DataError("ki grid values must be finite");
  std::set<std::uint32_t> seen;
  for (std::uint32_t r : config.rotations) {
    if (r > 4) throw DataError("rotation index must be in 0..4");
    if (!seen.insert(r).second) throw DataError("duplicate rotation index");
  }
  if (config.threads < 1) throw DataError("thread count must be at least 1");
}

std::ofstream open_artifact(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

const char* to_string(Schedule s) {
  return s == Schedule::kGaussSeidel ? "gauss-seidel" : "jacobi";
}

const char* to_string(StopReason r) {
  return r == StopReason::kIterationThreshold ? "iteration-threshold"
                                              : "error-threshold";
}

Schedule schedule_from_string(const std::string& s) {
  if (s == "gauss-seidel") return Schedule::kGaussSeidel;
  if (s == "jacobi") return Schedule::kJacobi;
  throw DataError("unknown schedule '" + s + "'");
}

std::string sweep_run_id(const std::string& dataset_digest,
                         std::uint32_t rotation, double ki,
                         std::uint64_t seed) {
  char key[160];
  std::snprintf(key, sizeof(key), "%s:%u:%.17g:%llu", dataset_digest.c_str(),
                static_cast<unsigned>(rotation), ki,
                static_cast<unsigned long long>(seed));
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(key)));
  return hex;
}

SweepReport run_experiment(const HdiMatrix& data, const DatasetRef& dataset,
                           const ExperimentConfig& config) {
  check_config(config);

  SweepReport report;
  report.dataset = dataset;
  report.config = config;

  struct Job {
    std::uint32_t rotation;
    double ki;
    const SplitAssignment* split;
  };
  std::vector<SplitAssignment> splits;
  splits.reserve(config.rotations.size());
  for (std::uint32_t rotation : config.rotations)
    splits.push_back(split_tenfold(data, config.solver.seed, rotation));

  std::vector<Job> jobs;
  for (std::size_t ri = 0; ri < config.rotations.size(); ++ri)
    for (double ki : config.ki_grid)
      jobs.push_back({config.rotations[ri], ki, &splits[ri]});
  report.cells.resize(jobs.size());

  auto run_one = [&](const Job& job, SweepCell& cell) {
    SolverConfig sc = config.solver;
    sc.hyper.ki = job.ki;
    // Same seed for every ki in the rotation: all grid neighbours start from
    // identical factors, so differences are attributable to ki alone.
    sc.seed = config.solver.seed + job.rotation;

    cell.ki = job.ki;
    cell.rotation = job.rotation;
    cell.run_id =
        sweep_run_id(dataset.digest_hex, job.rotation, job.ki, sc.seed);
    try {
      TrainReport tr =
          train(data, job.split->train, job.split->validation, sc);
      cell.lowest_val_rmse = tr.best_val_rmse;
      cell.best_iteration = tr.best_iteration;
      cell.test_rmse = rmse(tr.best_factors, data, job.split->test);
      cell.iterations_run = tr.iterations_run;
      cell.stop_reason = tr.stop_reason;
      for (const IterationRecord& rec : tr.trace) cell.wall_ms += rec.solver_ms;
      cell.trace = std::move(tr.trace);
    } catch (const DivergenceError& e) {
      cell.failed = true;
      cell.fail_reason = e.what();
    }
  };

  const std::uint32_t threads = std::min<std::uint32_t>(
      config.threads, static_cast<std::uint32_t>(jobs.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      run_one(jobs[i], report.cells[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::uint32_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size();
             i = next.fetch_add(1))
          run_one(jobs[i], report.cells[i]);
      });
    for (std::thread& t : pool) t.join();
  }

  for (double ki : config.ki_grid) {
    KiAggregate agg;
    agg.ki = ki;
    std::vector<double> rmses;
    std::vector<double> iters;
    for (const SweepCell& cell : report.cells) {
      if (cell.ki != ki || cell.failed) continue;
      rmses.push_back(cell.lowest_val_rmse);
      iters.push_back(static_cast<double>(cell.best_iteration));
    }
    agg.n = static_cast<std::uint32_t>(rmses.size());
    mean_std(rmses, agg.mean_rmse, agg.std_rmse);
    mean_std(iters, agg.mean_best_iteration, agg.std_best_iteration);
    report.aggregates.push_back(agg);
  }
  return report;
}

void emit_report(const SweepReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  // sweep.csv carries no timing so a rerun of the same config reproduces it
  // byte for byte; wall times live in sweep.json and the traces.
  {
    auto out = open_artifact(fs::path(dir) / "sweep.csv");
    out << "ki,rotation,run_id,failed,fail_reason,lowest_val_rmse,"
           "best_iteration,test_rmse,iterations_run,stop_reason\n";
    char buf[256];
    for (const SweepCell& cell : report.cells) {
      std::snprintf(buf, sizeof(buf), "%g,%u,%s,%d,", cell.ki,
                    static_cast<unsigned>(cell.rotation), cell.run_id.c_str(),
                    cell.failed ? 1 : 0);
      out << buf << csv_escape(cell.fail_reason) << ',';
      if (cell.failed) {
        out << ",,,,\n";
        continue;
      }
      std::snprintf(buf, sizeof(buf), "%.6f,%u,%.6f,%u,%s\n",
                    cell.lowest_val_rmse,
                    static_cast<unsigned>(cell.best_iteration), cell.test_rmse,
                    static_cast<unsigned>(cell.iterations_run),
                    to_string(cell.stop_reason));
      out << buf;
    }
    if (!out.flush()) throw IoError("failed writing sweep.csv");
  }

  {
    nlohmann::json j;
    j["dataset"] = {{"path", report.dataset.path},
                    {"digest", report.dataset.digest_hex},
                    {"rows", report.dataset.n_rows},
                    {"cols", report.dataset.n_cols},
                    {"entries", report.dataset.n_entries}};
    const SolverConfig& sc = report.config.solver;
    j["config"] = {{"f", sc.latent_dim},
                   {"lambda", sc.hyper.lambda},
                   {"kp", sc.hyper.kp},
                   {"max_iters", sc.max_iters},
                   {"error_threshold", sc.error_threshold},
                   {"schedule", to_string(sc.schedule)},
                   {"seed", sc.seed},
                   {"init_lo", sc.init_lo},
                   {"init_hi", sc.init_hi},
                   {"ki_grid", report.config.ki_grid},
                   {"rotations", report.config.rotations},
                   {"threads", report.config.threads}};
    j["cells"] = nlohmann::json::array();
    for (const SweepCell& cell : report.cells) {
      nlohmann::json c = {{"ki", cell.ki},
                          {"rotation", cell.rotation},
                          {"run_id", cell.run_id},
                          {"failed", cell.failed},
                          {"fail_reason", cell.fail_reason}};
      if (!cell.failed) {
        c["lowest_val_rmse"] = cell.lowest_val_rmse;
        c["best_iteration"] = cell.best_iteration;
        c["test_rmse"] = cell.test_rmse;
        c["iterations_run"] = cell.iterations_run;
        c["stop_reason"] = to_string(cell.stop_reason);
        c["wall_ms"] = cell.wall_ms;
      }
      j["cells"].push_back(std::move(c));
    }
    j["aggregates"] = nlohmann::json::array();
    for (const KiAggregate& agg : report.aggregates)
      j["aggregates"].push_back(
          {{"ki", agg.ki},
           {"n", agg.n},
           {"mean_rmse", agg.mean_rmse},
           {"std_rmse", agg.std_rmse},
           {"mean_best_iteration", agg.mean_best_iteration},
           {"std_best_iteration", agg.std_best_iteration}});
    auto out = open_artifact(fs::path(dir) / "sweep.json");
    out << j.dump(2) << '\n';
    if (!out.flush()) throw IoError("failed writing sweep.json");
  }

  bool any_trace = false;
  for (const SweepCell& cell : report.cells)
    if (!cell.trace.empty()) any_trace = true;
  if (any_trace) {
    const fs::path traces = fs::path(dir) / "traces";
    fs::create_directories(traces, ec);
    if (ec)
      throw IoError("cannot create " + traces.string() + ": " + ec.message());
    char buf[128];
    for (const SweepCell& cell : report.cells) {
      if (cell.trace.empty()) continue;
      auto out = open_artifact(traces / (cell.run_id + ".csv"));
      out << "iteration,objective,val_rmse,elapsed_ms\n";
      for (const IterationRecord& rec : cell.trace) {
        std::snprintf(buf, sizeof(buf), "%u,%.17g,%.17g,%.3f\n",
                      static_cast<unsigned>(rec.iteration), rec.objective,
                      rec.val_rmse, rec.solver_ms);
        out << buf;
      }
      if (!out.flush())
        throw IoError("failed writing trace " + cell.run_id + ".csv");
    }
  }
}

SweepReport load_report(const std::string& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + json_path);
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    SweepReport report;
    const auto& d = j.at("dataset");
    report.dataset.path = d.at("path").get<std::string>();
    report.dataset.digest_hex = d.at("digest").get<std::string>();
    report.dataset.n_rows = d.at("rows").get<std::uint32_t>();
    report.dataset.n_cols = d.at("cols").get<std::uint32_t>();
    report.dataset.n_entries = d.at("entries").get<std::uint32_t>();
    const auto& c = j.at("config");
    SolverConfig& sc = report.config.solver;
    sc.latent_dim = c.at("f").get<std::uint32_t>();
    sc.hyper.lambda = c.at("lambda").get<double>();
    sc.hyper.kp = c.at("kp").get<double>();
    sc.max_iters = c.at("max_iters").get<std::uint32_t>();
    sc.error_threshold = c.at("error_threshold").get<double>();
    sc.schedule = schedule_from_string(c.at("schedule").get<std::string>());
    sc.seed = c.at("seed").get<std::uint64_t>();
    sc.init_lo = c.at("init_lo").get<double>();
    sc.init_hi = c.at("init_hi").get<double>();
    report.config.ki_grid = c.at("ki_grid").get<std::vector<double>>();
    report.config.rotations =
        c.at("rotations").get<std::vector<std::uint32_t>>();
    report.config.threads = c.at("threads").get<std::uint32_t>();
    for (const auto& jc : j.at("cells")) {
      SweepCell cell;
      cell.ki = jc.at("ki").get<double>();
      cell.rotation = jc.at("rotation").get<std::uint32_t>();
      cell.run_id = jc.at("run_id").get<std::string>();
      cell.failed = jc.at("failed").get<bool>();
      cell.fail_reason = jc.at("fail_reason").get<std::string>();
      if (!cell.failed) {
        cell.lowest_val_rmse = jc.at("lowest_val_rmse").get<double>();
        cell.best_iteration = jc.at("best_iteration").get<std::uint32_t>();
        cell.test_rmse = jc.at("test_rmse").get<double>();
        cell.iterations_run = jc.at("iterations_run").get<std::uint32_t>();
        cell.stop_reason =
            stop_reason_from_name(jc.at("stop_reason").get<std::string>());
        cell.wall_ms = jc.at("wall_ms").get<double>();
      }
      report.cells.push_back(std::move(cell));
    }
    for (const auto& ja : j.at("aggregates")) {
      KiAggregate agg;
      agg.ki = ja.at("ki").get<double>();
      agg.n = ja.at("n").get<std::uint32_t>();
      agg.mean_rmse = ja.at("mean_rmse").get<double>();
      agg.std_rmse = ja.at("std_rmse").get<double>();
      agg.mean_best_iteration = ja.at("mean_best_iteration").get<double>();
      agg.std_best_iteration = ja.at("std_best_iteration").get<double>();
      report.aggregates.push_back(agg);
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed sweep report " + json_path + ": " + e.what());
  }
}

}  // namespace pinlf
