// Copyright 2026 The knotmppi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mppi/harness.h"

namespace {

using mppi::harness::BenchRow;
using mppi::harness::EpisodeReport;
using mppi::harness::SweepResult;
using mppi::harness::TaskConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDiverged = 2;

constexpr const char* kSchemaFooter =
    "CSV schemas:\n"
    "  episodes: seed,task,param_name,param_value,total_cost,success,steps,"
    "mean_plan_wall_ms\n"
    "  sweep summary: param_name,param_value,runs,mean_cost,std_cost,"
    "success_rate,mean_plan_wall_ms\n"
    "  bench: n_samples,workers,median_ms,p95_ms\n"
    "  measurements: timestamp_s,sensor_type,values... (pose: x,y; imu: "
    "ax,ay)\n"
    "  truth: t,x,y,vx,vy,ax,ay\n"
    "mean_plan_wall_ms is wall-clock time; every other column is "
    "deterministic for a fixed config and seed.";

TaskConfig LoadConfigOrDefault(const std::string& config_path,
                               const std::string& task) {
  if (!config_path.empty()) {
    TaskConfig config = mppi::harness::LoadTaskConfig(config_path);
    if (!task.empty() && task != config.task) {
      throw std::invalid_argument("--task '" + task +
                                  "' conflicts with config task '" +
                                  config.task + "'");
    }
    return config;
  }
  return mppi::harness::DefaultTaskConfig(task.empty() ? "cartpole" : task);
}

// "0,1,2" or "0..9" (inclusive range)
std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const std::uint64_t first = std::stoull(text.substr(0, range_pos));
    const std::uint64_t last = std::stoull(text.substr(range_pos + 2));
    if (last < first) {
      throw std::invalid_argument("--seeds range is reversed");
    }
    for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
    return seeds;
  }
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) {
    throw std::invalid_argument("--seeds is empty");
  }
  return seeds;
}

std::vector<std::string> SplitCommaList(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<int> ParseIntList(const std::string& text, const char* flag) {
  std::vector<int> values;
  for (const std::string& item : SplitCommaList(text)) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) + ": bad integer '" +
                                  item + "'");
    }
  }
  if (values.empty()) {
    throw std::invalid_argument(std::string(flag) + " is empty");
  }
  return values;
}

void AppendEpisodeCsv(const std::string& path, const EpisodeReport& report,
                      const std::string& param_name,
                      const std::string& param_value) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  if (fresh) {
    mppi::harness::WriteEpisodeCsvHeader(out);
  }
  mppi::harness::WriteEpisodeCsvRow(out, report, param_name, param_value);
}

int RunCommand(const std::string& config_path, const std::string& task,
               std::uint64_t seed, const std::string& out_path,
               const std::string& trace_path, int workers) {
  TaskConfig config = LoadConfigOrDefault(config_path, task);
  if (workers > 0) config.workers = workers;
  const EpisodeReport report =
      mppi::harness::RunEpisode(config, seed, trace_path);
  std::printf(
      "task=%s seed=%llu total_cost=%.6g success=%d steps=%d "
      "mean_plan_wall_ms=%.3f%s\n",
      report.task.c_str(), static_cast<unsigned long long>(report.seed),
      report.total_cost, report.success ? 1 : 0, report.steps,
      report.mean_plan_wall_ms, report.diverged ? " DIVERGED" : "");
  if (!out_path.empty()) {
    AppendEpisodeCsv(out_path, report, "none", "none");
  }
  return report.diverged ? kExitDiverged : kExitOk;
}

int SweepCommand(const std::string& config_path, const std::string& task,
                 const std::string& param, const std::string& values_text,
                 const std::string& seeds_text, const std::string& out_path,
                 int workers) {
  TaskConfig config = LoadConfigOrDefault(config_path, task);
  if (workers > 0) config.workers = workers;
  const std::vector<std::string> values = SplitCommaList(values_text);
  const std::vector<std::uint64_t> seeds = ParseSeeds(seeds_text);

  const SweepResult result =
      mppi::harness::RunSweep(config, param, values, seeds);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      throw std::invalid_argument("cannot open output file: " + out_path);
    }
    mppi::harness::WriteEpisodeCsvHeader(out);
    for (const auto& cell : result.cells) {
      mppi::harness::WriteEpisodeCsvRow(out, cell.report, param, cell.value);
    }
    const std::string summary_path =
        out_path.substr(0, out_path.find_last_of('.')) + "_summary.csv";
    std::ofstream summary(summary_path);
    if (!summary) {
      throw std::invalid_argument("cannot open output file: " + summary_path);
    }
    mppi::harness::WriteSweepSummaryCsv(summary, result);
  }

  bool any_finished = false;
  std::printf("param=%s\n", param.c_str());
  for (const auto& row : result.summary) {
    std::printf(
        "  %s=%s runs=%d mean_cost=%.6g std_cost=%.6g success_rate=%.2f "
        "mean_plan_wall_ms=%.3f\n",
        param.c_str(), row.value.c_str(), row.runs, row.mean_cost,
        row.std_cost, row.success_rate, row.mean_plan_wall_ms);
  }
  for (const auto& cell : result.cells) {
    any_finished = any_finished || !cell.report.diverged;
  }
  return any_finished ? kExitOk : kExitDiverged;
}

int BenchCommand(const std::string& config_path, const std::string& task,
                 const std::string& samples_text,
                 const std::string& workers_text, int iterations,
                 const std::string& out_path) {
  TaskConfig config = LoadConfigOrDefault(config_path, task);
  const std::vector<int> sample_counts =
      ParseIntList(samples_text, "--samples");
  const std::vector<int> worker_counts =
      ParseIntList(workers_text, "--workers");
  const std::vector<BenchRow> rows = mppi::harness::RunBench(
      config, sample_counts, worker_counts, iterations);
  for (const BenchRow& row : rows) {
    std::printf("n_samples=%d workers=%d median_ms=%.4f p95_ms=%.4f\n",
                row.n_samples, row.workers, row.median_ms, row.p95_ms);
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      throw std::invalid_argument("cannot open output file: " + out_path);
    }
    mppi::harness::WriteBenchCsv(out, rows);
  }
  return kExitOk;
}

int GenlogCommand(const std::string& out_prefix,
                  const mppi::harness::SyntheticLogConfig& log_config) {
  const mppi::harness::SyntheticLog log =
      mppi::harness::GenerateSyntheticLog(log_config);
  const std::string measurements_path = out_prefix + "_measurements.csv";
  const std::string truth_path = out_prefix + "_truth.csv";
  std::ofstream measurements(measurements_path);
  if (!measurements) {
    throw std::invalid_argument("cannot open output file: " +
                                measurements_path);
  }
  mppi::harness::WriteMeasurementCsv(measurements, log.measurements);
  std::ofstream truth(truth_path);
  if (!truth) {
    throw std::invalid_argument("cannot open output file: " + truth_path);
  }
  mppi::harness::WriteTruthCsv(truth, log.truth);
  std::printf("wrote %s (%zu rows) and %s (%lld rows)\n",
              measurements_path.c_str(), log.measurements.size(),
              truth_path.c_str(),
              static_cast<long long>(log.truth.rows()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sampling-based model-predictive control over spline knots, with "
      "built-in contact tasks, parameter sweeps, rollout benchmarks, and "
      "synthetic sensor logs."};
  app.footer(kSchemaFooter);
  app.require_subcommand(1);

  std::string config_path;
  std::string task;
  std::string out_path;
  std::string trace_path;
  std::uint64_t seed = 0;
  std::string seeds_text = "0..9";
  std::string param;
  std::string values_text;
  std::string samples_text = "30";
  std::string workers_text = "1";
  int workers = 0;
  int iterations = 200;

  CLI::App* run = app.add_subcommand("run", "run one closed-loop episode");
  run->add_option("--config", config_path, "YAML config file");
  run->add_option("--task", task,
                  "task name: double_integrator, cartpole, pusher, hopper");
  run->add_option("--seed", seed, "episode seed");
  run->add_option("--out", out_path, "append the episode row to this CSV");
  run->add_option("--trace", trace_path, "write per-step state/control CSV");
  run->add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run one episode per (value, seed) of a planner parameter");
  sweep->add_option("--config", config_path, "YAML config file");
  sweep->add_option("--task", task, "task name");
  sweep->add_option("--param", param,
                    "representation | control_frequency | temperature | "
                    "horizon | num_samples")
      ->required();
  sweep->add_option("--values", values_text, "comma-separated values")
      ->required();
  sweep->add_option("--seeds", seeds_text, "comma list or first..last range");
  sweep->add_option("--out", out_path,
                    "episode CSV path; also writes *_summary.csv");
  sweep->add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI::App* bench = app.add_subcommand(
      "bench", "time rollout batches for sample/worker combinations");
  bench->add_option("--config", config_path, "YAML config file");
  bench->add_option("--task", task, "task name");
  bench->add_option("--samples", samples_text, "comma list of batch sizes");
  bench->add_option("--workers", workers_text, "comma list of worker counts");
  bench->add_option("--iterations", iterations, "timed batches per row");
  bench->add_option("--out", out_path, "bench CSV path");

  mppi::harness::SyntheticLogConfig log_config;
  std::string out_prefix = "synthetic";
  CLI::App* genlog = app.add_subcommand(
      "genlog", "generate a synthetic pose+imu log with ground truth");
  genlog->add_option("--out", out_prefix, "output path prefix");
  genlog->add_option("--seed", log_config.seed, "noise seed");
  genlog->add_option("--duration", log_config.duration_s, "seconds of data");
  genlog->add_option("--pose-rate", log_config.pose_rate_hz, "pose rate, Hz");
  genlog->add_option("--imu-rate", log_config.imu_rate_hz, "imu rate, Hz");
  genlog->add_option("--pose-noise", log_config.pose_noise,
                     "pose noise stddev, m (0 = noise-free)");
  genlog->add_option("--accel-noise", log_config.accel_noise,
                     "accel noise stddev, m/s^2 (0 = noise-free)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return RunCommand(config_path, task, seed, out_path, trace_path,
                        workers);
    }
    if (sweep->parsed()) {
      return SweepCommand(config_path, task, param, values_text, seeds_text,
                          out_path, workers);
    }
    if (bench->parsed()) {
      return BenchCommand(config_path, task, samples_text, workers_text,
                          iterations, out_path);
    }
    if (genlog->parsed()) {
      return GenlogCommand(out_prefix, log_config);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDiverged;
  }
  return kExitOk;
}
