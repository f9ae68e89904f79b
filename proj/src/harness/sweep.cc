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

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mppi/harness.h"

namespace mppi {
namespace harness {
namespace {

std::string Fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

int ParseInt(const std::string& text, const std::string& param) {
  try {
    size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep " + param + ": bad integer '" + text +
                                "'");
  }
}

double ParseDouble(const std::string& text, const std::string& param) {
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep " + param + ": bad number '" + text +
                                "'");
  }
}

}  // namespace

TaskConfig ApplySweepValue(const TaskConfig& base, const std::string& param,
                           const std::string& value) {
  TaskConfig config = base;
  if (param == "representation") {
    config.planner.order = InterpolationOrderFromString(value);
  } else if (param == "control_frequency") {
    config.planner.update_rate = ParseDouble(value, param);
  } else if (param == "temperature") {
    config.planner.temperature = ParseDouble(value, param);
  } else if (param == "horizon") {
    config.planner.horizon_steps = ParseInt(value, param);
  } else if (param == "num_samples") {
    config.planner.num_samples = ParseInt(value, param);
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + param);
  }
  return config;
}

SweepResult RunSweep(const TaskConfig& base, const std::string& param,
                     const std::vector<std::string>& values,
                     const std::vector<std::uint64_t>& seeds) {
  if (values.empty()) {
    throw std::invalid_argument("sweep: no values");
  }
  if (seeds.empty()) {
    throw std::invalid_argument("sweep: no seeds");
  }
  SweepResult result;
  result.param = param;
  result.cells.reserve(values.size() * seeds.size());
  result.summary.reserve(values.size());
  for (const std::string& value : values) {
    const TaskConfig config = ApplySweepValue(base, param, value);
    SweepSummaryRow row;
    row.value = value;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t seed : seeds) {
      SweepCell cell;
      cell.value = value;
      cell.report = RunEpisode(config, seed);
      sum += cell.report.total_cost;
      sum_sq += cell.report.total_cost * cell.report.total_cost;
      row.success_rate += cell.report.success ? 1.0 : 0.0;
      row.mean_plan_wall_ms += cell.report.mean_plan_wall_ms;
      ++row.runs;
      result.cells.push_back(std::move(cell));
    }
    row.mean_cost = sum / row.runs;
    const double variance =
        std::max(0.0, sum_sq / row.runs - row.mean_cost * row.mean_cost);
    row.std_cost = std::sqrt(variance);
    row.success_rate /= row.runs;
    row.mean_plan_wall_ms /= row.runs;
    result.summary.push_back(std::move(row));
  }
  return result;
}

void WriteEpisodeCsvHeader(std::ostream& out) {
  out << "seed,task,param_name,param_value,total_cost,success,steps,"
         "mean_plan_wall_ms\n";
}

void WriteEpisodeCsvRow(std::ostream& out, const EpisodeReport& report,
                        const std::string& param_name,
                        const std::string& param_value) {
  out << report.seed << ',' << report.task << ',' << param_name << ','
      << param_value << ',' << Fmt(report.total_cost) << ','
      << (report.success ? 1 : 0) << ',' << report.steps << ','
      << Fmt(report.mean_plan_wall_ms) << '\n';
}

void WriteSweepSummaryCsv(std::ostream& out, const SweepResult& result) {
  out << "param_name,param_value,runs,mean_cost,std_cost,success_rate,"
         "mean_plan_wall_ms\n";
  for (const SweepSummaryRow& row : result.summary) {
    out << result.param << ',' << row.value << ',' << row.runs << ','
        << Fmt(row.mean_cost) << ',' << Fmt(row.std_cost) << ','
        << Fmt(row.success_rate) << ',' << Fmt(row.mean_plan_wall_ms) << '\n';
  }
}

void WriteBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n_samples,workers,median_ms,p95_ms\n";
  for (const BenchRow& row : rows) {
    out << row.n_samples << ',' << row.workers << ',' << Fmt(row.median_ms)
        << ',' << Fmt(row.p95_ms) << '\n';
  }
}

}  // namespace harness
}  // namespace mppi
