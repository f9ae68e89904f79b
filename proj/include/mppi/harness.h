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

#ifndef KNOTMPPI_MPPI_HARNESS_H_
#define KNOTMPPI_MPPI_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mppi/cost.h"
#include "mppi/ekf.h"
#include "mppi/env.h"
#include "mppi/envs.h"
#include "mppi/planner.h"

namespace mppi {
namespace harness {

struct EpisodeConfig {
  int steps = 500;
  // end the episode at the first step whose success predicate holds
  bool stop_on_success = false;
};

// closed-loop state estimation; when enabled the planner consumes the filter
// mean instead of the simulator state
struct EstimatorConfig {
  bool enabled = false;
  double pose_rate_hz = 100.0;
  double imu_rate_hz = 500.0;
  double pose_noise = 0.005;  // stddev per axis, configuration units
  double accel_noise = 0.05;  // stddev per axis, acceleration units
  double accel_noise_density = 1.0;   // process noise fed to the filter
  double initial_position_var = 1e-4;
  double initial_velocity_var = 1e-2;
};

struct CostWeightsConfig {
  // sized to the task at resolve time when left empty
  Eigen::VectorXd q_diag;
  Eigen::VectorXd r_diag;
  Eigen::VectorXd x_ref;
  double terminal_weight = 1.0;
  // box-push term, active when q_box > 0
  double q_box = 0.0;
  Eigen::Vector2d box_target = Eigen::Vector2d(2.0, 0.0);
  double goal_tolerance = 0.3;
  // keep the tracked robot position anchored to the box center, re-read
  // from the estimated state once per plan step
  bool couple_reference_to_box = true;
};

struct SuccessConfig {
  // double integrator: planar distance to goal_position
  Eigen::Vector2d goal_position = Eigen::Vector2d(1.0, 0.0);
  double goal_position_tolerance = 0.05;
  // cartpole: |angle| below tolerance held for hold_seconds
  double upright_angle_tolerance = 0.2;
  double upright_hold_seconds = 1.0;
  // pusher: box center within cost.goal_tolerance of cost.box_target
};

// Fully resolved run configuration for one task. Loaded from YAML with
// strict key checking; unknown keys are an error, missing keys keep the
// task's defaults.
struct TaskConfig {
  std::string task = "cartpole";
  int workers = 0;  // 0 selects the hardware thread count
  PlannerConfig planner;
  Eigen::VectorXd noise_scale;  // empty selects 0.1 * control range
  EpisodeConfig episode;
  CostWeightsConfig cost;
  SuccessConfig success;
  EstimatorConfig estimator;
  // environment parameters; only the struct matching `task` is used
  DoubleIntegratorParams double_integrator;
  CartPoleParams cartpole;
  PlanarPusherParams pusher;
  HopperParams hopper;
  // hopper: track a periodic leg-length reference instead of a constant
  bool use_gait_reference = false;
  GaitParams gait;
};

// task is one of: double_integrator, cartpole, pusher, hopper
TaskConfig DefaultTaskConfig(const std::string& task);

// strict parse: every key must be known and well-formed, otherwise
// std::invalid_argument names the offending key
TaskConfig LoadTaskConfig(const std::string& yaml_path);
TaskConfig ParseTaskConfig(const std::string& yaml_text);

// canonical one-line-per-field dump of every resolved field, used for the
// config hash and for verifying that sweeps change exactly one field
std::string CanonicalConfigString(const TaskConfig& config);

// FNV-1a 64-bit over the canonical string. The episode seed is reported
// separately and never hashed, so every cell of a sweep value shares a hash.
std::uint64_t ConfigHash(const TaskConfig& config);

std::unique_ptr<EnvModel> BuildEnv(const TaskConfig& config);
CostSpec BuildCost(const TaskConfig& config, const EnvModel& env);

struct EpisodeReport {
  std::uint64_t seed = 0;
  std::string task;
  double total_cost = 0.0;
  bool success = false;
  int steps = 0;
  double mean_plan_wall_ms = 0.0;
  std::uint64_t config_hash = 0;
  bool diverged = false;
};

// Runs one closed-loop episode: replan at the configured rate, hold the
// control between replans, accumulate the realized stage cost. A non-finite
// simulator state ends the episode with the divergence sentinel added.
// When trace_csv_path is non-empty, writes one row per step with the state
// and applied control.
EpisodeReport RunEpisode(const TaskConfig& config, std::uint64_t seed,
                         const std::string& trace_csv_path = "");

// parameters accepted by sweeps; each maps to exactly one config field
inline constexpr const char* kSweepParams[] = {
    "representation", "control_frequency", "temperature", "horizon",
    "num_samples"};

// returns a copy of base with `param` set to `value` (parsed per param);
// throws std::invalid_argument for unknown params or malformed values
TaskConfig ApplySweepValue(const TaskConfig& base, const std::string& param,
                           const std::string& value);

struct SweepCell {
  std::string value;
  EpisodeReport report;
};

struct SweepSummaryRow {
  std::string value;
  int runs = 0;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  double success_rate = 0.0;
  double mean_plan_wall_ms = 0.0;
};

struct SweepResult {
  std::string param;
  std::vector<SweepCell> cells;       // values x seeds, value-major
  std::vector<SweepSummaryRow> summary;
};

SweepResult RunSweep(const TaskConfig& base, const std::string& param,
                     const std::vector<std::string>& values,
                     const std::vector<std::uint64_t>& seeds);

// episode CSV schema: seed,task,param_name,param_value,total_cost,success,
// steps,mean_plan_wall_ms (mean_plan_wall_ms is wall-clock time and is the
// only column exempt from byte-identical reruns)
void WriteEpisodeCsvHeader(std::ostream& out);
void WriteEpisodeCsvRow(std::ostream& out, const EpisodeReport& report,
                        const std::string& param_name,
                        const std::string& param_value);

// summary CSV schema: param_name,param_value,runs,mean_cost,std_cost,
// success_rate,mean_plan_wall_ms
void WriteSweepSummaryCsv(std::ostream& out, const SweepResult& result);

struct BenchRow {
  int n_samples = 0;
  int workers = 0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
};

// times RolloutEngine::Run batches of the task's rollouts over >= iterations
// repetitions after a short warmup
std::vector<BenchRow> RunBench(const TaskConfig& config,
                               const std::vector<int>& sample_counts,
                               const std::vector<int>& worker_counts,
                               int iterations = 100);

// bench CSV schema: n_samples,workers,median_ms,p95_ms
void WriteBenchCsv(std::ostream& out, const std::vector<BenchRow>& rows);

// Synthetic sensor log of a known double-integrator trajectory driven by a
// sinusoidal force, for exercising the estimator end to end.
struct SyntheticLogConfig {
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  double pose_rate_hz = 100.0;
  double imu_rate_hz = 500.0;
  double pose_noise = 0.005;  // stddev; zero gives noise-free measurements
  double accel_noise = 0.05;
  double force_amplitude = 2.0;
  double force_frequency_hz = 0.4;
};

struct SyntheticLog {
  // columns: t, x, y, vx, vy, ax, ay; one row per imu tick
  Eigen::MatrixXd truth;
  std::vector<Measurement> measurements;  // time-sorted
};

SyntheticLog GenerateSyntheticLog(const SyntheticLogConfig& config);

// measurement CSV schema: timestamp_s,sensor_type,values... where pose rows
// carry (x, y) and imu rows carry (ax, ay)
void WriteMeasurementCsv(std::ostream& out,
                         const std::vector<Measurement>& measurements);
std::vector<Measurement> ReadMeasurementCsv(std::istream& in,
                                            double pose_noise,
                                            double accel_noise);

// truth CSV schema: t,x,y,vx,vy,ax,ay
void WriteTruthCsv(std::ostream& out, const Eigen::MatrixXd& truth);

// filter model matching the synthetic log and the double integrator task
EkfModelConfig DoubleIntegratorEkfModel(const EstimatorConfig& config);

}  // namespace harness
}  // namespace mppi

#endif  // KNOTMPPI_MPPI_HARNESS_H_
