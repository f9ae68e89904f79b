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
#include <fstream>
#include <stdexcept>
#include <thread>

#include "mppi/harness.h"
#include "mppi/rng.h"
#include "mppi/rollout.h"

namespace mppi {
namespace harness {
namespace {

// stream id for measurement noise, distinct from planner sample streams
constexpr std::uint64_t kMeasurementStream = 0x5eed5eed5eed5eedULL;

int ResolveWorkers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// simulator-state success predicates, evaluated after every step
class SuccessTracker {
 public:
  SuccessTracker(const TaskConfig& config, double sim_dt)
      : config_(config),
        hold_steps_(std::max(
            1, static_cast<int>(std::lround(
                   config.success.upright_hold_seconds / sim_dt)))) {}

  bool Step(const Eigen::VectorXd& state) {
    if (config_.task == "double_integrator") {
      const double dist =
          (state.head<2>() - config_.success.goal_position).norm();
      reached_ = reached_ || dist <= config_.success.goal_position_tolerance;
      return reached_;
    }
    if (config_.task == "cartpole") {
      if (std::abs(state(1)) < config_.success.upright_angle_tolerance) {
        ++upright_run_;
      } else {
        upright_run_ = 0;
      }
      reached_ = reached_ || upright_run_ >= hold_steps_;
      return reached_;
    }
    if (config_.task == "pusher") {
      const Eigen::Vector2d box =
          state.segment<2>(PlanarPusherEnv::kBoxPositionIndex);
      reached_ = (box - config_.cost.box_target).norm() <=
                 config_.cost.goal_tolerance;
      return reached_;
    }
    // hopper has no terminal success condition; cost is the metric
    return false;
  }

 private:
  const TaskConfig& config_;
  int hold_steps_;
  int upright_run_ = 0;
  bool reached_ = false;
};

// closed-loop filter fed by synthetic sensors of the double integrator
class InLoopEstimator {
 public:
  InLoopEstimator(const TaskConfig& config, const EnvModel& env,
                  std::uint64_t seed)
      : config_(config.estimator),
        mass_(config.double_integrator.mass),
        force_limit_(config.double_integrator.force_limit),
        noise_(RandomStream::ForSample(seed, kMeasurementStream, 0)) {
    if (config.task != "double_integrator") {
      throw std::invalid_argument(
          "estimator in the loop is only supported for double_integrator");
    }
    const double sim_dt = env.sim_dt();
    imu_per_step_ = std::max(
        1, static_cast<int>(std::lround(config_.imu_rate_hz * sim_dt)));
    pose_every_steps_ = std::max(
        1, static_cast<int>(std::lround(1.0 / (config_.pose_rate_hz *
                                               sim_dt))));
    imu_dt_ = sim_dt / imu_per_step_;

    EkfState initial;
    initial.mean = env.initial_state();
    initial.covariance = Eigen::MatrixXd::Zero(4, 4);
    initial.covariance.diagonal().head<2>().setConstant(
        config_.initial_position_var);
    initial.covariance.diagonal().tail<2>().setConstant(
        config_.initial_velocity_var);
    initial.timestamp = 0.0;
    ekf_ = std::make_unique<MultirateEkf>(DoubleIntegratorEkfModel(config_),
                                          initial);
  }

  // advances the filter across one control step that applied `control` and
  // ended in simulator state `state`
  void Step(int step_index, const Eigen::VectorXd& control,
            const Eigen::VectorXd& state) {
    const Eigen::Vector2d true_accel =
        control.cwiseMax(-force_limit_).cwiseMin(force_limit_) / mass_;
    for (int j = 0; j < imu_per_step_; ++j) {
      Eigen::VectorXd accel(2);
      accel(0) = true_accel(0) + config_.accel_noise * noise_.NextGaussian();
      accel(1) = true_accel(1) + config_.accel_noise * noise_.NextGaussian();
      ekf_->Predict(imu_dt_, &accel);
    }
    if ((step_index + 1) % pose_every_steps_ == 0) {
      Measurement pose;
      pose.kind = Measurement::Kind::kPose;
      pose.timestamp = ekf_->state().timestamp;
      pose.values.resize(2);
      pose.values(0) = state(0) + config_.pose_noise * noise_.NextGaussian();
      pose.values(1) = state(1) + config_.pose_noise * noise_.NextGaussian();
      const double var =
          std::max(config_.pose_noise * config_.pose_noise, 1e-12);
      pose.noise_diag = Eigen::Vector2d::Constant(var);
      ekf_->Update(pose);
    }
  }

  const Eigen::VectorXd& mean() const { return ekf_->state().mean; }

 private:
  EstimatorConfig config_;
  double mass_;
  double force_limit_;
  RandomStream noise_;
  int imu_per_step_ = 1;
  int pose_every_steps_ = 1;
  double imu_dt_ = 0.0;
  std::unique_ptr<MultirateEkf> ekf_;
};

void WriteTraceHeader(std::ofstream& out, int state_dim, int control_dim) {
  out << "step,t";
  for (int i = 0; i < state_dim; ++i) out << ",x" << i;
  for (int i = 0; i < control_dim; ++i) out << ",u" << i;
  out << "\n";
}

void WriteTraceRow(std::ofstream& out, int step, double t,
                   const Eigen::VectorXd& state,
                   const Eigen::VectorXd& control) {
  char buf[40];
  out << step;
  std::snprintf(buf, sizeof(buf), ",%.17g", t);
  out << buf;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    std::snprintf(buf, sizeof(buf), ",%.17g", state(i));
    out << buf;
  }
  for (Eigen::Index i = 0; i < control.size(); ++i) {
    std::snprintf(buf, sizeof(buf), ",%.17g", control(i));
    out << buf;
  }
  out << "\n";
}

}  // namespace

EpisodeReport RunEpisode(const TaskConfig& config, std::uint64_t seed,
                         const std::string& trace_csv_path) {
  std::unique_ptr<EnvModel> env = BuildEnv(config);
  const CostSpec cost = BuildCost(config, *env);
  PlannerConfig planner_config = config.planner;
  planner_config.seed = seed;
  Planner planner(*env, planner_config, cost, ResolveWorkers(config.workers),
                  config.noise_scale);

  std::ofstream trace;
  if (!trace_csv_path.empty()) {
    trace.open(trace_csv_path);
    if (!trace) {
      throw std::invalid_argument("cannot open trace file: " + trace_csv_path);
    }
    WriteTraceHeader(trace, env->state_dim(), env->control_dim());
  }

  std::unique_ptr<InLoopEstimator> estimator;
  if (config.estimator.enabled) {
    estimator = std::make_unique<InLoopEstimator>(config, *env, seed);
  }

  EpisodeReport report;
  report.seed = seed;
  report.task = config.task;
  report.config_hash = ConfigHash(config);

  SuccessTracker tracker(config, env->sim_dt());
  Eigen::VectorXd state = env->initial_state();
  Eigen::VectorXd control = env->nominal_control();
  const bool couple =
      config.task == "pusher" && config.cost.couple_reference_to_box &&
      cost.kind == CostSpec::Kind::kBoxPush;

  double plan_wall_ms = 0.0;
  int plan_count = 0;
  int steps_run = 0;
  for (int step = 0; step < config.episode.steps; ++step) {
    const double t_now = step * env->sim_dt();
    if (step % planner.replan_interval_steps() == 0) {
      const Eigen::VectorXd& planning_state =
          estimator ? estimator->mean() : state;
      if (couple) {
        planner.mutable_cost()->tracking.x_ref.head<2>() =
            planning_state.segment<2>(PlanarPusherEnv::kBoxPositionIndex);
      }
      PlanDiagnostics diagnostics;
      control = planner.PlanStep(planning_state, t_now, &diagnostics);
      plan_wall_ms += diagnostics.wall_time_ms;
      ++plan_count;
    }
    env->Step(state, control, state);
    steps_run = step + 1;
    if (trace.is_open()) {
      WriteTraceRow(trace, step, t_now, state, control);
    }
    if (!state.allFinite()) {
      report.diverged = true;
      report.total_cost += kDivergenceSentinel;
      break;
    }
    report.total_cost += StepCost(planner.cost(), state, control, t_now);
    if (estimator) {
      estimator->Step(step, control, state);
    }
    const bool success_now = tracker.Step(state);
    if (success_now && config.episode.stop_on_success) {
      report.success = true;
      break;
    }
    report.success = success_now;
  }
  report.steps = steps_run;
  report.mean_plan_wall_ms = plan_count > 0 ? plan_wall_ms / plan_count : 0.0;
  return report;
}

}  // namespace harness
}  // namespace mppi
