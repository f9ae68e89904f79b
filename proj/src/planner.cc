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

#include "mppi/planner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mppi/rng.h"

namespace mppi {
namespace {

// steps between replans at the configured update rate, at least one
int ReplanIntervalSteps(const PlannerConfig& config) {
  const double steps = 1.0 / (config.update_rate * config.sim_dt);
  return std::max(1, static_cast<int>(std::lround(steps)));
}

// knot layout for the sampling distribution: kDirect pins one knot to every
// control step; interpolating orders spread knot_count knots over the full
// horizon duration so the shifted tail stays covered
KnotTrajectory InitialMean(const EnvModel& env, const PlannerConfig& config) {
  if (config.order == InterpolationOrder::kDirect) {
    const double span = (config.horizon_steps - 1) * config.sim_dt;
    return MakeUniformKnotTrajectory(config.horizon_steps, span,
                                     env.nominal_control(), config.order);
  }
  const double span = config.horizon_steps * config.sim_dt;
  return MakeUniformKnotTrajectory(config.knot_count, span,
                                   env.nominal_control(), config.order);
}

}  // namespace

void ValidatePlannerConfig(const PlannerConfig& config) {
  if (config.num_samples < 1) {
    throw std::invalid_argument("PlannerConfig: num_samples must be >= 1");
  }
  if (config.horizon_steps < 1) {
    throw std::invalid_argument("PlannerConfig: horizon_steps must be >= 1");
  }
  if (!(config.sim_dt > 0.0) || !std::isfinite(config.sim_dt)) {
    throw std::invalid_argument("PlannerConfig: sim_dt must be positive");
  }
  if (!(config.temperature > 0.0) || !std::isfinite(config.temperature)) {
    throw std::invalid_argument("PlannerConfig: temperature must be positive");
  }
  if (!(config.update_rate > 0.0) || !std::isfinite(config.update_rate)) {
    throw std::invalid_argument("PlannerConfig: update_rate must be positive");
  }
  if (config.order != InterpolationOrder::kDirect) {
    const int min_knots =
        config.order == InterpolationOrder::kZerothOrder ? 1 : 2;
    if (config.knot_count < min_knots) {
      throw std::invalid_argument("PlannerConfig: knot_count too small for " +
                                  ToString(config.order));
    }
  }
}

int EffectiveKnotCount(const PlannerConfig& config) {
  return config.order == InterpolationOrder::kDirect ? config.horizon_steps
                                                     : config.knot_count;
}

Eigen::VectorXd ComputeWeights(const Eigen::VectorXd& costs,
                               double temperature) {
  if (costs.size() == 0) {
    throw std::invalid_argument("ComputeWeights: empty cost vector");
  }
  if (!costs.allFinite()) {
    throw std::invalid_argument("ComputeWeights: non-finite cost");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("ComputeWeights: temperature must be positive");
  }
  const double min_cost = costs.minCoeff();
  Eigen::VectorXd weights =
      ((min_cost - costs.array()) / temperature).exp().matrix();
  return weights / weights.sum();
}

KnotTrajectory UpdateMean(const std::vector<KnotTrajectory>& samples,
                          const Eigen::VectorXd& weights) {
  if (samples.empty()) {
    throw std::invalid_argument("UpdateMean: no samples");
  }
  if (weights.size() != static_cast<Eigen::Index>(samples.size())) {
    throw std::invalid_argument("UpdateMean: weight count mismatch");
  }
  KnotTrajectory mean = samples[0];
  mean.values = weights(0) * samples[0].values;
  for (size_t n = 1; n < samples.size(); ++n) {
    const KnotTrajectory& sample = samples[n];
    const bool same_layout =
        sample.order == mean.order &&
        sample.times.size() == mean.times.size() &&
        (sample.times.array() == mean.times.array()).all() &&
        sample.values.rows() == mean.values.rows() &&
        sample.values.cols() == mean.values.cols();
    if (!same_layout) {
      throw std::invalid_argument("UpdateMean: samples share one knot layout");
    }
    mean.values += weights(n) * sample.values;
  }
  return mean;
}

void SampleKnots(const SamplingDistribution& dist, const PlannerConfig& config,
                 std::uint64_t iteration, const Eigen::VectorXd& lower,
                 const Eigen::VectorXd& upper,
                 std::vector<KnotTrajectory>* samples) {
  const int knots = dist.mean.knot_count();
  const int dim = dist.mean.control_dim();
  if (dist.noise_scale.size() != dim) {
    throw std::invalid_argument("SampleKnots: noise_scale dimension mismatch");
  }
  if (!dist.noise_scale.allFinite() || (dist.noise_scale.array() < 0.0).any()) {
    throw std::invalid_argument("SampleKnots: noise_scale must be >= 0");
  }
  if (lower.size() != dim || upper.size() != dim) {
    throw std::invalid_argument("SampleKnots: bound dimension mismatch");
  }
  samples->resize(config.num_samples);
  for (int n = 0; n < config.num_samples; ++n) {
    KnotTrajectory& sample = (*samples)[n];
    sample.times = dist.mean.times;
    sample.order = dist.mean.order;
    sample.values.resize(knots, dim);
    if (n == 0 && config.include_mean_sample) {
      sample.values = dist.mean.values;
      continue;
    }
    RandomStream stream = RandomStream::ForSample(config.seed, iteration, n);
    for (int i = 0; i < knots; ++i) {
      for (int j = 0; j < dim; ++j) {
        const double value =
            dist.mean.values(i, j) + dist.noise_scale(j) * stream.NextGaussian();
        sample.values(i, j) = std::clamp(value, lower(j), upper(j));
      }
    }
  }
}

Planner::Planner(const EnvModel& env, const PlannerConfig& config,
                 const CostSpec& cost, int workers,
                 const Eigen::VectorXd& noise_scale)
    : config_(config),
      cost_(cost),
      control_lower_(env.control_lower()),
      control_upper_(env.control_upper()),
      engine_(env, config.num_samples, workers) {
  ValidatePlannerConfig(config_);
  ValidateCostSpec(cost_, env.state_dim(), env.control_dim());
  if (std::abs(env.sim_dt() - config_.sim_dt) > 1e-12) {
    throw std::invalid_argument("Planner: env sim_dt differs from config");
  }
  if (noise_scale.size() == 0) {
    noise_scale_ = 0.1 * (control_upper_ - control_lower_);
  } else if (noise_scale.size() == env.control_dim()) {
    noise_scale_ = noise_scale;
  } else {
    throw std::invalid_argument("Planner: noise_scale dimension mismatch");
  }
  if (!noise_scale_.allFinite() || (noise_scale_.array() < 0.0).any()) {
    throw std::invalid_argument("Planner: noise_scale must be >= 0");
  }
  replan_interval_steps_ = ReplanIntervalSteps(config_);
  replan_period_ = replan_interval_steps_ * config_.sim_dt;
  dist_.mean = InitialMean(env, config_);
  dist_.noise_scale = noise_scale_;
  batch_.costs.resize(config_.num_samples);
  dense_controls_.resize(config_.num_samples);
  for (Eigen::MatrixXd& dense : dense_controls_) {
    dense.resize(config_.horizon_steps, env.control_dim());
  }
}

Eigen::VectorXd Planner::PlanStep(const Eigen::VectorXd& x0, double t_now,
                                  PlanDiagnostics* diagnostics) {
  const auto start = std::chrono::steady_clock::now();
  SampleKnots(dist_, config_, iteration_, control_lower_, control_upper_,
              &batch_.knot_samples);
  for (int n = 0; n < config_.num_samples; ++n) {
    EvaluateDenseInto(batch_.knot_samples[n], 0.0, config_.sim_dt,
                      config_.horizon_steps, dense_controls_[n]);
  }
  const std::vector<RolloutResult>& results =
      engine_.Run(x0, dense_controls_, cost_, t_now);
  for (int n = 0; n < config_.num_samples; ++n) {
    batch_.costs(n) = results[n].total_cost;
  }
  batch_.weights = ComputeWeights(batch_.costs, config_.temperature);
  dist_.mean = UpdateMean(batch_.knot_samples, batch_.weights);
  const Eigen::VectorXd control = Evaluate(dist_.mean, 0.0);
  dist_.mean = Shift(dist_.mean, replan_period_, ShiftFill::kHoldLast);
  ++iteration_;

  if (diagnostics) {
    diagnostics->min_cost = batch_.costs.minCoeff();
    diagnostics->mean_cost = batch_.costs.mean();
    diagnostics->max_cost = batch_.costs.maxCoeff();
    diagnostics->effective_sample_size = 1.0 / batch_.weights.squaredNorm();
    const auto end = std::chrono::steady_clock::now();
    diagnostics->wall_time_ms =
        std::chrono::duration<double, std::milli>(end - start).count();
  }
  return control;
}

void Planner::Reset() {
  dist_.mean = InitialMean(engine_.env(), config_);
  iteration_ = 0;
}

}  // namespace mppi
