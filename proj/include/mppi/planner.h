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

#ifndef KNOTMPPI_MPPI_PLANNER_H_
#define KNOTMPPI_MPPI_PLANNER_H_

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mppi/cost.h"
#include "mppi/env.h"
#include "mppi/rollout.h"
#include "mppi/spline.h"

namespace mppi {

struct PlannerConfig {
  int num_samples = 30;
  int horizon_steps = 40;
  double sim_dt = 0.01;
  double temperature = 0.1;
  int knot_count = 4;
  InterpolationOrder order = InterpolationOrder::kCubic;
  std::uint64_t seed = 0;
  // when true, sample 0 is the unperturbed mean, guaranteeing the update
  // never regresses below the current plan at the cost of one sample
  bool include_mean_sample = false;
  // replans per second; the mean is shifted by one replan period each step
  double update_rate = 100.0;
};

// throws std::invalid_argument on out-of-range fields; knot_count is
// ignored for kDirect, which always uses one knot per control step
void ValidatePlannerConfig(const PlannerConfig& config);

// effective knot count: horizon_steps for kDirect, knot_count otherwise
int EffectiveKnotCount(const PlannerConfig& config);

struct SamplingDistribution {
  KnotTrajectory mean;
  Eigen::VectorXd noise_scale;  // per control dimension, standard deviation
};

// per-sample knot values, rollout costs, and importance weights for one
// planner iteration
struct RolloutBatch {
  std::vector<KnotTrajectory> knot_samples;
  Eigen::VectorXd costs;
  Eigen::VectorXd weights;
};

struct PlanDiagnostics {
  double min_cost = 0.0;
  double mean_cost = 0.0;
  double max_cost = 0.0;
  // 1 / sum(w^2), in [1, num_samples]; low values signal a collapsed batch
  double effective_sample_size = 0.0;
  double wall_time_ms = 0.0;
};

// softmax of negated costs: w_n proportional to exp(-(cost_n - min) /
// temperature). Invariant under adding a constant to all costs; never
// overflows because the exponent is <= 0.
Eigen::VectorXd ComputeWeights(const Eigen::VectorXd& costs,
                               double temperature);

// weighted sum of sample knot values; weights must sum to ~1
KnotTrajectory UpdateMean(const std::vector<KnotTrajectory>& samples,
                          const Eigen::VectorXd& weights);

// Draws `config.num_samples` knot trajectories around dist.mean with
// independent per-dimension Gaussian noise, clamped to [lower, upper].
// Sample n uses the counter-based stream (seed, iteration, n), so the batch
// is identical regardless of execution order or platform. Reuses the
// capacity of `samples` across calls.
void SampleKnots(const SamplingDistribution& dist, const PlannerConfig& config,
                 std::uint64_t iteration, const Eigen::VectorXd& lower,
                 const Eigen::VectorXd& upper,
                 std::vector<KnotTrajectory>* samples);

// Receding-horizon sampling planner over spline knots. Environment clones
// and the worker pool are created once at construction; PlanStep performs no
// steady-state allocation beyond the first iteration.
class Planner {
 public:
  // noise_scale empty selects 0.1 * (control_upper - control_lower)
  Planner(const EnvModel& env, const PlannerConfig& config,
          const CostSpec& cost, int workers,
          const Eigen::VectorXd& noise_scale = Eigen::VectorXd());

  // One plan iteration: sample knots, roll out, reweight, update the mean,
  // then shift it by one replan period. Returns the control for `x0` now.
  Eigen::VectorXd PlanStep(const Eigen::VectorXd& x0, double t_now = 0.0,
                           PlanDiagnostics* diagnostics = nullptr);

  // resets the mean to the nominal control and the iteration counter to 0
  void Reset();

  const PlannerConfig& config() const { return config_; }
  const SamplingDistribution& distribution() const { return dist_; }
  const RolloutBatch& last_batch() const { return batch_; }
  const RolloutEngine& engine() const { return engine_; }
  std::uint64_t iteration() const { return iteration_; }
  double replan_period() const { return replan_period_; }
  int replan_interval_steps() const { return replan_interval_steps_; }

  // cost is owned by the planner; mutable access supports references that
  // are re-anchored between plan steps (e.g. a goal tracking a moving body)
  const CostSpec& cost() const { return cost_; }
  CostSpec* mutable_cost() { return &cost_; }

 private:
  PlannerConfig config_;
  CostSpec cost_;
  Eigen::VectorXd noise_scale_;
  Eigen::VectorXd control_lower_;
  Eigen::VectorXd control_upper_;
  double replan_period_ = 0.0;
  int replan_interval_steps_ = 1;
  SamplingDistribution dist_;
  RolloutBatch batch_;
  std::vector<Eigen::MatrixXd> dense_controls_;
  RolloutEngine engine_;
  std::uint64_t iteration_ = 0;
};

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_PLANNER_H_
