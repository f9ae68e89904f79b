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

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mppi/harness.h"
#include "mppi/planner.h"
#include "mppi/rollout.h"

namespace mppi {
namespace harness {
namespace {

double Quantile(std::vector<double> samples, double q) {
  std::sort(samples.begin(), samples.end());
  const double pos = q * (samples.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

}  // namespace

std::vector<BenchRow> RunBench(const TaskConfig& config,
                               const std::vector<int>& sample_counts,
                               const std::vector<int>& worker_counts,
                               int iterations) {
  if (sample_counts.empty() || worker_counts.empty()) {
    throw std::invalid_argument("bench: empty sample or worker list");
  }
  if (iterations < 1) {
    throw std::invalid_argument("bench: iterations must be >= 1");
  }
  std::unique_ptr<EnvModel> env = BuildEnv(config);
  const CostSpec cost = BuildCost(config, *env);
  const Eigen::VectorXd x0 = env->initial_state();

  // the batch re-evaluates the same sampled control trajectories each
  // iteration, so timing differences come from the engine alone
  std::vector<BenchRow> rows;
  for (int n_samples : sample_counts) {
    if (n_samples < 1) {
      throw std::invalid_argument("bench: sample count must be >= 1");
    }
    PlannerConfig sampler_config = config.planner;
    sampler_config.num_samples = n_samples;
    ValidatePlannerConfig(sampler_config);

    SamplingDistribution dist;
    dist.mean = MakeUniformKnotTrajectory(
        EffectiveKnotCount(sampler_config),
        sampler_config.order == InterpolationOrder::kDirect
            ? (sampler_config.horizon_steps - 1) * sampler_config.sim_dt
            : sampler_config.horizon_steps * sampler_config.sim_dt,
        env->nominal_control(), sampler_config.order);
    dist.noise_scale =
        config.noise_scale.size() > 0
            ? config.noise_scale
            : Eigen::VectorXd(0.1 *
                              (env->control_upper() - env->control_lower()));
    std::vector<KnotTrajectory> knots;
    SampleKnots(dist, sampler_config, 0, env->control_lower(),
                env->control_upper(), &knots);
    std::vector<Eigen::MatrixXd> controls(n_samples);
    for (int i = 0; i < n_samples; ++i) {
      controls[i] = EvaluateDense(knots[i], 0.0, sampler_config.sim_dt,
                                  sampler_config.horizon_steps);
    }

    for (int workers : worker_counts) {
      if (workers < 1) {
        throw std::invalid_argument("bench: worker count must be >= 1");
      }
      RolloutEngine engine(*env, n_samples, workers);
      const int warmup = std::max(3, iterations / 10);
      for (int i = 0; i < warmup; ++i) {
        engine.Run(x0, controls, cost);
      }
      std::vector<double> times;
      times.reserve(iterations);
      for (int i = 0; i < iterations; ++i) {
        engine.Run(x0, controls, cost);
        times.push_back(engine.last_batch_ms());
      }
      BenchRow row;
      row.n_samples = n_samples;
      row.workers = workers;
      row.median_ms = Quantile(times, 0.5);
      row.p95_ms = Quantile(times, 0.95);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace harness
}  // namespace mppi
