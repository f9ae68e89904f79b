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

#ifndef KNOTMPPI_MPPI_ROLLOUT_H_
#define KNOTMPPI_MPPI_ROLLOUT_H_

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mppi/cost.h"
#include "mppi/env.h"
#include "mppi/threadpool.h"

namespace mppi {

// cost assigned to a rollout whose dynamics produced a non-finite state,
// added on top of the cost accumulated before the divergence
inline constexpr double kDivergenceSentinel = 1e12;

struct RolloutResult {
  Eigen::MatrixXd states;      // (T + 1) x state_dim, row 0 is the start state
  Eigen::MatrixXd controls;    // T x control_dim, as executed
  Eigen::VectorXd step_costs;  // T entries; step_costs[k] scores (x_{k+1}, u_k)
  double total_cost = 0.0;     // sum of step_costs, plus sentinel if diverged
  bool diverged = false;
  int steps_completed = 0;     // steps with a finite successor state
};

// Simulates `controls` from `x0` and accumulates stage costs. The final
// stage cost is scaled by cost.terminal_weight. On a non-finite state the
// rollout stops, remaining rows hold the last finite state, remaining costs
// are zero, and the sentinel is added. `t0` offsets the time passed to
// time-varying cost references.
void Rollout(const EnvModel& env, const Eigen::VectorXd& x0,
             const Eigen::MatrixXd& controls, const CostSpec& cost, double t0,
             RolloutResult* result);

// Evaluates batches of control trajectories from a shared start state. Owns
// one environment clone per sample slot and a fixed thread pool, both created
// at construction; Run does not allocate per-sample buffers in steady state.
class RolloutEngine {
 public:
  // workers <= 1 runs the batch inline on the calling thread
  RolloutEngine(const EnvModel& prototype, int max_samples, int workers);

  // results are ordered by input index regardless of worker schedule, so the
  // batch output is identical for any worker count; entries past
  // controls.size() hold stale data from earlier batches
  const std::vector<RolloutResult>& Run(
      const Eigen::VectorXd& x0, const std::vector<Eigen::MatrixXd>& controls,
      const CostSpec& cost, double t0 = 0.0);

  int max_samples() const { return static_cast<int>(envs_.size()); }
  int workers() const { return workers_; }
  double last_batch_ms() const { return last_batch_ms_; }
  const EnvModel& env() const { return *envs_[0]; }

 private:
  int workers_;
  std::vector<std::unique_ptr<EnvModel>> envs_;
  std::vector<RolloutResult> results_;
  std::unique_ptr<ThreadPool> pool_;  // null when workers <= 1
  double last_batch_ms_ = 0.0;
};

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_ROLLOUT_H_
