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

#include "mppi/rollout.h"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mppi {

void Rollout(const EnvModel& env, const Eigen::VectorXd& x0,
             const Eigen::MatrixXd& controls, const CostSpec& cost, double t0,
             RolloutResult* result) {
  const int horizon = static_cast<int>(controls.rows());
  if (horizon < 1) {
    throw std::invalid_argument("Rollout: horizon must be >= 1");
  }
  if (controls.cols() != env.control_dim()) {
    throw std::invalid_argument("Rollout: control dimension mismatch");
  }
  if (x0.size() != env.state_dim()) {
    throw std::invalid_argument("Rollout: state dimension mismatch");
  }
  if (!x0.allFinite() || !controls.allFinite()) {
    throw std::invalid_argument("Rollout: non-finite input");
  }

  result->states.resize(horizon + 1, env.state_dim());
  result->controls = controls;
  result->step_costs.resize(horizon);
  result->states.row(0) = x0;
  result->total_cost = 0.0;
  result->diverged = false;
  result->steps_completed = 0;

  Eigen::VectorXd state = x0;
  Eigen::VectorXd next(env.state_dim());
  Eigen::VectorXd control(env.control_dim());
  for (int k = 0; k < horizon; ++k) {
    control = controls.row(k);
    env.Step(state, control, next);
    double step_cost = std::numeric_limits<double>::quiet_NaN();
    if (next.allFinite()) {
      step_cost = StepCost(cost, next, control, t0 + k * env.sim_dt());
      if (k == horizon - 1) {
        step_cost *= cost.terminal_weight;
      }
    }
    if (!std::isfinite(step_cost)) {
      result->diverged = true;
      for (int j = k; j < horizon; ++j) {
        result->states.row(j + 1) = state;
        result->step_costs(j) = 0.0;
      }
      result->total_cost += kDivergenceSentinel;
      return;
    }
    result->step_costs(k) = step_cost;
    result->total_cost += step_cost;
    result->states.row(k + 1) = next;
    result->steps_completed = k + 1;
    state.swap(next);
  }
}

RolloutEngine::RolloutEngine(const EnvModel& prototype, int max_samples,
                             int workers)
    : workers_(workers < 1 ? 1 : workers) {
  if (max_samples < 1) {
    throw std::invalid_argument("RolloutEngine: max_samples must be >= 1");
  }
  envs_.reserve(max_samples);
  for (int i = 0; i < max_samples; ++i) {
    envs_.push_back(prototype.CloneForEvaluation());
  }
  results_.resize(max_samples);
  if (workers_ > 1) {
    pool_ = std::make_unique<ThreadPool>(workers_);
  }
}

const std::vector<RolloutResult>& RolloutEngine::Run(
    const Eigen::VectorXd& x0, const std::vector<Eigen::MatrixXd>& controls,
    const CostSpec& cost, double t0) {
  const int n = static_cast<int>(controls.size());
  if (n < 1 || n > max_samples()) {
    throw std::invalid_argument("RolloutEngine: batch size out of range");
  }
  // validate once so worker tasks cannot throw off-thread
  ValidateCostSpec(cost, envs_[0]->state_dim(), envs_[0]->control_dim());
  if (x0.size() != envs_[0]->state_dim() || !x0.allFinite()) {
    throw std::invalid_argument("RolloutEngine: bad start state");
  }
  for (const Eigen::MatrixXd& u : controls) {
    if (u.rows() < 1 || u.cols() != envs_[0]->control_dim() ||
        !u.allFinite()) {
      throw std::invalid_argument("RolloutEngine: bad control trajectory");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  if (!pool_) {
    for (int i = 0; i < n; ++i) {
      Rollout(*envs_[i], x0, controls[i], cost, t0, &results_[i]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      pool_->Schedule([this, &x0, &controls, &cost, t0, i] {
        Rollout(*envs_[i], x0, controls[i], cost, t0, &results_[i]);
      });
    }
    pool_->WaitCount(n);
    pool_->ResetCount();
  }
  const auto end = std::chrono::steady_clock::now();
  last_batch_ms_ =
      std::chrono::duration<double, std::milli>(end - start).count();
  return results_;
}

}  // namespace mppi
