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

#ifndef KNOTMPPI_MPPI_COST_H_
#define KNOTMPPI_MPPI_COST_H_

#include <functional>

#include <Eigen/Dense>

namespace mppi {

// Quadratic state/control tracking cost with diagonal weights. The control
// reference is time-indexed so a periodic gait target can be tracked.
// Immutable during a rollout batch; u_ref must be a pure function.
struct TrackingCostSpec {
  Eigen::VectorXd q_diag;  // state weights, >= 0
  Eigen::VectorXd r_diag;  // control weights, >= 0
  Eigen::VectorXd x_ref;
  std::function<Eigen::VectorXd(double)> u_ref;
};

// l1 cost on the planar position of a pushed object. Orientation is
// deliberately not penalized.
struct BoxCostSpec {
  double q_box = 0.0;
  Eigen::Vector2d box_target = Eigen::Vector2d::Zero();
  double goal_tolerance = 0.3;  // m, task success radius
  int box_state_index = 0;      // offset of box x, y within the env state
};

// Per-step cost contract used by the rollout engine.
struct CostSpec {
  enum class Kind { kTracking, kBoxPush };
  Kind kind = Kind::kTracking;
  TrackingCostSpec tracking;
  BoxCostSpec box;               // used when kind == kBoxPush
  double terminal_weight = 1.0;  // multiplier on the final step of a rollout
};

// (x_ref - x)' Q (x_ref - x) + (u_ref(t) - u)' R (u_ref(t) - u)
double WalkStepCost(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                    double t, const TrackingCostSpec& spec);

// q_box * |box_target - box_position|_1
double BoxStepCost(const Eigen::Vector2d& box_position,
                   const BoxCostSpec& spec);

// tracking term plus box term
double CompositeStepCost(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         double t, const Eigen::Vector2d& box_position,
                         const CostSpec& spec);

// Dispatcher for rollouts: extracts the box position from the state for
// box-push specs, otherwise evaluates the tracking term alone.
double StepCost(const CostSpec& spec, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, double t);

// Throws std::invalid_argument when the spec does not match the given
// state/control dimensions or has negative weights.
void ValidateCostSpec(const CostSpec& spec, int state_dim, int control_dim);

// constant control reference
std::function<Eigen::VectorXd(double)> MakeConstantReference(
    const Eigen::VectorXd& value);

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_COST_H_
