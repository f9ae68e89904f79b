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

#include "mppi/cost.h"

#include <stdexcept>

namespace mppi {

double WalkStepCost(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                    double t, const TrackingCostSpec& spec) {
  if (x.size() != spec.x_ref.size() || x.size() != spec.q_diag.size()) {
    throw std::invalid_argument("tracking cost state dimension mismatch");
  }
  if (u.size() != spec.r_diag.size()) {
    throw std::invalid_argument("tracking cost control dimension mismatch");
  }
  double cost = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double e = spec.x_ref(i) - x(i);
    cost += spec.q_diag(i) * e * e;
  }
  if (spec.u_ref) {
    const Eigen::VectorXd uref = spec.u_ref(t);
    if (uref.size() != u.size()) {
      throw std::invalid_argument("control reference dimension mismatch");
    }
    for (int i = 0; i < u.size(); ++i) {
      const double e = uref(i) - u(i);
      cost += spec.r_diag(i) * e * e;
    }
  } else {
    for (int i = 0; i < u.size(); ++i) {
      cost += spec.r_diag(i) * u(i) * u(i);
    }
  }
  return cost;
}

double BoxStepCost(const Eigen::Vector2d& box_position,
                   const BoxCostSpec& spec) {
  return spec.q_box * (spec.box_target - box_position).lpNorm<1>();
}

double CompositeStepCost(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         double t, const Eigen::Vector2d& box_position,
                         const CostSpec& spec) {
  if (spec.kind != CostSpec::Kind::kBoxPush) {
    throw std::invalid_argument("composite cost requires a box-push spec");
  }
  return WalkStepCost(x, u, t, spec.tracking) +
         BoxStepCost(box_position, spec.box);
}

double StepCost(const CostSpec& spec, const Eigen::VectorXd& x,
                const Eigen::VectorXd& u, double t) {
  if (spec.kind == CostSpec::Kind::kBoxPush) {
    const Eigen::Vector2d box_position(x(spec.box.box_state_index),
                                       x(spec.box.box_state_index + 1));
    return CompositeStepCost(x, u, t, box_position, spec);
  }
  return WalkStepCost(x, u, t, spec.tracking);
}

void ValidateCostSpec(const CostSpec& spec, int state_dim, int control_dim) {
  if (spec.tracking.q_diag.size() != state_dim ||
      spec.tracking.x_ref.size() != state_dim) {
    throw std::invalid_argument("cost q_diag/x_ref must match state_dim");
  }
  if (spec.tracking.r_diag.size() != control_dim) {
    throw std::invalid_argument("cost r_diag must match control_dim");
  }
  if ((spec.tracking.q_diag.array() < 0.0).any() ||
      (spec.tracking.r_diag.array() < 0.0).any()) {
    throw std::invalid_argument("cost weights must be non-negative");
  }
  if (spec.terminal_weight < 0.0) {
    throw std::invalid_argument("terminal weight must be non-negative");
  }
  if (spec.kind == CostSpec::Kind::kBoxPush) {
    if (spec.box.q_box < 0.0) {
      throw std::invalid_argument("q_box must be non-negative");
    }
    if (spec.box.goal_tolerance <= 0.0) {
      throw std::invalid_argument("goal tolerance must be positive");
    }
    if (spec.box.box_state_index < 0 ||
        spec.box.box_state_index + 1 >= state_dim) {
      throw std::invalid_argument("box state index out of range");
    }
  }
}

std::function<Eigen::VectorXd(double)> MakeConstantReference(
    const Eigen::VectorXd& value) {
  return [value](double) { return value; };
}

}  // namespace mppi
