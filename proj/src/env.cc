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

#include "mppi/env.h"

#include <cmath>
#include <stdexcept>

namespace mppi {

Eigen::VectorXd PdTorque(const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                         const Eigen::VectorXd& target, const PdParams& p) {
  if (q.size() != qd.size() || q.size() != target.size() ||
      q.size() != p.kp.size() || q.size() != p.kd.size() ||
      q.size() != p.torque_limit.size()) {
    throw std::invalid_argument("pd torque dimension mismatch");
  }
  Eigen::VectorXd tau =
      p.kp.cwiseProduct(target - q) - p.kd.cwiseProduct(qd);
  return tau.cwiseMax(-p.torque_limit).cwiseMin(p.torque_limit);
}

void ContactForce(double penetration, double normal_velocity,
                  double tangent_velocity, const ContactParams& c,
                  double* normal, double* tangent) {
  if (penetration <= 0.0) {
    *normal = 0.0;
    *tangent = 0.0;
    return;
  }
  *normal = std::max(
      0.0, c.stiffness * penetration - c.damping * normal_velocity);
  const double slip = std::clamp(
      tangent_velocity / c.friction_regularization_velocity, -1.0, 1.0);
  *tangent = -c.friction_coefficient * (*normal) * slip;
}

Eigen::VectorXd GaitReference(double t, const GaitParams& g) {
  if (g.period <= 0.0) {
    throw std::invalid_argument("gait period must be positive");
  }
  if (g.duty_factor <= 0.0 || g.duty_factor >= 1.0) {
    throw std::invalid_argument("gait duty factor must be in (0, 1)");
  }
  const int n = static_cast<int>(g.stand_pose.size());
  if (g.amplitude.size() != n || g.phase_offsets.size() != n) {
    throw std::invalid_argument("gait parameter dimension mismatch");
  }
  Eigen::VectorXd target = g.stand_pose;
  const double swing_fraction = 1.0 - g.duty_factor;
  for (int i = 0; i < n; ++i) {
    double phase = t / g.period + g.phase_offsets(i);
    phase -= std::floor(phase);  // wrap to [0, 1)
    if (phase >= g.duty_factor) {
      // half-sine bump over the swing window, zero at both edges
      const double s = (phase - g.duty_factor) / swing_fraction;
      target(i) += g.amplitude(i) * std::sin(M_PI * s);
    }
  }
  return target;
}

}  // namespace mppi
