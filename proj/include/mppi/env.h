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

#ifndef KNOTMPPI_MPPI_ENV_H_
#define KNOTMPPI_MPPI_ENV_H_

#include <memory>

#include <Eigen/Dense>

namespace mppi {

// Joint-space PD tracking parameters. The high-rate low-level loop is
// modeled by applying the PD law at every integrator substep.
struct PdParams {
  Eigen::VectorXd kp;            // N*m/rad or N/m, >= 0
  Eigen::VectorXd kd;            // >= 0
  Eigen::VectorXd torque_limit;  // > 0
  int substeps = 5;
};

// Penalty contact with regularized Coulomb friction.
struct ContactParams {
  double stiffness = 2.0e4;                       // N/m, > 0
  double damping = 100.0;                         // N*s/m, >= 0
  double friction_coefficient = 0.5;              // >= 0
  double friction_regularization_velocity = 0.01;  // m/s, > 0
};

// Periodic joint-target reference: stance at stand_pose, a half-sine swing
// of the given amplitude during each leg's swing window.
struct GaitParams {
  double period = 0.5;       // s, > 0
  double duty_factor = 0.6;  // stance fraction of the period, in (0, 1)
  Eigen::VectorXd amplitude;
  Eigen::VectorXd phase_offsets;  // per leg, cycles
  Eigen::VectorXd stand_pose;
};

// tau = clamp(kp * (target - q) - kd * qd, +/- torque_limit), elementwise
Eigen::VectorXd PdTorque(const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                         const Eigen::VectorXd& target, const PdParams& p);

// Penalty contact force for one contact point.
// penetration > 0 means overlap; normal_velocity > 0 means separating;
// tangent_velocity is the sliding speed along the surface.
// normal = max(0, stiffness * penetration - damping * normal_velocity),
// zero when separated; tangent opposes sliding, saturated at mu * normal.
void ContactForce(double penetration, double normal_velocity,
                  double tangent_velocity, const ContactParams& c,
                  double* normal, double* tangent);

// Joint targets of the gait at time t; exactly periodic in g.period.
Eigen::VectorXd GaitReference(double t, const GaitParams& g);

// Dynamics model contract. step is a deterministic pure function of
// (state, target), so one instance may be read concurrently; rollout
// evaluation still confines each clone to a single worker.
class EnvModel {
 public:
  virtual ~EnvModel() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual const Eigen::VectorXd& control_lower() const = 0;
  virtual const Eigen::VectorXd& control_upper() const = 0;
  virtual double sim_dt() const = 0;

  // reset/start state of the task
  virtual Eigen::VectorXd initial_state() const = 0;

  // Advances one control step of sim_dt (internally substepped). `next` may
  // alias `state`. Throws on non-finite input state.
  virtual void Step(const Eigen::VectorXd& state,
                    const Eigen::VectorXd& target,
                    Eigen::VectorXd& next) const = 0;

  // independent instance for rollout evaluation
  virtual std::unique_ptr<EnvModel> CloneForEvaluation() const = 0;

  // initial planner mean; mid-range unless the model has a better rest pose
  virtual Eigen::VectorXd nominal_control() const {
    return 0.5 * (control_lower() + control_upper());
  }
};

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_ENV_H_
