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

#ifndef KNOTMPPI_MPPI_ENVS_H_
#define KNOTMPPI_MPPI_ENVS_H_

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "mppi/env.h"

namespace mppi {

// All environments integrate with semi-implicit Euler at sim_dt / substeps
// and order their state as (configuration..., velocities...).

// 2-D point mass, control = planar force.
// State: [x, y, vx, vy].
struct DoubleIntegratorParams {
  double mass = 1.0;         // kg
  double force_limit = 10.0;  // N per axis
  double sim_dt = 0.01;
  int substeps = 5;
};

class DoubleIntegratorEnv : public EnvModel {
 public:
  explicit DoubleIntegratorEnv(const DoubleIntegratorParams& params);

  int state_dim() const override { return 4; }
  int control_dim() const override { return 2; }
  const Eigen::VectorXd& control_lower() const override { return lower_; }
  const Eigen::VectorXd& control_upper() const override { return upper_; }
  double sim_dt() const override { return params_.sim_dt; }
  Eigen::VectorXd initial_state() const override;
  void Step(const Eigen::VectorXd& state, const Eigen::VectorXd& target,
            Eigen::VectorXd& next) const override;
  std::unique_ptr<EnvModel> CloneForEvaluation() const override;

 private:
  DoubleIntegratorParams params_;
  Eigen::VectorXd lower_, upper_;
};

// Cart with an unactuated pole, control = cart force. Swing-up testbed.
// State: [cart x, pole angle, cart velocity, pole angular velocity];
// angle 0 is upright and is wrapped to (-pi, pi] after every substep
// (the quadratic angle cost is even, so the wrap point is seamless).
struct CartPoleParams {
  double cart_mass = 1.0;    // kg
  double pole_mass = 0.1;    // kg, point mass at the tip
  double pole_length = 0.5;  // m
  double gravity = 9.81;
  double force_limit = 10.0;  // N
  double sim_dt = 0.01;
  int substeps = 5;
};

class CartPoleEnv : public EnvModel {
 public:
  explicit CartPoleEnv(const CartPoleParams& params);

  int state_dim() const override { return 4; }
  int control_dim() const override { return 1; }
  const Eigen::VectorXd& control_lower() const override { return lower_; }
  const Eigen::VectorXd& control_upper() const override { return upper_; }
  double sim_dt() const override { return params_.sim_dt; }
  Eigen::VectorXd initial_state() const override;  // hanging at rest
  void Step(const Eigen::VectorXd& state, const Eigen::VectorXd& target,
            Eigen::VectorXd& next) const override;
  std::unique_ptr<EnvModel> CloneForEvaluation() const override;

 private:
  CartPoleParams params_;
  Eigen::VectorXd lower_, upper_;
};

// Circular robot pushing a square box on a plane, control = planar force on
// the robot. Robot-box contact and ground friction both go through the
// penalty contact model; ground normals carry each body's weight.
// State: [robot x, robot y, box x, box y, box yaw,
//         robot vx, robot vy, box vx, box vy, box yaw rate].
struct PlanarPusherParams {
  double robot_mass = 2.0;    // kg
  double robot_radius = 0.1;  // m
  double box_mass = 3.5;      // kg
  double box_side = 0.36;     // m
  double gravity = 9.81;
  double ground_friction = 0.3;  // robot-ground and box-ground mu
  ContactParams contact;         // robot-box penalty contact
  double force_limit = 25.0;     // N per axis
  double sim_dt = 0.01;
  int substeps = 5;
  Eigen::Vector2d box_start{1.0, 0.0};  // relative to the robot start
};

class PlanarPusherEnv : public EnvModel {
 public:
  explicit PlanarPusherEnv(const PlanarPusherParams& params);

  int state_dim() const override { return 10; }
  int control_dim() const override { return 2; }
  const Eigen::VectorXd& control_lower() const override { return lower_; }
  const Eigen::VectorXd& control_upper() const override { return upper_; }
  double sim_dt() const override { return params_.sim_dt; }
  Eigen::VectorXd initial_state() const override;
  void Step(const Eigen::VectorXd& state, const Eigen::VectorXd& target,
            Eigen::VectorXd& next) const override;
  std::unique_ptr<EnvModel> CloneForEvaluation() const override;

  static constexpr int kBoxPositionIndex = 2;  // box x, y in the state

 private:
  PlanarPusherParams params_;
  Eigen::VectorXd lower_, upper_;
  double box_inertia_;
  double ground_arm_;  // effective moment arm of rotational ground friction
};

// 1-D vertical hopper: body mass over an actuated prismatic leg with a
// point foot, control = leg length target tracked by a PD loop with
// gravity feedforward on the body weight.
// State: [body height, foot height, body velocity, foot velocity].
struct HopperParams {
  double body_mass = 1.0;  // kg
  double foot_mass = 0.1;  // kg
  double gravity = 9.81;
  double leg_min = 0.2;   // m, control lower bound
  double leg_max = 0.6;   // m, control upper bound
  double rest_length = 0.4;
  PdParams pd;             // leg-length PD, defaulted in the constructor
  ContactParams contact;   // foot-ground
  double sim_dt = 0.01;
  // the light foot under stiff contact oscillates at sqrt(k/m) ~ 450 rad/s;
  // the substep must resolve it or standing decays into chatter
  int substeps = 20;
};

class HopperEnv : public EnvModel {
 public:
  explicit HopperEnv(const HopperParams& params);

  int state_dim() const override { return 4; }
  int control_dim() const override { return 1; }
  const Eigen::VectorXd& control_lower() const override { return lower_; }
  const Eigen::VectorXd& control_upper() const override { return upper_; }
  double sim_dt() const override { return params_.sim_dt; }
  Eigen::VectorXd initial_state() const override;  // standing equilibrium
  void Step(const Eigen::VectorXd& state, const Eigen::VectorXd& target,
            Eigen::VectorXd& next) const override;
  std::unique_ptr<EnvModel> CloneForEvaluation() const override;
  Eigen::VectorXd nominal_control() const override;

 private:
  HopperParams params_;
  Eigen::VectorXd lower_, upper_;
};

// Factory for the built-in environments by task name:
// "double_integrator", "cartpole", "pusher", "hopper".
std::unique_ptr<EnvModel> MakeEnv(const std::string& task, double sim_dt);

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_ENVS_H_
