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

#include "mppi/envs.h"

#include <cmath>
#include <stdexcept>

namespace mppi {

namespace {

void CheckStepInput(const EnvModel& env, const Eigen::VectorXd& state,
                    const Eigen::VectorXd& target) {
  if (state.size() != env.state_dim()) {
    throw std::invalid_argument("state dimension mismatch");
  }
  if (target.size() != env.control_dim()) {
    throw std::invalid_argument("control dimension mismatch");
  }
  if (!state.allFinite()) {
    throw std::invalid_argument("non-finite state");
  }
}

double WrapAngle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;  // (-pi, pi]
}

}  // namespace

// ----------------------------- double integrator ----------------------------

DoubleIntegratorEnv::DoubleIntegratorEnv(const DoubleIntegratorParams& params)
    : params_(params) {
  lower_ = Eigen::VectorXd::Constant(2, -params_.force_limit);
  upper_ = Eigen::VectorXd::Constant(2, params_.force_limit);
}

Eigen::VectorXd DoubleIntegratorEnv::initial_state() const {
  return Eigen::VectorXd::Zero(4);
}

void DoubleIntegratorEnv::Step(const Eigen::VectorXd& state,
                               const Eigen::VectorXd& target,
                               Eigen::VectorXd& next) const {
  CheckStepInput(*this, state, target);
  const double h = params_.sim_dt / params_.substeps;
  double x = state(0), y = state(1), vx = state(2), vy = state(3);
  const double fx = std::clamp(target(0), lower_(0), upper_(0));
  const double fy = std::clamp(target(1), lower_(1), upper_(1));
  for (int s = 0; s < params_.substeps; ++s) {
    vx += h * fx / params_.mass;
    vy += h * fy / params_.mass;
    x += h * vx;
    y += h * vy;
  }
  next.resize(4);
  next << x, y, vx, vy;
}

std::unique_ptr<EnvModel> DoubleIntegratorEnv::CloneForEvaluation() const {
  return std::make_unique<DoubleIntegratorEnv>(*this);
}

// --------------------------------- cartpole ---------------------------------

CartPoleEnv::CartPoleEnv(const CartPoleParams& params) : params_(params) {
  lower_ = Eigen::VectorXd::Constant(1, -params_.force_limit);
  upper_ = Eigen::VectorXd::Constant(1, params_.force_limit);
}

Eigen::VectorXd CartPoleEnv::initial_state() const {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4);
  x0(1) = M_PI;  // hanging
  return x0;
}

void CartPoleEnv::Step(const Eigen::VectorXd& state,
                       const Eigen::VectorXd& target,
                       Eigen::VectorXd& next) const {
  CheckStepInput(*this, state, target);
  const double h = params_.sim_dt / params_.substeps;
  const double mc = params_.cart_mass;
  const double mp = params_.pole_mass;
  const double l = params_.pole_length;
  const double g = params_.gravity;
  const double f = std::clamp(target(0), lower_(0), upper_(0));

  double x = state(0), theta = state(1), xd = state(2), thetad = state(3);
  for (int s = 0; s < params_.substeps; ++s) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    // point-mass pole, angle measured from upright
    const double xdd =
        (f + mp * st * (l * thetad * thetad - g * ct)) / (mc + mp * st * st);
    const double thetadd = (g * st - xdd * ct) / l;
    xd += h * xdd;
    thetad += h * thetadd;
    x += h * xd;
    theta = WrapAngle(theta + h * thetad);
  }
  next.resize(4);
  next << x, theta, xd, thetad;
}

std::unique_ptr<EnvModel> CartPoleEnv::CloneForEvaluation() const {
  return std::make_unique<CartPoleEnv>(*this);
}

// ------------------------------- planar pusher -------------------------------

PlanarPusherEnv::PlanarPusherEnv(const PlanarPusherParams& params)
    : params_(params) {
  lower_ = Eigen::VectorXd::Constant(2, -params_.force_limit);
  upper_ = Eigen::VectorXd::Constant(2, params_.force_limit);
  const double s = params_.box_side;
  box_inertia_ = params_.box_mass * s * s / 6.0;
  // mean center distance of a uniform square footprint
  ground_arm_ = 0.3826 * s;
}

Eigen::VectorXd PlanarPusherEnv::initial_state() const {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(10);
  x0(2) = params_.box_start(0);
  x0(3) = params_.box_start(1);
  return x0;
}

void PlanarPusherEnv::Step(const Eigen::VectorXd& state,
                           const Eigen::VectorXd& target,
                           Eigen::VectorXd& next) const {
  CheckStepInput(*this, state, target);
  const double h = params_.sim_dt / params_.substeps;
  const double half = 0.5 * params_.box_side;

  Eigen::Vector2d rp(state(0), state(1));
  Eigen::Vector2d bp(state(2), state(3));
  double yaw = state(4);
  Eigen::Vector2d rv(state(5), state(6));
  Eigen::Vector2d bv(state(7), state(8));
  double w = state(9);

  const Eigen::Vector2d ctrl(std::clamp(target(0), lower_(0), upper_(0)),
                             std::clamp(target(1), lower_(1), upper_(1)));

  // ground contact parameters share the penalty model, with the ground mu;
  // each body rides at the steady penetration that carries its weight
  ContactParams ground = params_.contact;
  ground.friction_coefficient = params_.ground_friction;
  const double robot_load = params_.robot_mass * params_.gravity;
  const double box_load = params_.box_mass * params_.gravity;
  const double robot_carry = robot_load / ground.stiffness;
  const double box_carry = box_load / ground.stiffness;

  for (int s = 0; s < params_.substeps; ++s) {
    Eigen::Vector2d robot_force = ctrl;
    Eigen::Vector2d box_force = Eigen::Vector2d::Zero();
    double box_torque = 0.0;

    // robot-box contact: circle against the oriented square
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    const Eigen::Vector2d d = rp - bp;
    // robot center in the box frame
    const Eigen::Vector2d p(cy * d.x() + sy * d.y(),
                            -sy * d.x() + cy * d.y());
    Eigen::Vector2d closest(std::clamp(p.x(), -half, half),
                            std::clamp(p.y(), -half, half));
    Eigen::Vector2d normal_box;
    double sdf;
    if (closest == p) {
      // center inside the box: push out through the nearest face
      const double dx = half - std::abs(p.x());
      const double dy = half - std::abs(p.y());
      if (dx < dy) {
        normal_box = Eigen::Vector2d(p.x() >= 0.0 ? 1.0 : -1.0, 0.0);
        closest = Eigen::Vector2d(normal_box.x() * half, p.y());
        sdf = -dx;
      } else {
        normal_box = Eigen::Vector2d(0.0, p.y() >= 0.0 ? 1.0 : -1.0);
        closest = Eigen::Vector2d(p.x(), normal_box.y() * half);
        sdf = -dy;
      }
    } else {
      const Eigen::Vector2d gap = p - closest;
      sdf = gap.norm();
      normal_box = gap / sdf;
    }
    const double penetration = params_.robot_radius - sdf;
    if (penetration > 0.0) {
      // world-frame normal (box surface toward robot) and contact point
      const Eigen::Vector2d n(cy * normal_box.x() - sy * normal_box.y(),
                              sy * normal_box.x() + cy * normal_box.y());
      const Eigen::Vector2d r(cy * closest.x() - sy * closest.y(),
                              sy * closest.x() + cy * closest.y());
      const Eigen::Vector2d box_point_vel(bv.x() - w * r.y(),
                                          bv.y() + w * r.x());
      const Eigen::Vector2d vrel = rv - box_point_vel;
      const Eigen::Vector2d tangent(-n.y(), n.x());
      double fn, ft;
      ContactForce(penetration, vrel.dot(n), vrel.dot(tangent),
                   params_.contact, &fn, &ft);
      const Eigen::Vector2d force = fn * n + ft * tangent;
      robot_force += force;
      box_force -= force;
      box_torque += r.x() * (-force.y()) - r.y() * (-force.x());
    }

    // ground friction, robot then box translation then box rotation
    double gn, gt;
    const double robot_speed = rv.norm();
    ContactForce(robot_carry, 0.0, robot_speed, ground, &gn, &gt);
    if (robot_speed > 0.0) robot_force += gt * rv / robot_speed;

    const double box_speed = bv.norm();
    ContactForce(box_carry, 0.0, box_speed, ground, &gn, &gt);
    if (box_speed > 0.0) box_force += gt * bv / box_speed;

    ContactForce(box_carry, 0.0, std::abs(w) * ground_arm_, ground, &gn, &gt);
    box_torque += gt * ground_arm_ * (w >= 0.0 ? 1.0 : -1.0);

    rv += h * robot_force / params_.robot_mass;
    bv += h * box_force / params_.box_mass;
    w += h * box_torque / box_inertia_;
    rp += h * rv;
    bp += h * bv;
    yaw += h * w;
  }

  next.resize(10);
  next << rp.x(), rp.y(), bp.x(), bp.y(), yaw, rv.x(), rv.y(), bv.x(), bv.y(),
      w;
}

std::unique_ptr<EnvModel> PlanarPusherEnv::CloneForEvaluation() const {
  return std::make_unique<PlanarPusherEnv>(*this);
}

// ---------------------------------- hopper ----------------------------------

HopperEnv::HopperEnv(const HopperParams& params) : params_(params) {
  if (params_.pd.kp.size() == 0) {
    params_.pd.kp = Eigen::VectorXd::Constant(1, 400.0);
    params_.pd.kd = Eigen::VectorXd::Constant(1, 40.0);
    params_.pd.torque_limit = Eigen::VectorXd::Constant(1, 60.0);
  }
  if (params_.contact.damping > 50.0) {
    params_.contact.damping = 50.0;  // keep the light foot substep-stable
  }
  lower_ = Eigen::VectorXd::Constant(1, params_.leg_min);
  upper_ = Eigen::VectorXd::Constant(1, params_.leg_max);
}

Eigen::VectorXd HopperEnv::initial_state() const {
  // standing equilibrium: ground penetration carries the total weight,
  // leg at rest length with the gravity feedforward holding the body
  const double carry = (params_.body_mass + params_.foot_mass) *
                       params_.gravity / params_.contact.stiffness;
  Eigen::VectorXd x0(4);
  x0 << params_.rest_length - carry, -carry, 0.0, 0.0;
  return x0;
}

Eigen::VectorXd HopperEnv::nominal_control() const {
  return Eigen::VectorXd::Constant(1, params_.rest_length);
}

void HopperEnv::Step(const Eigen::VectorXd& state,
                     const Eigen::VectorXd& target,
                     Eigen::VectorXd& next) const {
  CheckStepInput(*this, state, target);
  const double h = params_.sim_dt / params_.substeps;
  const double g = params_.gravity;
  const double kp = params_.pd.kp(0);
  const double kd = params_.pd.kd(0);
  const double fmax = params_.pd.torque_limit(0);
  const double leg_target = std::clamp(target(0), lower_(0), upper_(0));

  double z = state(0), zf = state(1), vz = state(2), vzf = state(3);
  for (int s = 0; s < params_.substeps; ++s) {
    const double leg = z - zf;
    const double leg_rate = vz - vzf;
    // leg actuator: PD on leg length plus body-weight feedforward
    const double fleg = std::clamp(
        kp * (leg_target - leg) - kd * leg_rate + params_.body_mass * g,
        -fmax, fmax);
    double fn, ft;
    ContactForce(-zf, vzf, 0.0, params_.contact, &fn, &ft);
    vz += h * (-g + fleg / params_.body_mass);
    vzf += h * (-g + (-fleg + fn) / params_.foot_mass);
    z += h * vz;
    zf += h * vzf;
  }
  next.resize(4);
  next << z, zf, vz, vzf;
}

std::unique_ptr<EnvModel> HopperEnv::CloneForEvaluation() const {
  return std::make_unique<HopperEnv>(*this);
}

// ---------------------------------- factory ---------------------------------

std::unique_ptr<EnvModel> MakeEnv(const std::string& task, double sim_dt) {
  if (task == "double_integrator") {
    DoubleIntegratorParams p;
    p.sim_dt = sim_dt;
    return std::make_unique<DoubleIntegratorEnv>(p);
  }
  if (task == "cartpole") {
    CartPoleParams p;
    p.sim_dt = sim_dt;
    return std::make_unique<CartPoleEnv>(p);
  }
  if (task == "pusher") {
    PlanarPusherParams p;
    p.sim_dt = sim_dt;
    return std::make_unique<PlanarPusherEnv>(p);
  }
  if (task == "hopper") {
    HopperParams p;
    p.sim_dt = sim_dt;
    return std::make_unique<HopperEnv>(p);
  }
  throw std::invalid_argument("unknown task: " + task);
}

}  // namespace mppi
