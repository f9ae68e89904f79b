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

#include <Eigen/Dense>

#include "gtest/gtest.h"
#include "mppi/rng.h"

namespace mppi {
namespace {

TEST(PdTorqueTest, TracksTargetAndSaturates) {
  PdParams p;
  p.kp = Eigen::VectorXd::Constant(2, 10.0);
  p.kd = Eigen::VectorXd::Constant(2, 1.0);
  p.torque_limit = Eigen::VectorXd::Constant(2, 5.0);
  Eigen::VectorXd q(2), qd(2), target(2);
  q << 0.0, 0.0;
  qd << 0.0, 2.0;
  target << 0.1, 0.0;
  const Eigen::VectorXd tau = PdTorque(q, qd, target, p);
  EXPECT_DOUBLE_EQ(tau(0), 1.0);   // 10 * 0.1
  EXPECT_DOUBLE_EQ(tau(1), -2.0);  // -1 * 2
  target << 10.0, -10.0;
  const Eigen::VectorXd sat = PdTorque(q, qd, target, p);
  EXPECT_DOUBLE_EQ(sat(0), 5.0);
  EXPECT_DOUBLE_EQ(sat(1), -5.0);
}

TEST(ContactForceTest, SeparatedContactIsForceFree) {
  ContactParams c;
  double fn = 99.0, ft = 99.0;
  ContactForce(0.0, -1.0, 2.0, c, &fn, &ft);
  EXPECT_EQ(fn, 0.0);
  EXPECT_EQ(ft, 0.0);
  ContactForce(-0.01, 0.0, 2.0, c, &fn, &ft);
  EXPECT_EQ(fn, 0.0);
  EXPECT_EQ(ft, 0.0);
}

TEST(ContactForceTest, NormalMatchesSpringDamperByHand) {
  ContactParams c;
  c.stiffness = 1000.0;
  c.damping = 10.0;
  double fn, ft;
  ContactForce(0.01, 0.2, 0.0, c, &fn, &ft);
  EXPECT_DOUBLE_EQ(fn, 1000.0 * 0.01 - 10.0 * 0.2);
  // fast separation clamps the normal force at zero
  ContactForce(0.01, 5.0, 0.0, c, &fn, &ft);
  EXPECT_EQ(fn, 0.0);
}

TEST(ContactForceTest, TangentOpposesSlidingAndSaturates) {
  ContactParams c;
  c.stiffness = 1000.0;
  c.damping = 0.0;
  c.friction_coefficient = 0.5;
  c.friction_regularization_velocity = 0.01;
  double fn, ft;
  ContactForce(0.01, 0.0, 1.0, c, &fn, &ft);  // fast slide: saturated
  EXPECT_DOUBLE_EQ(fn, 10.0);
  EXPECT_DOUBLE_EQ(ft, -5.0);
  ContactForce(0.01, 0.0, -1.0, c, &fn, &ft);
  EXPECT_DOUBLE_EQ(ft, 5.0);
  ContactForce(0.01, 0.0, 0.005, c, &fn, &ft);  // inside regularization
  EXPECT_DOUBLE_EQ(ft, -2.5);
  ContactForce(0.01, 0.0, 0.0, c, &fn, &ft);
  EXPECT_EQ(ft, 0.0);
}

// friction-cone property over random inputs: normal force is never
// negative and tangent force never exceeds mu times the normal
TEST(ContactForceTest, RandomInputsRespectTheFrictionCone) {
  RandomStream rng(7);
  ContactParams c;
  for (int i = 0; i < 10000; ++i) {
    c.stiffness = 100.0 + 1e5 * rng.NextUniform();
    c.damping = 200.0 * rng.NextUniform();
    c.friction_coefficient = 2.0 * rng.NextUniform();
    c.friction_regularization_velocity = 1e-4 + rng.NextUniform();
    const double pen = 0.2 * (rng.NextUniform() - 0.3);
    const double vn = 4.0 * rng.NextGaussian();
    const double vt = 4.0 * rng.NextGaussian();
    double fn, ft;
    ContactForce(pen, vn, vt, c, &fn, &ft);
    ASSERT_GE(fn, 0.0);
    ASSERT_LE(std::abs(ft), c.friction_coefficient * fn + 1e-9);
    if (pen <= 0.0) {
      ASSERT_EQ(fn, 0.0);
      ASSERT_EQ(ft, 0.0);
    }
  }
}

TEST(GaitReferenceTest, StanceHoldsPoseAndSwingLiftsIt) {
  GaitParams g;
  g.period = 0.5;
  g.duty_factor = 0.6;
  g.amplitude = Eigen::VectorXd::Constant(1, 0.1);
  g.phase_offsets = Eigen::VectorXd::Zero(1);
  g.stand_pose = Eigen::VectorXd::Constant(1, 0.4);
  // stance window [0, 0.3) of each cycle
  EXPECT_DOUBLE_EQ(GaitReference(0.0, g)(0), 0.4);
  EXPECT_DOUBLE_EQ(GaitReference(0.15, g)(0), 0.4);
  // swing peak at phase 0.8 (middle of [0.6, 1.0))
  EXPECT_NEAR(GaitReference(0.4, g)(0), 0.5, 1e-12);
  // exactly periodic
  for (double t : {0.05, 0.21, 0.37, 0.49}) {
    EXPECT_NEAR(GaitReference(t, g)(0), GaitReference(t + 0.5, g)(0), 1e-12);
    EXPECT_NEAR(GaitReference(t, g)(0), GaitReference(t + 5.0, g)(0), 1e-9);
  }
}

TEST(GaitReferenceTest, PhaseOffsetsShiftLegsIndependently) {
  GaitParams g;
  g.period = 1.0;
  g.duty_factor = 0.5;
  g.amplitude = Eigen::VectorXd::Constant(2, 0.2);
  g.phase_offsets = Eigen::VectorXd::Zero(2);
  g.phase_offsets(1) = 0.5;
  g.stand_pose = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd at_quarter = GaitReference(0.25, g);
  EXPECT_DOUBLE_EQ(at_quarter(0), 0.0);  // leg 0 in stance
  EXPECT_NEAR(at_quarter(1), 0.2, 1e-12);  // leg 1 mid-swing
}

// semi-implicit euler with constant force has the closed form
// v_n = v0 + n h a, x_n = x0 + n h v0 + h^2 a n (n + 1) / 2
TEST(DoubleIntegratorTest, MatchesClosedFormUnderConstantForce) {
  DoubleIntegratorParams p;
  p.mass = 2.0;
  p.substeps = 5;
  p.sim_dt = 0.01;
  DoubleIntegratorEnv env(p);
  Eigen::VectorXd x = env.initial_state();
  Eigen::VectorXd u(2);
  u << 4.0, -2.0;
  env.Step(x, u, x);
  const double h = p.sim_dt / p.substeps;
  const double ax = 4.0 / p.mass;
  const int n = p.substeps;
  EXPECT_NEAR(x(2), n * h * ax, 1e-15);
  EXPECT_NEAR(x(0), h * h * ax * n * (n + 1) / 2.0, 1e-15);
  EXPECT_NEAR(x(3), -0.5 * x(2), 1e-15);
}

TEST(DoubleIntegratorTest, ClampsForceAtTheLimit) {
  DoubleIntegratorParams p;
  DoubleIntegratorEnv env(p);
  Eigen::VectorXd a = env.initial_state();
  Eigen::VectorXd b = env.initial_state();
  Eigen::VectorXd huge(2), at_limit(2);
  huge << 1e6, 0.0;
  at_limit << p.force_limit, 0.0;
  env.Step(a, huge, a);
  env.Step(b, at_limit, b);
  EXPECT_TRUE(a == b);
}

TEST(DoubleIntegratorTest, StepAllowsAliasedOutput) {
  DoubleIntegratorEnv env(DoubleIntegratorParams{});
  Eigen::VectorXd x = env.initial_state();
  Eigen::VectorXd u(2);
  u << 1.0, 1.0;
  Eigen::VectorXd separate(4);
  env.Step(x, u, separate);
  env.Step(x, u, x);  // aliased
  EXPECT_TRUE(x == separate);
}

TEST(DoubleIntegratorTest, ThrowsOnBadInput) {
  DoubleIntegratorEnv env(DoubleIntegratorParams{});
  Eigen::VectorXd x = env.initial_state();
  Eigen::VectorXd u(2);
  u << 1.0, 1.0;
  Eigen::VectorXd out(4);
  Eigen::VectorXd bad_state = x;
  bad_state(0) = std::nan("");
  EXPECT_THROW(env.Step(bad_state, u, out), std::invalid_argument);
  EXPECT_THROW(env.Step(Eigen::VectorXd::Zero(3), u, out),
               std::invalid_argument);
  EXPECT_THROW(env.Step(x, Eigen::VectorXd::Zero(1), out),
               std::invalid_argument);
}

TEST(CartPoleTest, StartsHangingAndStaysPutWithoutForce) {
  CartPoleEnv env(CartPoleParams{});
  Eigen::VectorXd x = env.initial_state();
  EXPECT_DOUBLE_EQ(x(1), M_PI);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  for (int i = 0; i < 100; ++i) env.Step(x, u, x);
  // hanging is an equilibrium
  EXPECT_NEAR(std::abs(x(1)), M_PI, 1e-9);
  EXPECT_NEAR(x(0), 0.0, 1e-9);
}

TEST(CartPoleTest, UprightIsUnstable) {
  CartPoleEnv env(CartPoleParams{});
  Eigen::VectorXd x(4);
  x << 0.0, 1e-4, 0.0, 0.0;  // barely off upright
  Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  double max_angle = 0.0;
  for (int i = 0; i < 200; ++i) {
    env.Step(x, u, x);
    max_angle = std::max(max_angle, std::abs(x(1)));
  }
  EXPECT_GT(max_angle, 0.1);
}

// without input the only forces are gravity; total energy of the
// cart-pole is conserved up to integration error
TEST(CartPoleTest, PassiveSwingApproximatelyConservesEnergy) {
  CartPoleParams p;
  p.substeps = 50;  // fine integration for the energy check
  CartPoleEnv env(p);
  Eigen::VectorXd x(4);
  x << 0.0, 2.0, 0.0, 0.0;
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  auto energy = [&](const Eigen::VectorXd& s) {
    const double xd = s(2), th = s(1), w = s(3);
    // pole tip velocity: (xd + l w cos th, -l w sin th); height l cos th
    const double vx = xd + p.pole_length * w * std::cos(th);
    const double vy = -p.pole_length * w * std::sin(th);
    return 0.5 * p.cart_mass * xd * xd +
           0.5 * p.pole_mass * (vx * vx + vy * vy) +
           p.pole_mass * p.gravity * p.pole_length * std::cos(th);
  };
  const double e0 = energy(x);
  for (int i = 0; i < 100; ++i) env.Step(x, u, x);
  // tolerance is 1% of the swing's energy scale m g l
  EXPECT_NEAR(energy(x), e0, 0.01 * p.pole_mass * p.gravity * p.pole_length);
}

TEST(CartPoleTest, AngleStaysWrapped) {
  CartPoleEnv env(CartPoleParams{});
  Eigen::VectorXd x(4);
  x << 0.0, 3.0, 0.0, 8.0;  // spinning fast
  Eigen::VectorXd u = Eigen::VectorXd::Constant(1, 5.0);
  for (int i = 0; i < 300; ++i) {
    env.Step(x, u, x);
    ASSERT_GT(x(1), -M_PI - 1e-12);
    ASSERT_LE(x(1), M_PI + 1e-12);
  }
}

TEST(PusherTest, RobotAloneDeceleratesUnderGroundFriction) {
  PlanarPusherParams p;
  PlanarPusherEnv env(p);
  Eigen::VectorXd x = env.initial_state();
  x(5) = 1.0;  // robot sliding, far from the box in +x? box is at (1, 0)
  x(1) = 5.0;  // move the robot far away in y instead
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  const double v0 = x(5);
  for (int i = 0; i < 50; ++i) env.Step(x, u, x);
  EXPECT_LT(x(5), v0);
  EXPECT_GT(x(5), 0.0);  // friction cannot reverse the motion
  // box untouched
  EXPECT_DOUBLE_EQ(x(2), 1.0);
  EXPECT_DOUBLE_EQ(x(7), 0.0);
}

TEST(PusherTest, PushingMovesTheBoxForward) {
  PlanarPusherParams p;
  PlanarPusherEnv env(p);
  Eigen::VectorXd x = env.initial_state();
  Eigen::VectorXd u(2);
  u << 20.0, 0.0;
  for (int i = 0; i < 300; ++i) env.Step(x, u, x);
  EXPECT_GT(x(2), 1.05);        // box moved along the push
  EXPECT_NEAR(x(3), 0.0, 0.05);  // head-on push stays straight
  EXPECT_LT(x(0), x(2));        // robot stays behind the box center
  ASSERT_TRUE(x.allFinite());
}

// with ground friction off and no control, robot-box collisions conserve
// linear momentum (the contact applies equal and opposite forces)
TEST(PusherTest, ContactConservesLinearMomentum) {
  PlanarPusherParams p;
  p.ground_friction = 0.0;
  PlanarPusherEnv env(p);
  Eigen::VectorXd x = env.initial_state();
  x(5) = 2.0;  // robot moving toward the box
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  auto momentum = [&](const Eigen::VectorXd& s) {
    return Eigen::Vector2d(p.robot_mass * s(5) + p.box_mass * s(7),
                           p.robot_mass * s(6) + p.box_mass * s(8));
  };
  const Eigen::Vector2d m0 = momentum(x);
  bool contact_happened = false;
  for (int i = 0; i < 400; ++i) {
    env.Step(x, u, x);
    contact_happened = contact_happened || std::abs(x(7)) > 1e-6;
  }
  EXPECT_TRUE(contact_happened);
  const Eigen::Vector2d m1 = momentum(x);
  EXPECT_NEAR(m1(0), m0(0), 1e-6);
  EXPECT_NEAR(m1(1), m0(1), 1e-6);
}

TEST(PusherTest, OffCenterContactSpinsTheBox) {
  PlanarPusherParams p;
  PlanarPusherEnv env(p);
  Eigen::VectorXd x = env.initial_state();
  x(1) = 0.18;  // catch the box edge: slightly above side/2 target line
  Eigen::VectorXd u(2);
  u << 20.0, 0.0;
  for (int i = 0; i < 200; ++i) env.Step(x, u, x);
  EXPECT_GT(std::abs(x(4)), 1e-3);
  ASSERT_TRUE(x.allFinite());
}

TEST(HopperTest, InitialStateIsAnEquilibrium) {
  HopperEnv env(HopperParams{});
  const Eigen::VectorXd x0 = env.initial_state();
  Eigen::VectorXd x = x0;
  const Eigen::VectorXd u = env.nominal_control();
  for (int i = 0; i < 200; ++i) env.Step(x, u, x);
  EXPECT_NEAR(x(0), x0(0), 1e-5);
  EXPECT_NEAR(x(1), x0(1), 1e-5);
  EXPECT_NEAR(x(2), 0.0, 1e-5);
  EXPECT_NEAR(x(3), 0.0, 1e-5);
}

TEST(HopperTest, CrouchAndExtendLaunchesTheBody) {
  HopperEnv env(HopperParams{});
  Eigen::VectorXd x = env.initial_state();
  const double z0 = x(0);
  // crouch, then snap to full extension
  Eigen::VectorXd crouch = Eigen::VectorXd::Constant(1, 0.25);
  Eigen::VectorXd extend = Eigen::VectorXd::Constant(1, 0.6);
  for (int i = 0; i < 60; ++i) env.Step(x, crouch, x);
  double peak_body = x(0);
  double peak_foot = x(1);
  for (int i = 0; i < 150; ++i) {
    env.Step(x, extend, x);
    peak_body = std::max(peak_body, x(0));
    peak_foot = std::max(peak_foot, x(1));
  }
  EXPECT_GT(peak_body, z0 + 0.1);  // the body launched
  EXPECT_GT(peak_foot, 0.01);      // the foot actually left the ground
  ASSERT_TRUE(x.allFinite());
}

// the leg damper and contact damper dissipate a drop; the hopper settles
// back into the same standing equilibrium it started from
TEST(HopperTest, DropSettlesBackToStandingEquilibrium) {
  HopperEnv env(HopperParams{});
  const Eigen::VectorXd x0 = env.initial_state();
  Eigen::VectorXd x = x0;
  x(0) += 0.3;  // drop the whole robot from 0.3 m higher
  x(1) += 0.3;
  const Eigen::VectorXd u = env.nominal_control();
  for (int i = 0; i < 3000; ++i) {
    env.Step(x, u, x);
    ASSERT_TRUE(x.allFinite()) << "step " << i;
  }
  EXPECT_NEAR(x(0), x0(0), 1e-3);
  EXPECT_NEAR(x(1), x0(1), 1e-3);
  EXPECT_NEAR(x(2), 0.0, 1e-4);
  EXPECT_NEAR(x(3), 0.0, 1e-4);
}

TEST(EnvFactoryTest, BuildsEveryTaskAndRejectsUnknown) {
  for (const char* task :
       {"double_integrator", "cartpole", "pusher", "hopper"}) {
    const auto env = MakeEnv(task, 0.01);
    ASSERT_NE(env, nullptr) << task;
    EXPECT_DOUBLE_EQ(env->sim_dt(), 0.01);
    EXPECT_EQ(env->initial_state().size(), env->state_dim());
    EXPECT_EQ(env->control_lower().size(), env->control_dim());
    EXPECT_TRUE(
        (env->control_upper().array() > env->control_lower().array()).all());
    // nominal control is within bounds
    const Eigen::VectorXd nominal = env->nominal_control();
    EXPECT_TRUE((nominal.array() >= env->control_lower().array()).all());
    EXPECT_TRUE((nominal.array() <= env->control_upper().array()).all());
  }
  EXPECT_THROW(MakeEnv("walker", 0.01), std::invalid_argument);
}

TEST(EnvFactoryTest, ClonesStepIdenticallyAndIndependently) {
  for (const char* task :
       {"double_integrator", "cartpole", "pusher", "hopper"}) {
    const auto env = MakeEnv(task, 0.01);
    const auto clone = env->CloneForEvaluation();
    Eigen::VectorXd a = env->initial_state();
    Eigen::VectorXd b = a;
    const Eigen::VectorXd u = env->nominal_control() * 0.9 +
                              env->control_upper() * 0.1;
    for (int i = 0; i < 20; ++i) {
      env->Step(a, u, a);
      clone->Step(b, u, b);
    }
    EXPECT_TRUE(a == b) << task;
  }
}

}  // namespace
}  // namespace mppi
