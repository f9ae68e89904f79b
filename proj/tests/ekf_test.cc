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

#include "mppi/ekf.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gtest/gtest.h"
#include "mppi/harness.h"

namespace mppi {
namespace {

EkfModelConfig PlanarModel() {
  EkfModelConfig model;
  model.nq = 2;
  model.pose_indices = {0, 1};
  model.accel_indices = {0, 1};
  model.gyro_index = -1;
  model.accel_noise_density = 1.0;
  return model;
}

EkfState UnitState(int nq) {
  EkfState state;
  state.mean = Eigen::VectorXd::Zero(2 * nq);
  state.covariance = Eigen::MatrixXd::Identity(2 * nq, 2 * nq);
  return state;
}

bool IsSpd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(m);
  return eigs.info() == Eigen::Success && eigs.eigenvalues().minCoeff() > 0.0;
}

TEST(EkfModelConfigTest, ValidatesFields) {
  EXPECT_NO_THROW(ValidateEkfModelConfig(PlanarModel()));
  EkfModelConfig bad = PlanarModel();
  bad.nq = 0;
  EXPECT_THROW(ValidateEkfModelConfig(bad), std::invalid_argument);
  bad = PlanarModel();
  bad.pose_indices = {2};
  EXPECT_THROW(ValidateEkfModelConfig(bad), std::invalid_argument);
  bad = PlanarModel();
  bad.accel_indices = {-1};
  EXPECT_THROW(ValidateEkfModelConfig(bad), std::invalid_argument);
  bad = PlanarModel();
  bad.gyro_index = 2;
  EXPECT_THROW(ValidateEkfModelConfig(bad), std::invalid_argument);
  bad = PlanarModel();
  bad.accel_noise_density = 0.0;
  EXPECT_THROW(ValidateEkfModelConfig(bad), std::invalid_argument);
}

TEST(MultirateEkfTest, ConstructorRejectsMalformedStates) {
  const EkfModelConfig model = PlanarModel();
  EXPECT_NO_THROW(MultirateEkf(model, UnitState(2)));
  EkfState bad = UnitState(2);
  bad.mean = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(MultirateEkf(model, bad), std::invalid_argument);
  bad = UnitState(2);
  bad.covariance = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(MultirateEkf(model, bad), std::invalid_argument);
  bad = UnitState(2);
  bad.mean(0) = std::nan("");
  EXPECT_THROW(MultirateEkf(model, bad), std::invalid_argument);
  bad = UnitState(2);
  bad.covariance(1, 1) = -1.0;  // not positive definite
  EXPECT_THROW(MultirateEkf(model, bad), std::runtime_error);
}

TEST(MultirateEkfTest, PredictIntegratesTheMeanByHand) {
  EkfState init = UnitState(2);
  init.mean << 0.0, 0.0, 1.0, 2.0;  // start with velocity (1, 2)
  MultirateEkf filter(PlanarModel(), init);
  filter.Predict(0.1);
  EXPECT_DOUBLE_EQ(filter.state().mean(0), 0.1);
  EXPECT_DOUBLE_EQ(filter.state().mean(1), 0.2);
  EXPECT_DOUBLE_EQ(filter.state().mean(2), 1.0);
  EXPECT_DOUBLE_EQ(filter.state().mean(3), 2.0);
  EXPECT_DOUBLE_EQ(filter.state().timestamp, 0.1);
}

TEST(MultirateEkfTest, PredictAppliesAccelerationAsAnInput) {
  EkfState init = UnitState(2);
  init.mean << 0.0, 0.0, 1.0, 2.0;
  MultirateEkf filter(PlanarModel(), init);
  Eigen::VectorXd accel(2);
  accel << 2.0, -1.0;
  filter.Predict(0.1, &accel);
  // q += v dt + a dt^2 / 2, v += a dt
  EXPECT_NEAR(filter.state().mean(0), 0.1 + 0.5 * 0.01 * 2.0, 1e-15);
  EXPECT_NEAR(filter.state().mean(1), 0.2 - 0.5 * 0.01 * 1.0, 1e-15);
  EXPECT_NEAR(filter.state().mean(2), 1.2, 1e-15);
  EXPECT_NEAR(filter.state().mean(3), 1.9, 1e-15);
  EXPECT_THROW(filter.Predict(0.1, &init.mean), std::invalid_argument);
  EXPECT_THROW(filter.Predict(0.0), std::invalid_argument);
}

// hand-propagated covariance for one axis: with P = I the prediction gives
// qq = 1 + dt^2 + qa dt^4/4 + qc dt, qv = dt + qa dt^3/2, vv = 1 + qa dt^2
TEST(MultirateEkfTest, PredictPropagatesCovarianceByHand) {
  EkfModelConfig model = PlanarModel();
  model.accel_noise_density = 1.0;
  model.config_noise_density = 1e-8;
  MultirateEkf filter(model, UnitState(2));
  const double dt = 0.1;
  filter.Predict(dt);
  const Eigen::MatrixXd& p = filter.state().covariance;
  const double qq = 1.0 + dt * dt + 0.25 * dt * dt * dt * dt + 1e-8 * dt;
  const double qv = dt + 0.5 * dt * dt * dt;
  const double vv = 1.0 + dt * dt;
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(p(i, i), qq, 1e-15) << i;
    EXPECT_NEAR(p(i, 2 + i), qv, 1e-15) << i;
    EXPECT_NEAR(p(2 + i, i), qv, 1e-15) << i;
    EXPECT_NEAR(p(2 + i, 2 + i), vv, 1e-15) << i;
  }
  // off-axis terms stay zero and the matrix stays symmetric
  EXPECT_DOUBLE_EQ(p(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(p(0, 3), 0.0);
  EXPECT_TRUE((p.array() == p.transpose().array()).all());
}

// scalar kalman update with P = I and R = 1 halves the uncertainty and
// moves the mean halfway to the measurement
TEST(MultirateEkfTest, PoseUpdateMatchesTheScalarKalmanFilter) {
  EkfModelConfig model;
  model.nq = 1;
  model.pose_indices = {0};
  MultirateEkf filter(model, UnitState(1));
  Measurement pose;
  pose.kind = Measurement::Kind::kPose;
  pose.timestamp = 0.0;
  pose.values = Eigen::VectorXd::Constant(1, 1.0);
  pose.noise_diag = Eigen::VectorXd::Constant(1, 1.0);
  filter.Update(pose);
  EXPECT_NEAR(filter.state().mean(0), 0.5, 1e-15);
  EXPECT_NEAR(filter.state().mean(1), 0.0, 1e-15);  // velocity untouched
  EXPECT_NEAR(filter.state().covariance(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(filter.state().covariance(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(filter.state().covariance(0, 1), 0.0, 1e-15);
}

TEST(MultirateEkfTest, EncoderUpdateSeesPositionAndVelocity) {
  EkfModelConfig model;
  model.nq = 2;
  model.joint_indices = {1};
  MultirateEkf filter(model, UnitState(2));
  Measurement enc;
  enc.kind = Measurement::Kind::kEncoders;
  enc.values = Eigen::VectorXd::Zero(2);
  enc.values << 2.0, -2.0;  // joint position then joint velocity
  enc.noise_diag = Eigen::VectorXd::Constant(2, 1.0);
  filter.Update(enc);
  EXPECT_NEAR(filter.state().mean(1), 1.0, 1e-15);
  EXPECT_NEAR(filter.state().mean(3), -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(filter.state().mean(0), 0.0);
  EXPECT_DOUBLE_EQ(filter.state().mean(2), 0.0);
}

TEST(MultirateEkfTest, StaleMeasurementsAreDroppedAndCounted) {
  MultirateEkf filter(PlanarModel(), UnitState(2));
  filter.Predict(1.0);
  const Eigen::VectorXd mean_before = filter.state().mean;
  Measurement pose;
  pose.kind = Measurement::Kind::kPose;
  pose.timestamp = 0.5;  // older than the filter time
  pose.values = Eigen::VectorXd::Constant(2, 3.0);
  pose.noise_diag = Eigen::VectorXd::Constant(2, 1e-4);
  filter.Update(pose);
  EXPECT_EQ(filter.dropped_measurements(), 1);
  EXPECT_TRUE((filter.state().mean.array() == mean_before.array()).all());
  EXPECT_DOUBLE_EQ(filter.state().timestamp, 1.0);
  // a current measurement still lands
  pose.timestamp = 1.0;
  filter.Update(pose);
  EXPECT_EQ(filter.dropped_measurements(), 1);
  EXPECT_GT(filter.state().mean(0), 0.0);
}

// with no gyro the imu is a pure prediction input: an imu "update" only
// advances the clock
TEST(MultirateEkfTest, AccelerometerIsNeverAnObservation) {
  MultirateEkf filter(PlanarModel(), UnitState(2));
  Measurement imu;
  imu.kind = Measurement::Kind::kImu;
  imu.timestamp = 0.25;
  imu.values = Eigen::VectorXd::Constant(2, 50.0);
  imu.noise_diag = Eigen::VectorXd::Constant(2, 1e-6);
  filter.Update(imu);
  EXPECT_TRUE((filter.state().mean.array() == 0.0).all());
  EXPECT_TRUE((filter.state().covariance.array() ==
               Eigen::MatrixXd::Identity(4, 4).array())
                  .all());
  EXPECT_DOUBLE_EQ(filter.state().timestamp, 0.25);
  EXPECT_EQ(filter.dropped_measurements(), 0);
}

TEST(MultirateEkfTest, GyroRateIsObservedWhenTheModelHasOne) {
  EkfModelConfig model;
  model.nq = 2;
  model.accel_indices = {0};
  model.gyro_index = 1;
  MultirateEkf filter(model, UnitState(2));
  Measurement imu;
  imu.kind = Measurement::Kind::kImu;
  imu.values = Eigen::VectorXd::Zero(2);
  imu.values << 9.0, 1.0;  // accel channel, then gyro rate
  imu.noise_diag = Eigen::VectorXd::Constant(2, 1.0);
  filter.Update(imu);
  // scalar kalman on velocity entry 1; the accel channel is ignored here
  EXPECT_NEAR(filter.state().mean(3), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(filter.state().mean(0), 0.0);
  EXPECT_DOUBLE_EQ(filter.state().mean(1), 0.0);
  EXPECT_DOUBLE_EQ(filter.state().mean(2), 0.0);
  EXPECT_NEAR(filter.state().covariance(3, 3), 0.5, 1e-15);
}

TEST(MultirateEkfTest, UpdateRejectsMalformedMeasurements) {
  MultirateEkf filter(PlanarModel(), UnitState(2));
  Measurement pose;
  pose.kind = Measurement::Kind::kPose;
  pose.values = Eigen::VectorXd::Zero(2);
  pose.noise_diag = Eigen::VectorXd::Constant(3, 1.0);
  EXPECT_THROW(filter.Update(pose), std::invalid_argument);
  pose.noise_diag = Eigen::VectorXd::Constant(2, 0.0);
  EXPECT_THROW(filter.Update(pose), std::invalid_argument);
  pose.noise_diag = Eigen::VectorXd::Constant(2, 1.0);
  pose.values = Eigen::VectorXd::Constant(3, 1.0);
  EXPECT_THROW(filter.Update(pose), std::invalid_argument);
  pose.values = Eigen::VectorXd::Constant(2, std::nan(""));
  EXPECT_THROW(filter.Update(pose), std::invalid_argument);
}

// long alternation of predictions and near-exact updates must keep the
// covariance symmetric positive definite (joseph form plus re-symmetrizing)
TEST(MultirateEkfTest, CovarianceStaysSpdUnderExtremeNoiseRatios) {
  EkfModelConfig model = PlanarModel();
  model.accel_noise_density = 1e3;
  MultirateEkf filter(model, UnitState(2));
  Measurement pose;
  pose.kind = Measurement::Kind::kPose;
  pose.noise_diag = Eigen::VectorXd::Constant(2, 1e-12);
  for (int k = 0; k < 200; ++k) {
    filter.Predict(0.002);
    pose.timestamp = filter.state().timestamp;
    pose.values = Eigen::VectorXd::Constant(2, std::sin(0.1 * k));
    ASSERT_NO_THROW(filter.Update(pose)) << k;
    ASSERT_TRUE(IsSpd(filter.state().covariance)) << k;
  }
}

TEST(MultirateEkfTest, ConvergesOnAStaticTarget) {
  EkfState init = UnitState(2);
  init.mean << 0.0, 0.0, 0.5, -0.5;  // wrong velocity guess
  MultirateEkf filter(PlanarModel(), init);
  Measurement pose;
  pose.kind = Measurement::Kind::kPose;
  pose.values = Eigen::VectorXd::Zero(2);
  pose.values << 1.5, -0.5;  // true fixed position
  pose.noise_diag = Eigen::VectorXd::Constant(2, 2.5e-5);
  for (int k = 1; k <= 200; ++k) {
    filter.Predict(0.01);
    pose.timestamp = k * 0.01;
    filter.Update(pose);
  }
  EXPECT_NEAR(filter.state().mean(0), 1.5, 1e-2);
  EXPECT_NEAR(filter.state().mean(1), -0.5, 1e-2);
  EXPECT_NEAR(filter.state().mean(2), 0.0, 0.05);
  EXPECT_NEAR(filter.state().mean(3), 0.0, 0.05);
  // position variance collapses well below the prior
  EXPECT_LT(filter.state().covariance(0, 0), 1e-3);
}

TEST(RunMultirateTest, ThrowsNamingTheFirstOutOfOrderIndex) {
  MultirateEkf filter(PlanarModel(), UnitState(2));
  std::vector<Measurement> stream(3);
  for (int i = 0; i < 3; ++i) {
    stream[i].kind = Measurement::Kind::kImu;
    stream[i].values = Eigen::VectorXd::Zero(2);
    stream[i].noise_diag = Eigen::VectorXd::Constant(2, 1.0);
  }
  stream[0].timestamp = 0.1;
  stream[1].timestamp = 0.2;
  stream[2].timestamp = 0.15;
  try {
    filter.RunMultirate(stream);
    FAIL() << "expected std::invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos)
        << e.what();
  }
}

TEST(RunMultirateTest, EmptyStreamReturnsTheInitialStateOnly) {
  MultirateEkf filter(PlanarModel(), UnitState(2));
  const auto states = filter.RunMultirate({});
  ASSERT_EQ(states.size(), 1u);
  EXPECT_TRUE((states[0].mean.array() == 0.0).all());
}

TEST(RunMultirateTest, EmitsTickStatesUpToTheLastMeasurement) {
  MultirateEkf filter(PlanarModel(), UnitState(2));
  std::vector<Measurement> stream;
  Measurement pose;
  pose.kind = Measurement::Kind::kPose;
  pose.values = Eigen::VectorXd::Zero(2);
  pose.noise_diag = Eigen::VectorXd::Constant(2, 1.0);
  for (double t : {0.005, 0.015}) {
    pose.timestamp = t;
    stream.push_back(pose);
  }
  const auto states = filter.RunMultirate(stream, /*tick_rate=*/100.0);
  // initial state plus the 0.01 tick; the 0.015 measurement is applied to
  // the internal state but falls short of the 0.02 tick
  ASSERT_EQ(states.size(), 2u);
  EXPECT_DOUBLE_EQ(states[0].timestamp, 0.0);
  EXPECT_DOUBLE_EQ(states[1].timestamp, 0.01);
  EXPECT_DOUBLE_EQ(filter.state().timestamp, 0.015);
}

// replaying a noise-free synthetic log recovers the logged trajectory
TEST(RunMultirateTest, NoiseFreeLogReplayTracksTheTruth) {
  harness::SyntheticLogConfig log_config;
  log_config.duration_s = 4.0;
  log_config.pose_noise = 0.0;
  log_config.accel_noise = 0.0;
  const harness::SyntheticLog log = harness::GenerateSyntheticLog(log_config);

  harness::EstimatorConfig est;
  EkfState init = UnitState(2);
  init.covariance.topLeftCorner(2, 2) *= est.initial_position_var;
  init.covariance.bottomRightCorner(2, 2) *= est.initial_velocity_var;
  MultirateEkf filter(harness::DoubleIntegratorEkfModel(est), init);
  const auto states = filter.RunMultirate(log.measurements, 500.0);
  ASSERT_EQ(states.size(), static_cast<size_t>(log.truth.rows()));

  double pos_sq = 0.0, vel_sq = 0.0;
  int count = 0;
  for (Eigen::Index k = log.truth.rows() / 2; k < log.truth.rows(); ++k) {
    const Eigen::VectorXd& mean = states[k].mean;
    pos_sq += (mean.head<2>() -
               log.truth.row(k).segment<2>(1).transpose()).squaredNorm();
    vel_sq += (mean.tail<2>() -
               log.truth.row(k).segment<2>(3).transpose()).squaredNorm();
    ++count;
  }
  const double pos_rmse = std::sqrt(pos_sq / count);
  const double vel_rmse = std::sqrt(vel_sq / count);
  EXPECT_LT(pos_rmse, 1e-3);
  EXPECT_LT(vel_rmse, 0.02);
}

}  // namespace
}  // namespace mppi
