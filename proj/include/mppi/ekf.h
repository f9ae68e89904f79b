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

#ifndef KNOTMPPI_MPPI_EKF_H_
#define KNOTMPPI_MPPI_EKF_H_

#include <vector>

#include <Eigen/Dense>

namespace mppi {

// Observation model over a [configuration; velocity] state of size 2 * nq,
// where velocity i is the time derivative of configuration i.
struct EkfModelConfig {
  int nq = 0;
  std::vector<int> pose_indices;   // configuration entries seen by kPose
  std::vector<int> joint_indices;  // configuration entries seen by kEncoders
  std::vector<int> accel_indices;  // velocity entries driven by IMU accel
  int gyro_index = -1;             // velocity entry seen by the IMU gyro,
                                   // or -1 when the model has no gyro
  double accel_noise_density = 1.0;   // white-acceleration process noise
  double config_noise_density = 1e-8; // configuration random-walk floor
};

void ValidateEkfModelConfig(const EkfModelConfig& config);

struct EkfState {
  Eigen::VectorXd mean;        // [configuration; velocity], size 2 * nq
  Eigen::MatrixXd covariance;  // symmetric positive definite
  double timestamp = 0.0;
};

struct Measurement {
  enum class Kind { kPose, kImu, kEncoders };

  Kind kind = Kind::kPose;
  double timestamp = 0.0;
  // kPose: one value per pose index. kImu: accelerations for each accel
  // index, then the gyro rate if the model has one. kEncoders: joint
  // positions, then joint velocities.
  Eigen::VectorXd values;
  Eigen::VectorXd noise_diag;  // measurement variance per value
};

// Kalman filter with constant-velocity prediction, IMU acceleration as a
// prediction input, and Joseph-form updates. The IMU's accelerometer is
// never treated as an observation; only its gyro channel is.
class MultirateEkf {
 public:
  MultirateEkf(const EkfModelConfig& model, const EkfState& initial);

  // Advances mean and covariance by dt > 0. When accel is given it must
  // have one entry per accel index and is integrated into the matching
  // velocity (and configuration) entries.
  void Predict(double dt, const Eigen::VectorXd* accel = nullptr);

  // Joseph-form measurement update with covariance re-symmetrization.
  // Measurements older than the filter time are dropped and counted rather
  // than applied. Throws std::runtime_error if the innovation covariance is
  // singular or the posterior covariance loses positive definiteness.
  void Update(const Measurement& measurement);

  // Replays a time-sorted measurement stream, holding the latest IMU
  // acceleration between predictions, and returns the filter state at every
  // 1 / tick_rate boundary after the initial timestamp (initial state
  // first). Throws std::invalid_argument naming the first out-of-order
  // stream index.
  std::vector<EkfState> RunMultirate(const std::vector<Measurement>& stream,
                                     double tick_rate = 500.0);

  const EkfState& state() const { return state_; }
  const EkfModelConfig& model() const { return model_; }
  int dropped_measurements() const { return dropped_; }

 private:
  void ApplyUpdate(const Eigen::MatrixXd& jacobian,
                   const Eigen::VectorXd& innovation,
                   const Eigen::VectorXd& noise_diag);
  void CheckCovariance(const char* where) const;

  EkfModelConfig model_;
  EkfState state_;
  int dropped_ = 0;
};

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_EKF_H_
