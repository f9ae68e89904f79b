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
#include <string>

namespace mppi {
namespace {

// timestamps within this window of the filter time are treated as current
constexpr double kStaleTolerance = 1e-9;

void CheckIndices(const std::vector<int>& indices, int limit,
                  const char* name) {
  for (int idx : indices) {
    if (idx < 0 || idx >= limit) {
      throw std::invalid_argument(std::string("EkfModelConfig: ") + name +
                                  " index out of range");
    }
  }
}

}  // namespace

void ValidateEkfModelConfig(const EkfModelConfig& config) {
  if (config.nq < 1) {
    throw std::invalid_argument("EkfModelConfig: nq must be >= 1");
  }
  CheckIndices(config.pose_indices, config.nq, "pose");
  CheckIndices(config.joint_indices, config.nq, "joint");
  CheckIndices(config.accel_indices, config.nq, "accel");
  if (config.gyro_index < -1 || config.gyro_index >= config.nq) {
    throw std::invalid_argument("EkfModelConfig: gyro index out of range");
  }
  if (!(config.accel_noise_density > 0.0) ||
      !(config.config_noise_density >= 0.0)) {
    throw std::invalid_argument("EkfModelConfig: noise densities must be > 0");
  }
}

MultirateEkf::MultirateEkf(const EkfModelConfig& model, const EkfState& initial)
    : model_(model), state_(initial) {
  ValidateEkfModelConfig(model_);
  const int n = 2 * model_.nq;
  if (state_.mean.size() != n || state_.covariance.rows() != n ||
      state_.covariance.cols() != n) {
    throw std::invalid_argument("MultirateEkf: state dimension mismatch");
  }
  if (!state_.mean.allFinite() || !state_.covariance.allFinite()) {
    throw std::invalid_argument("MultirateEkf: non-finite initial state");
  }
  CheckCovariance("initial covariance");
}

void MultirateEkf::Predict(double dt, const Eigen::VectorXd* accel) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("Predict: dt must be positive");
  }
  const int nq = model_.nq;
  if (accel) {
    if (accel->size() != static_cast<Eigen::Index>(model_.accel_indices.size())) {
      throw std::invalid_argument("Predict: accel dimension mismatch");
    }
    if (!accel->allFinite()) {
      throw std::invalid_argument("Predict: non-finite accel");
    }
  }

  // mean: q += v dt (+ 1/2 a dt^2), v += a dt
  state_.mean.head(nq) += dt * state_.mean.tail(nq);
  if (accel) {
    for (size_t k = 0; k < model_.accel_indices.size(); ++k) {
      const int i = model_.accel_indices[k];
      const double a = (*accel)(static_cast<Eigen::Index>(k));
      state_.mean(i) += 0.5 * dt * dt * a;
      state_.mean(nq + i) += dt * a;
    }
  }

  // covariance: P = F P F^T + Q with F = [[I, dt I], [0, I]] and
  // white-acceleration process noise on every axis
  const auto qq = state_.covariance.topLeftCorner(nq, nq);
  const auto qv = state_.covariance.topRightCorner(nq, nq);
  const auto vq = state_.covariance.bottomLeftCorner(nq, nq);
  const auto vv = state_.covariance.bottomRightCorner(nq, nq);
  Eigen::MatrixXd new_qq = qq + dt * (qv + vq) + dt * dt * vv;
  Eigen::MatrixXd new_qv = qv + dt * vv;
  state_.covariance.topLeftCorner(nq, nq) = new_qq;
  state_.covariance.topRightCorner(nq, nq) = new_qv;
  state_.covariance.bottomLeftCorner(nq, nq) = new_qv.transpose();

  const double qa = model_.accel_noise_density;
  const double qc = model_.config_noise_density;
  for (int i = 0; i < nq; ++i) {
    state_.covariance(i, i) += qa * dt * dt * dt * dt / 4.0 + qc * dt;
    state_.covariance(i, nq + i) += qa * dt * dt * dt / 2.0;
    state_.covariance(nq + i, i) += qa * dt * dt * dt / 2.0;
    state_.covariance(nq + i, nq + i) += qa * dt * dt;
  }
  state_.covariance = 0.5 * (state_.covariance +
                             state_.covariance.transpose()).eval();
  state_.timestamp += dt;
  CheckCovariance("predict");
}

void MultirateEkf::Update(const Measurement& measurement) {
  if (measurement.timestamp < state_.timestamp - kStaleTolerance) {
    ++dropped_;
    return;
  }
  if (measurement.values.size() != measurement.noise_diag.size()) {
    throw std::invalid_argument("Update: values and noise_diag sizes differ");
  }
  if (!measurement.values.allFinite() ||
      !measurement.noise_diag.allFinite() ||
      (measurement.noise_diag.array() <= 0.0).any()) {
    throw std::invalid_argument("Update: bad measurement values or noise");
  }

  const int nq = model_.nq;
  const int n = 2 * nq;
  int rows = 0;
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd predicted;
  Eigen::VectorXd observed;
  Eigen::VectorXd noise;

  switch (measurement.kind) {
    case Measurement::Kind::kPose: {
      rows = static_cast<int>(model_.pose_indices.size());
      if (measurement.values.size() != rows) {
        throw std::invalid_argument("Update: pose measurement size mismatch");
      }
      jacobian = Eigen::MatrixXd::Zero(rows, n);
      predicted.resize(rows);
      for (int r = 0; r < rows; ++r) {
        jacobian(r, model_.pose_indices[r]) = 1.0;
        predicted(r) = state_.mean(model_.pose_indices[r]);
      }
      observed = measurement.values;
      noise = measurement.noise_diag;
      break;
    }
    case Measurement::Kind::kEncoders: {
      const int nj = static_cast<int>(model_.joint_indices.size());
      rows = 2 * nj;
      if (measurement.values.size() != rows) {
        throw std::invalid_argument(
            "Update: encoder measurement size mismatch");
      }
      jacobian = Eigen::MatrixXd::Zero(rows, n);
      predicted.resize(rows);
      for (int r = 0; r < nj; ++r) {
        jacobian(r, model_.joint_indices[r]) = 1.0;
        jacobian(nj + r, nq + model_.joint_indices[r]) = 1.0;
        predicted(r) = state_.mean(model_.joint_indices[r]);
        predicted(nj + r) = state_.mean(nq + model_.joint_indices[r]);
      }
      observed = measurement.values;
      noise = measurement.noise_diag;
      break;
    }
    case Measurement::Kind::kImu: {
      // acceleration channels feed Predict, not the update; only the gyro
      // rate is an observation
      const int na = static_cast<int>(model_.accel_indices.size());
      const int expected = na + (model_.gyro_index >= 0 ? 1 : 0);
      if (measurement.values.size() != expected) {
        throw std::invalid_argument("Update: imu measurement size mismatch");
      }
      if (model_.gyro_index < 0) {
        state_.timestamp = std::max(state_.timestamp, measurement.timestamp);
        return;
      }
      rows = 1;
      jacobian = Eigen::MatrixXd::Zero(1, n);
      jacobian(0, nq + model_.gyro_index) = 1.0;
      predicted.resize(1);
      predicted(0) = state_.mean(nq + model_.gyro_index);
      observed = measurement.values.tail(1);
      noise = measurement.noise_diag.tail(1);
      break;
    }
  }

  ApplyUpdate(jacobian, observed - predicted, noise);
  state_.timestamp = std::max(state_.timestamp, measurement.timestamp);
}

void MultirateEkf::ApplyUpdate(const Eigen::MatrixXd& jacobian,
                               const Eigen::VectorXd& innovation,
                               const Eigen::VectorXd& noise_diag) {
  const int n = static_cast<int>(state_.mean.size());
  const Eigen::MatrixXd ph_t = state_.covariance * jacobian.transpose();
  Eigen::MatrixXd innovation_cov = jacobian * ph_t;
  innovation_cov.diagonal() += noise_diag;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(innovation_cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::runtime_error("Update: singular innovation covariance");
  }
  const Eigen::MatrixXd gain = ldlt.solve(ph_t.transpose()).transpose();

  state_.mean += gain * innovation;
  const Eigen::MatrixXd identity_minus_kh =
      Eigen::MatrixXd::Identity(n, n) - gain * jacobian;
  state_.covariance = identity_minus_kh * state_.covariance *
                          identity_minus_kh.transpose() +
                      gain * noise_diag.asDiagonal() * gain.transpose();
  state_.covariance = 0.5 * (state_.covariance +
                             state_.covariance.transpose()).eval();
  CheckCovariance("update");
}

void MultirateEkf::CheckCovariance(const char* where) const {
  if (!state_.covariance.allFinite()) {
    throw std::runtime_error(std::string("covariance non-finite after ") +
                             where);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(state_.covariance);
  if (eigs.info() != Eigen::Success ||
      eigs.eigenvalues().minCoeff() <= 0.0) {
    throw std::runtime_error(
        std::string("covariance not positive definite after ") + where);
  }
}

std::vector<EkfState> MultirateEkf::RunMultirate(
    const std::vector<Measurement>& stream, double tick_rate) {
  if (!(tick_rate > 0.0) || !std::isfinite(tick_rate)) {
    throw std::invalid_argument("RunMultirate: tick_rate must be positive");
  }
  for (size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].timestamp < stream[i - 1].timestamp) {
      throw std::invalid_argument(
          "RunMultirate: stream timestamp decreases at index " +
          std::to_string(i));
    }
  }

  std::vector<EkfState> out;
  out.push_back(state_);
  if (stream.empty()) {
    return out;
  }

  const double t0 = state_.timestamp;
  const double last_time = stream.back().timestamp;
  const int na = static_cast<int>(model_.accel_indices.size());
  Eigen::VectorXd held_accel = Eigen::VectorXd::Zero(na);

  auto advance_to = [&](double target) {
    const double dt = target - state_.timestamp;
    if (dt > kStaleTolerance) {
      Predict(dt, na > 0 ? &held_accel : nullptr);
    }
    if (target > state_.timestamp) {
      state_.timestamp = target;  // absorb sub-tolerance residue
    }
  };

  size_t next = 0;
  for (long tick = 1;; ++tick) {
    const double tick_time = t0 + static_cast<double>(tick) / tick_rate;
    const double horizon = std::min(tick_time, last_time);
    while (next < stream.size() && stream[next].timestamp <= horizon) {
      const Measurement& m = stream[next];
      advance_to(m.timestamp);
      Update(m);
      if (m.kind == Measurement::Kind::kImu && na > 0) {
        held_accel = m.values.head(na);
      }
      ++next;
    }
    if (tick_time > last_time + kStaleTolerance && next >= stream.size()) {
      break;
    }
    advance_to(tick_time);
    out.push_back(state_);
  }
  return out;
}

}  // namespace mppi
