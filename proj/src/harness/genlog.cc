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

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mppi/harness.h"
#include "mppi/rng.h"

namespace mppi {
namespace harness {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string Fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

SyntheticLog GenerateSyntheticLog(const SyntheticLogConfig& config) {
  if (!(config.duration_s > 0.0)) {
    throw std::invalid_argument("genlog: duration must be positive");
  }
  if (!(config.imu_rate_hz > 0.0) || !(config.pose_rate_hz > 0.0)) {
    throw std::invalid_argument("genlog: rates must be positive");
  }
  if (config.pose_rate_hz > config.imu_rate_hz) {
    throw std::invalid_argument("genlog: pose rate must not exceed imu rate");
  }
  const int pose_every = static_cast<int>(
      std::lround(config.imu_rate_hz / config.pose_rate_hz));
  if (std::abs(pose_every * config.pose_rate_hz - config.imu_rate_hz) > 1e-6) {
    throw std::invalid_argument("genlog: imu rate must be a pose multiple");
  }

  const double dt = 1.0 / config.imu_rate_hz;
  const int ticks = static_cast<int>(std::lround(config.duration_s *
                                                 config.imu_rate_hz));
  const double omega_x = 2.0 * kPi * config.force_frequency_hz;
  const double omega_y = 2.0 * kPi * config.force_frequency_hz * 0.7;

  RandomStream noise = RandomStream::ForSample(config.seed, 0, 0);
  SyntheticLog log;
  log.truth.resize(ticks + 1, 7);
  log.measurements.reserve(ticks + ticks / std::max(pose_every, 1) + 2);

  // closed-form double integrator under a sinusoidal force, unit mass
  Eigen::Vector2d position(0.0, 0.0);
  Eigen::Vector2d velocity(0.0, 0.0);
  auto accel_at = [&](double t) {
    return Eigen::Vector2d(config.force_amplitude * std::sin(omega_x * t),
                           config.force_amplitude * std::cos(omega_y * t));
  };

  for (int k = 0; k <= ticks; ++k) {
    const double t = k * dt;
    const Eigen::Vector2d accel = accel_at(t);
    log.truth(k, 0) = t;
    log.truth.row(k).segment<2>(1) = position;
    log.truth.row(k).segment<2>(3) = velocity;
    log.truth.row(k).segment<2>(5) = accel;

    if (k > 0) {
      // imu reports the acceleration over the tick that just ended; use the
      // midpoint so the discrete log matches the continuous trajectory
      const Eigen::Vector2d mid_accel = accel_at(t - 0.5 * dt);
      Measurement imu;
      imu.kind = Measurement::Kind::kImu;
      imu.timestamp = t;
      imu.values.resize(2);
      imu.values(0) = mid_accel(0) + config.accel_noise * noise.NextGaussian();
      imu.values(1) = mid_accel(1) + config.accel_noise * noise.NextGaussian();
      const double accel_var =
          std::max(config.accel_noise * config.accel_noise, 1e-12);
      imu.noise_diag = Eigen::Vector2d::Constant(accel_var);
      log.measurements.push_back(imu);

      if (k % pose_every == 0) {
        Measurement pose;
        pose.kind = Measurement::Kind::kPose;
        pose.timestamp = t;
        pose.values.resize(2);
        pose.values(0) =
            position(0) + config.pose_noise * noise.NextGaussian();
        pose.values(1) =
            position(1) + config.pose_noise * noise.NextGaussian();
        const double pose_var =
            std::max(config.pose_noise * config.pose_noise, 1e-12);
        pose.noise_diag = Eigen::Vector2d::Constant(pose_var);
        log.measurements.push_back(pose);
      }
    }

    // advance truth to the next tick with the midpoint acceleration, which
    // is exact to O(dt^3) for a smooth forcing
    if (k < ticks) {
      const Eigen::Vector2d mid_accel = accel_at(t + 0.5 * dt);
      position += velocity * dt + 0.5 * mid_accel * dt * dt;
      velocity += mid_accel * dt;
    }
  }
  return log;
}

void WriteMeasurementCsv(std::ostream& out,
                         const std::vector<Measurement>& measurements) {
  out << "timestamp_s,sensor_type,values\n";
  for (const Measurement& m : measurements) {
    const char* type = nullptr;
    switch (m.kind) {
      case Measurement::Kind::kPose:
        type = "pose";
        break;
      case Measurement::Kind::kImu:
        type = "imu";
        break;
      case Measurement::Kind::kEncoders:
        type = "encoders";
        break;
    }
    out << Fmt(m.timestamp) << ',' << type;
    for (Eigen::Index i = 0; i < m.values.size(); ++i) {
      out << ',' << Fmt(m.values(i));
    }
    out << '\n';
  }
}

std::vector<Measurement> ReadMeasurementCsv(std::istream& in,
                                            double pose_noise,
                                            double accel_noise) {
  std::vector<Measurement> measurements;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("measurement csv: missing header");
  }
  int line_no = 1;
  const double pose_var = std::max(pose_noise * pose_noise, 1e-12);
  const double accel_var = std::max(accel_noise * accel_noise, 1e-12);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() < 3) {
      throw std::invalid_argument("measurement csv: short row at line " +
                                  std::to_string(line_no));
    }
    Measurement m;
    try {
      m.timestamp = std::stod(fields[0]);
      m.values.resize(static_cast<Eigen::Index>(fields.size()) - 2);
      for (size_t i = 2; i < fields.size(); ++i) {
        m.values(static_cast<Eigen::Index>(i) - 2) = std::stod(fields[i]);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("measurement csv: bad number at line " +
                                  std::to_string(line_no));
    }
    if (fields[1] == "pose") {
      m.kind = Measurement::Kind::kPose;
      m.noise_diag = Eigen::VectorXd::Constant(m.values.size(), pose_var);
    } else if (fields[1] == "imu") {
      m.kind = Measurement::Kind::kImu;
      m.noise_diag = Eigen::VectorXd::Constant(m.values.size(), accel_var);
    } else if (fields[1] == "encoders") {
      m.kind = Measurement::Kind::kEncoders;
      m.noise_diag = Eigen::VectorXd::Constant(m.values.size(), pose_var);
    } else {
      throw std::invalid_argument("measurement csv: unknown sensor type '" +
                                  fields[1] + "' at line " +
                                  std::to_string(line_no));
    }
    measurements.push_back(std::move(m));
  }
  return measurements;
}

void WriteTruthCsv(std::ostream& out, const Eigen::MatrixXd& truth) {
  out << "t,x,y,vx,vy,ax,ay\n";
  for (Eigen::Index r = 0; r < truth.rows(); ++r) {
    for (Eigen::Index c = 0; c < truth.cols(); ++c) {
      if (c > 0) out << ',';
      out << Fmt(truth(r, c));
    }
    out << '\n';
  }
}

}  // namespace harness
}  // namespace mppi
