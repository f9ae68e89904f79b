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

#include "mppi/spline.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mppi {

namespace {

// index of the last knot with time <= t, clamped to [0, K-1]
int LastKnotAtOrBefore(const Eigen::VectorXd& times, double t) {
  const double* begin = times.data();
  const double* end = begin + times.size();
  int idx = static_cast<int>(std::upper_bound(begin, end, t) - begin) - 1;
  return std::max(idx, 0);
}

// finite-difference tangent at knot j, one-sided at the ends
void TangentInto(const KnotTrajectory& traj, int j,
                 Eigen::Ref<Eigen::RowVectorXd> out) {
  const int k = traj.knot_count();
  int lo = std::max(j - 1, 0);
  int hi = std::min(j + 1, k - 1);
  out = (traj.values.row(hi) - traj.values.row(lo)) /
        (traj.times(hi) - traj.times(lo));
}

}  // namespace

std::string ToString(InterpolationOrder order) {
  switch (order) {
    case InterpolationOrder::kDirect:
      return "direct";
    case InterpolationOrder::kZerothOrder:
      return "zeroth";
    case InterpolationOrder::kLinear:
      return "linear";
    case InterpolationOrder::kCubic:
      return "cubic";
  }
  return "unknown";
}

InterpolationOrder InterpolationOrderFromString(const std::string& name) {
  if (name == "direct") return InterpolationOrder::kDirect;
  if (name == "zeroth") return InterpolationOrder::kZerothOrder;
  if (name == "linear") return InterpolationOrder::kLinear;
  if (name == "cubic") return InterpolationOrder::kCubic;
  throw std::invalid_argument("unknown interpolation order: " + name);
}

void ValidateKnotTrajectory(const KnotTrajectory& traj) {
  const int k = traj.knot_count();
  if (k < 1) {
    throw std::invalid_argument("knot trajectory is empty");
  }
  if (traj.values.rows() != k) {
    throw std::invalid_argument("knot value rows do not match knot times");
  }
  const bool needs_two = traj.order == InterpolationOrder::kLinear ||
                         traj.order == InterpolationOrder::kCubic;
  if (needs_two && k < 2) {
    throw std::invalid_argument(
        "linear and cubic interpolation require at least two knots");
  }
  for (int i = 1; i < k; ++i) {
    if (!(traj.times(i) > traj.times(i - 1))) {
      throw std::invalid_argument("knot times must be strictly increasing");
    }
  }
  if (!traj.times.allFinite() || !traj.values.allFinite()) {
    throw std::invalid_argument("knot trajectory contains non-finite values");
  }
}

KnotTrajectory MakeUniformKnotTrajectory(int knot_count, double horizon,
                                         const Eigen::VectorXd& constant_value,
                                         InterpolationOrder order) {
  if (knot_count < 1) {
    throw std::invalid_argument("knot_count must be at least 1");
  }
  // a single knot sits at t = 0 and needs no span
  if (knot_count > 1 && horizon <= 0.0) {
    throw std::invalid_argument("horizon must be positive");
  }
  KnotTrajectory traj;
  traj.order = order;
  traj.times.resize(knot_count);
  if (knot_count == 1) {
    traj.times(0) = 0.0;
  } else {
    for (int i = 0; i < knot_count; ++i) {
      traj.times(i) = horizon * static_cast<double>(i) / (knot_count - 1);
    }
  }
  traj.values = constant_value.transpose().replicate(knot_count, 1);
  return traj;
}

void EvaluateInto(const KnotTrajectory& traj, double t,
                  Eigen::Ref<Eigen::VectorXd> out) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("evaluation time is not finite");
  }
  const int k = traj.knot_count();
  if (k == 0) {
    throw std::invalid_argument("cannot evaluate an empty knot trajectory");
  }

  // constant clamp outside the knot range
  if (t <= traj.times(0)) {
    out = traj.values.row(0);
    return;
  }
  if (t >= traj.times(k - 1)) {
    out = traj.values.row(k - 1);
    return;
  }

  switch (traj.order) {
    case InterpolationOrder::kDirect:
    case InterpolationOrder::kZerothOrder: {
      out = traj.values.row(LastKnotAtOrBefore(traj.times, t));
      return;
    }
    case InterpolationOrder::kLinear: {
      int i = std::min(LastKnotAtOrBefore(traj.times, t), k - 2);
      double u = (t - traj.times(i)) / (traj.times(i + 1) - traj.times(i));
      out = traj.values.row(i) +
            u * (traj.values.row(i + 1) - traj.values.row(i));
      return;
    }
    case InterpolationOrder::kCubic: {
      int i = std::min(LastKnotAtOrBefore(traj.times, t), k - 2);
      const double h = traj.times(i + 1) - traj.times(i);
      const double u = (t - traj.times(i)) / h;
      const double u2 = u * u;
      const double u3 = u2 * u;
      const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
      const double h10 = u3 - 2.0 * u2 + u;
      const double h01 = -2.0 * u3 + 3.0 * u2;
      const double h11 = u3 - u2;
      Eigen::RowVectorXd m0(traj.control_dim());
      Eigen::RowVectorXd m1(traj.control_dim());
      TangentInto(traj, i, m0);
      TangentInto(traj, i + 1, m1);
      out = h00 * traj.values.row(i) + (h10 * h) * m0 +
            h01 * traj.values.row(i + 1) + (h11 * h) * m1;
      return;
    }
  }
  throw std::invalid_argument("unknown interpolation order");
}

Eigen::VectorXd Evaluate(const KnotTrajectory& traj, double t) {
  Eigen::VectorXd out(traj.control_dim());
  EvaluateInto(traj, t, out);
  return out;
}

void EvaluateDenseInto(const KnotTrajectory& traj, double t0, double dt,
                       int steps, Eigen::Ref<Eigen::MatrixXd> out) {
  if (dt <= 0.0) {
    throw std::invalid_argument("dt must be positive");
  }
  if (steps < 1) {
    throw std::invalid_argument("steps must be at least 1");
  }
  Eigen::VectorXd row(traj.control_dim());
  for (int i = 0; i < steps; ++i) {
    EvaluateInto(traj, t0 + i * dt, row);
    out.row(i) = row;
  }
}

Eigen::MatrixXd EvaluateDense(const KnotTrajectory& traj, double t0, double dt,
                              int steps) {
  Eigen::MatrixXd out(steps, traj.control_dim());
  EvaluateDenseInto(traj, t0, dt, steps, out);
  return out;
}

KnotTrajectory Shift(const KnotTrajectory& traj, double delta, ShiftFill fill,
                     const std::optional<Eigen::VectorXd>& reference) {
  if (delta < 0.0) {
    throw std::invalid_argument("shift delta must be non-negative");
  }
  if (fill == ShiftFill::kReference && !reference.has_value()) {
    throw std::invalid_argument("reference fill requires a reference vector");
  }
  const int k = traj.knot_count();
  if (k == 0) {
    throw std::invalid_argument("cannot shift an empty knot trajectory");
  }
  KnotTrajectory out = traj;
  const double t_end = traj.times(k - 1);
  Eigen::VectorXd value(traj.control_dim());
  for (int i = 0; i < k; ++i) {
    const double t_query = traj.times(i) + delta;
    if (t_query > t_end) {
      if (fill == ShiftFill::kHoldLast) {
        out.values.row(i) = traj.values.row(k - 1);
      } else {
        out.values.row(i) = reference->transpose();
      }
    } else {
      EvaluateInto(traj, t_query, value);
      out.values.row(i) = value;
    }
  }
  return out;
}

}  // namespace mppi
