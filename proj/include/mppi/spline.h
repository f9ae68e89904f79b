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

#ifndef KNOTMPPI_MPPI_SPLINE_H_
#define KNOTMPPI_MPPI_SPLINE_H_

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace mppi {

// How knot values are turned into a continuous control trajectory.
// kDirect is one knot per control step, evaluated by index lookup;
// the other orders interpolate between a small number of knots.
enum class InterpolationOrder { kDirect, kZerothOrder, kLinear, kCubic };

std::string ToString(InterpolationOrder order);
InterpolationOrder InterpolationOrderFromString(const std::string& name);

// Control trajectory represented by values at knot times. Immutable by
// convention after construction; all operations below are pure functions,
// so instances can be read concurrently.
struct KnotTrajectory {
  Eigen::VectorXd times;   // strictly increasing, size K
  Eigen::MatrixXd values;  // K x control_dim
  InterpolationOrder order = InterpolationOrder::kCubic;

  int knot_count() const { return static_cast<int>(times.size()); }
  int control_dim() const { return static_cast<int>(values.cols()); }
};

// Throws std::invalid_argument if the trajectory violates its invariants:
// at least one knot (two for linear/cubic), strictly increasing times,
// matching value rows, finite values.
void ValidateKnotTrajectory(const KnotTrajectory& traj);

// Knots evenly spaced on [0, horizon], all values constant_value.
KnotTrajectory MakeUniformKnotTrajectory(int knot_count, double horizon,
                                         const Eigen::VectorXd& constant_value,
                                         InterpolationOrder order);

// Interpolated control at time t. Times outside the knot range clamp to the
// nearest endpoint value. Cubic uses Hermite segments with finite-difference
// tangents (centered in the interior, one-sided at the ends), so perturbing
// one knot only affects its adjacent segments.
Eigen::VectorXd Evaluate(const KnotTrajectory& traj, double t);

// Allocation-free variant; out must have size control_dim.
void EvaluateInto(const KnotTrajectory& traj, double t,
                  Eigen::Ref<Eigen::VectorXd> out);

// Row i = Evaluate(traj, t0 + i * dt), for i in [0, steps).
Eigen::MatrixXd EvaluateDense(const KnotTrajectory& traj, double t0, double dt,
                              int steps);

// Allocation-free variant; out must be steps x control_dim.
void EvaluateDenseInto(const KnotTrajectory& traj, double t0, double dt,
                       int steps, Eigen::Ref<Eigen::MatrixXd> out);

// Value used for knots whose shifted query time falls past the final knot.
enum class ShiftFill { kHoldLast, kReference };

// Receding-horizon shift: keeps knot times, replaces each knot value with the
// old trajectory evaluated delta seconds later. Queries past the final knot
// take the fill value (kHoldLast: old final knot, kReference: `reference`).
KnotTrajectory Shift(const KnotTrajectory& traj, double delta, ShiftFill fill,
                     const std::optional<Eigen::VectorXd>& reference =
                         std::nullopt);

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_SPLINE_H_
