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

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "mppi/harness.h"

namespace mppi {
namespace harness {
namespace {

std::string Fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string Fmt(const Eigen::VectorXd& value) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    if (i > 0) out += ",";
    out += Fmt(value(i));
  }
  return out + "]";
}

[[noreturn]] void BadKey(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void RequireMap(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) {
    BadKey(path, "expected a mapping");
  }
}

// strict schema: every present key must be in `allowed`
void CheckKeys(const YAML::Node& node,
               std::initializer_list<const char*> allowed,
               const std::string& path) {
  RequireMap(node, path);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool known = false;
    for (const char* candidate : allowed) {
      if (key == candidate) {
        known = true;
        break;
      }
    }
    if (!known) {
      BadKey(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

template <typename T>
void Read(const YAML::Node& node, const char* key, T* out,
          const std::string& path) {
  const YAML::Node value = node[key];
  if (!value.IsDefined()) return;
  try {
    *out = value.as<T>();
  } catch (const YAML::Exception&) {
    BadKey(path + "." + key, "malformed value");
  }
}

void ReadVec(const YAML::Node& node, const char* key, Eigen::VectorXd* out,
             const std::string& path) {
  const YAML::Node value = node[key];
  if (!value.IsDefined()) return;
  std::vector<double> parsed;
  try {
    parsed = value.as<std::vector<double>>();
  } catch (const YAML::Exception&) {
    BadKey(path + "." + key, "expected a sequence of numbers");
  }
  *out = Eigen::Map<Eigen::VectorXd>(parsed.data(),
                                     static_cast<Eigen::Index>(parsed.size()));
}

void ReadVec2(const YAML::Node& node, const char* key, Eigen::Vector2d* out,
              const std::string& path) {
  Eigen::VectorXd parsed;
  ReadVec(node, key, &parsed, path);
  if (!node[key].IsDefined()) return;
  if (parsed.size() != 2) {
    BadKey(path + "." + std::string(key), "expected exactly two numbers");
  }
  *out = parsed;
}

// scalar gain applied to a one-dof pd loop
void ReadPdGain(const YAML::Node& node, const char* key, Eigen::VectorXd* out,
                const std::string& path) {
  double value = 0.0;
  if (!node[key].IsDefined()) return;
  Read(node, key, &value, path);
  out->resize(1);
  (*out)(0) = value;
}

void ApplyContactYaml(const YAML::Node& node, ContactParams* contact,
                      const std::string& path) {
  CheckKeys(node,
            {"stiffness", "damping", "friction_coefficient",
             "friction_regularization_velocity"},
            path);
  Read(node, "stiffness", &contact->stiffness, path);
  Read(node, "damping", &contact->damping, path);
  Read(node, "friction_coefficient", &contact->friction_coefficient, path);
  Read(node, "friction_regularization_velocity",
       &contact->friction_regularization_velocity, path);
}

void ApplyEnvYaml(const YAML::Node& node, TaskConfig* config) {
  const std::string path = "env";
  if (config->task == "double_integrator") {
    CheckKeys(node, {"mass", "force_limit", "substeps"}, path);
    Read(node, "mass", &config->double_integrator.mass, path);
    Read(node, "force_limit", &config->double_integrator.force_limit, path);
    Read(node, "substeps", &config->double_integrator.substeps, path);
  } else if (config->task == "cartpole") {
    CheckKeys(node,
              {"cart_mass", "pole_mass", "pole_length", "gravity",
               "force_limit", "substeps"},
              path);
    Read(node, "cart_mass", &config->cartpole.cart_mass, path);
    Read(node, "pole_mass", &config->cartpole.pole_mass, path);
    Read(node, "pole_length", &config->cartpole.pole_length, path);
    Read(node, "gravity", &config->cartpole.gravity, path);
    Read(node, "force_limit", &config->cartpole.force_limit, path);
    Read(node, "substeps", &config->cartpole.substeps, path);
  } else if (config->task == "pusher") {
    CheckKeys(node,
              {"robot_mass", "robot_radius", "box_mass", "box_side", "gravity",
               "ground_friction", "force_limit", "substeps", "box_start",
               "contact"},
              path);
    Read(node, "robot_mass", &config->pusher.robot_mass, path);
    Read(node, "robot_radius", &config->pusher.robot_radius, path);
    Read(node, "box_mass", &config->pusher.box_mass, path);
    Read(node, "box_side", &config->pusher.box_side, path);
    Read(node, "gravity", &config->pusher.gravity, path);
    Read(node, "ground_friction", &config->pusher.ground_friction, path);
    Read(node, "force_limit", &config->pusher.force_limit, path);
    Read(node, "substeps", &config->pusher.substeps, path);
    ReadVec2(node, "box_start", &config->pusher.box_start, path);
    if (node["contact"].IsDefined()) {
      ApplyContactYaml(node["contact"], &config->pusher.contact,
                       path + ".contact");
    }
  } else if (config->task == "hopper") {
    CheckKeys(node,
              {"body_mass", "foot_mass", "gravity", "leg_min", "leg_max",
               "rest_length", "substeps", "pd", "contact"},
              path);
    Read(node, "body_mass", &config->hopper.body_mass, path);
    Read(node, "foot_mass", &config->hopper.foot_mass, path);
    Read(node, "gravity", &config->hopper.gravity, path);
    Read(node, "leg_min", &config->hopper.leg_min, path);
    Read(node, "leg_max", &config->hopper.leg_max, path);
    Read(node, "rest_length", &config->hopper.rest_length, path);
    Read(node, "substeps", &config->hopper.substeps, path);
    if (node["pd"].IsDefined()) {
      CheckKeys(node["pd"], {"kp", "kd", "torque_limit"}, path + ".pd");
      ReadPdGain(node["pd"], "kp", &config->hopper.pd.kp, path + ".pd");
      ReadPdGain(node["pd"], "kd", &config->hopper.pd.kd, path + ".pd");
      ReadPdGain(node["pd"], "torque_limit", &config->hopper.pd.torque_limit,
                 path + ".pd");
    }
    if (node["contact"].IsDefined()) {
      ApplyContactYaml(node["contact"], &config->hopper.contact,
                       path + ".contact");
    }
  }
}

void ApplyYaml(const YAML::Node& root, TaskConfig* config) {
  CheckKeys(root,
            {"task", "workers", "planner", "episode", "cost", "success",
             "estimator", "env", "gait"},
            "");
  Read(root, "workers", &config->workers, "");

  if (root["planner"].IsDefined()) {
    const YAML::Node node = root["planner"];
    const std::string path = "planner";
    CheckKeys(node,
              {"num_samples", "horizon_steps", "sim_dt", "temperature",
               "knot_count", "order", "seed", "include_mean_sample",
               "update_rate", "noise_scale"},
              path);
    Read(node, "num_samples", &config->planner.num_samples, path);
    Read(node, "horizon_steps", &config->planner.horizon_steps, path);
    Read(node, "sim_dt", &config->planner.sim_dt, path);
    Read(node, "temperature", &config->planner.temperature, path);
    Read(node, "knot_count", &config->planner.knot_count, path);
    if (node["order"].IsDefined()) {
      std::string name;
      Read(node, "order", &name, path);
      config->planner.order = InterpolationOrderFromString(name);
    }
    unsigned long long seed = config->planner.seed;
    Read(node, "seed", &seed, path);
    config->planner.seed = seed;
    Read(node, "include_mean_sample", &config->planner.include_mean_sample,
         path);
    Read(node, "update_rate", &config->planner.update_rate, path);
    ReadVec(node, "noise_scale", &config->noise_scale, path);
  }

  if (root["episode"].IsDefined()) {
    const YAML::Node node = root["episode"];
    CheckKeys(node, {"steps", "stop_on_success"}, "episode");
    Read(node, "steps", &config->episode.steps, "episode");
    Read(node, "stop_on_success", &config->episode.stop_on_success, "episode");
  }

  if (root["cost"].IsDefined()) {
    const YAML::Node node = root["cost"];
    const std::string path = "cost";
    CheckKeys(node,
              {"q_diag", "r_diag", "x_ref", "terminal_weight", "q_box",
               "box_target", "goal_tolerance", "couple_reference_to_box"},
              path);
    ReadVec(node, "q_diag", &config->cost.q_diag, path);
    ReadVec(node, "r_diag", &config->cost.r_diag, path);
    ReadVec(node, "x_ref", &config->cost.x_ref, path);
    Read(node, "terminal_weight", &config->cost.terminal_weight, path);
    Read(node, "q_box", &config->cost.q_box, path);
    ReadVec2(node, "box_target", &config->cost.box_target, path);
    Read(node, "goal_tolerance", &config->cost.goal_tolerance, path);
    Read(node, "couple_reference_to_box",
         &config->cost.couple_reference_to_box, path);
  }

  if (root["success"].IsDefined()) {
    const YAML::Node node = root["success"];
    const std::string path = "success";
    CheckKeys(node,
              {"goal_position", "goal_position_tolerance",
               "upright_angle_tolerance", "upright_hold_seconds"},
              path);
    ReadVec2(node, "goal_position", &config->success.goal_position, path);
    Read(node, "goal_position_tolerance",
         &config->success.goal_position_tolerance, path);
    Read(node, "upright_angle_tolerance",
         &config->success.upright_angle_tolerance, path);
    Read(node, "upright_hold_seconds", &config->success.upright_hold_seconds,
         path);
  }

  if (root["estimator"].IsDefined()) {
    const YAML::Node node = root["estimator"];
    const std::string path = "estimator";
    CheckKeys(node,
              {"enabled", "pose_rate_hz", "imu_rate_hz", "pose_noise",
               "accel_noise", "accel_noise_density", "initial_position_var",
               "initial_velocity_var"},
              path);
    Read(node, "enabled", &config->estimator.enabled, path);
    Read(node, "pose_rate_hz", &config->estimator.pose_rate_hz, path);
    Read(node, "imu_rate_hz", &config->estimator.imu_rate_hz, path);
    Read(node, "pose_noise", &config->estimator.pose_noise, path);
    Read(node, "accel_noise", &config->estimator.accel_noise, path);
    Read(node, "accel_noise_density", &config->estimator.accel_noise_density,
         path);
    Read(node, "initial_position_var", &config->estimator.initial_position_var,
         path);
    Read(node, "initial_velocity_var", &config->estimator.initial_velocity_var,
         path);
  }

  if (root["env"].IsDefined()) {
    ApplyEnvYaml(root["env"], config);
  }

  if (root["gait"].IsDefined()) {
    const YAML::Node node = root["gait"];
    const std::string path = "gait";
    CheckKeys(node,
              {"enabled", "period", "duty_factor", "amplitude",
               "phase_offsets", "stand_pose"},
              path);
    Read(node, "enabled", &config->use_gait_reference, path);
    Read(node, "period", &config->gait.period, path);
    Read(node, "duty_factor", &config->gait.duty_factor, path);
    ReadVec(node, "amplitude", &config->gait.amplitude, path);
    ReadVec(node, "phase_offsets", &config->gait.phase_offsets, path);
    ReadVec(node, "stand_pose", &config->gait.stand_pose, path);
  }
}

Eigen::VectorXd Diag4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace

TaskConfig DefaultTaskConfig(const std::string& task) {
  TaskConfig config;
  config.task = task;
  if (task == "double_integrator") {
    config.episode.steps = 300;
    config.cost.q_diag = Diag4(10.0, 10.0, 1.0, 1.0);
    config.cost.r_diag = Eigen::Vector2d(0.1, 0.1);
  } else if (task == "cartpole") {
    config.episode.steps = 500;
    config.cost.q_diag = Diag4(0.5, 10.0, 0.1, 0.1);
    config.cost.r_diag = Eigen::VectorXd::Constant(1, 0.01);
    config.cost.terminal_weight = 5.0;
    // swing-up wants wide exploration and a plan that survives two steps;
    // at the 10% default sigma extra samples keep paying past 100
    config.noise_scale = Eigen::VectorXd::Constant(1, 3.5);
    config.planner.update_rate = 50.0;
  } else if (task == "pusher") {
    config.episode.steps = 1000;
    config.episode.stop_on_success = true;
    // replanning every step discards all but the first control of each
    // plan; holding each plan for two steps roughly doubles success
    config.planner.update_rate = 50.0;
    config.cost.q_diag = Eigen::VectorXd::Zero(10);
    config.cost.q_diag(0) = 0.5;
    config.cost.q_diag(1) = 0.5;
    config.cost.q_diag(5) = 0.05;
    config.cost.q_diag(6) = 0.05;
    config.cost.r_diag = Eigen::Vector2d(0.001, 0.001);
    config.cost.q_box = 20.0;
  } else if (task == "hopper") {
    config.episode.steps = 500;
    config.cost.q_diag = Diag4(50.0, 0.0, 1.0, 0.1);
    config.cost.r_diag = Eigen::VectorXd::Constant(1, 1.0);
    config.gait.period = 0.5;
    config.gait.duty_factor = 0.6;
    config.gait.amplitude = Eigen::VectorXd::Constant(1, 0.1);
    config.gait.phase_offsets = Eigen::VectorXd::Zero(1);
    config.gait.stand_pose = Eigen::VectorXd::Constant(1, 0.4);
  } else {
    throw std::invalid_argument("unknown task: " + task);
  }
  return config;
}

TaskConfig ParseTaskConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") +
                                e.what());
  }
  RequireMap(root, "top level");
  std::string task = "cartpole";
  Read(root, "task", &task, "");
  TaskConfig config = DefaultTaskConfig(task);
  ApplyYaml(root, &config);
  return config;
}

TaskConfig LoadTaskConfig(const std::string& yaml_path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(yaml_path);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument("config: cannot load " + yaml_path + ": " +
                                e.what());
  }
  std::ostringstream text;
  text << root;
  return ParseTaskConfig(text.str());
}

std::string CanonicalConfigString(const TaskConfig& c) {
  std::ostringstream out;
  out << "task=" << c.task << "\n";
  out << "workers=" << c.workers << "\n";
  out << "planner.num_samples=" << c.planner.num_samples << "\n";
  out << "planner.horizon_steps=" << c.planner.horizon_steps << "\n";
  out << "planner.sim_dt=" << Fmt(c.planner.sim_dt) << "\n";
  out << "planner.temperature=" << Fmt(c.planner.temperature) << "\n";
  out << "planner.knot_count=" << c.planner.knot_count << "\n";
  out << "planner.order=" << ToString(c.planner.order) << "\n";
  out << "planner.seed=" << c.planner.seed << "\n";
  out << "planner.include_mean_sample=" << c.planner.include_mean_sample
      << "\n";
  out << "planner.update_rate=" << Fmt(c.planner.update_rate) << "\n";
  out << "planner.noise_scale=" << Fmt(c.noise_scale) << "\n";
  out << "episode.steps=" << c.episode.steps << "\n";
  out << "episode.stop_on_success=" << c.episode.stop_on_success << "\n";
  out << "cost.q_diag=" << Fmt(c.cost.q_diag) << "\n";
  out << "cost.r_diag=" << Fmt(c.cost.r_diag) << "\n";
  out << "cost.x_ref=" << Fmt(c.cost.x_ref) << "\n";
  out << "cost.terminal_weight=" << Fmt(c.cost.terminal_weight) << "\n";
  out << "cost.q_box=" << Fmt(c.cost.q_box) << "\n";
  out << "cost.box_target=" << Fmt(c.cost.box_target) << "\n";
  out << "cost.goal_tolerance=" << Fmt(c.cost.goal_tolerance) << "\n";
  out << "cost.couple_reference_to_box=" << c.cost.couple_reference_to_box
      << "\n";
  out << "success.goal_position=" << Fmt(c.success.goal_position) << "\n";
  out << "success.goal_position_tolerance="
      << Fmt(c.success.goal_position_tolerance) << "\n";
  out << "success.upright_angle_tolerance="
      << Fmt(c.success.upright_angle_tolerance) << "\n";
  out << "success.upright_hold_seconds="
      << Fmt(c.success.upright_hold_seconds) << "\n";
  out << "estimator.enabled=" << c.estimator.enabled << "\n";
  out << "estimator.pose_rate_hz=" << Fmt(c.estimator.pose_rate_hz) << "\n";
  out << "estimator.imu_rate_hz=" << Fmt(c.estimator.imu_rate_hz) << "\n";
  out << "estimator.pose_noise=" << Fmt(c.estimator.pose_noise) << "\n";
  out << "estimator.accel_noise=" << Fmt(c.estimator.accel_noise) << "\n";
  out << "estimator.accel_noise_density="
      << Fmt(c.estimator.accel_noise_density) << "\n";
  out << "estimator.initial_position_var="
      << Fmt(c.estimator.initial_position_var) << "\n";
  out << "estimator.initial_velocity_var="
      << Fmt(c.estimator.initial_velocity_var) << "\n";

  if (c.task == "double_integrator") {
    out << "env.mass=" << Fmt(c.double_integrator.mass) << "\n";
    out << "env.force_limit=" << Fmt(c.double_integrator.force_limit) << "\n";
    out << "env.substeps=" << c.double_integrator.substeps << "\n";
  } else if (c.task == "cartpole") {
    out << "env.cart_mass=" << Fmt(c.cartpole.cart_mass) << "\n";
    out << "env.pole_mass=" << Fmt(c.cartpole.pole_mass) << "\n";
    out << "env.pole_length=" << Fmt(c.cartpole.pole_length) << "\n";
    out << "env.gravity=" << Fmt(c.cartpole.gravity) << "\n";
    out << "env.force_limit=" << Fmt(c.cartpole.force_limit) << "\n";
    out << "env.substeps=" << c.cartpole.substeps << "\n";
  } else if (c.task == "pusher") {
    out << "env.robot_mass=" << Fmt(c.pusher.robot_mass) << "\n";
    out << "env.robot_radius=" << Fmt(c.pusher.robot_radius) << "\n";
    out << "env.box_mass=" << Fmt(c.pusher.box_mass) << "\n";
    out << "env.box_side=" << Fmt(c.pusher.box_side) << "\n";
    out << "env.gravity=" << Fmt(c.pusher.gravity) << "\n";
    out << "env.ground_friction=" << Fmt(c.pusher.ground_friction) << "\n";
    out << "env.force_limit=" << Fmt(c.pusher.force_limit) << "\n";
    out << "env.substeps=" << c.pusher.substeps << "\n";
    out << "env.box_start=" << Fmt(c.pusher.box_start) << "\n";
    out << "env.contact.stiffness=" << Fmt(c.pusher.contact.stiffness) << "\n";
    out << "env.contact.damping=" << Fmt(c.pusher.contact.damping) << "\n";
    out << "env.contact.friction_coefficient="
        << Fmt(c.pusher.contact.friction_coefficient) << "\n";
    out << "env.contact.friction_regularization_velocity="
        << Fmt(c.pusher.contact.friction_regularization_velocity) << "\n";
  } else if (c.task == "hopper") {
    out << "env.body_mass=" << Fmt(c.hopper.body_mass) << "\n";
    out << "env.foot_mass=" << Fmt(c.hopper.foot_mass) << "\n";
    out << "env.gravity=" << Fmt(c.hopper.gravity) << "\n";
    out << "env.leg_min=" << Fmt(c.hopper.leg_min) << "\n";
    out << "env.leg_max=" << Fmt(c.hopper.leg_max) << "\n";
    out << "env.rest_length=" << Fmt(c.hopper.rest_length) << "\n";
    out << "env.substeps=" << c.hopper.substeps << "\n";
    out << "env.pd.kp=" << Fmt(c.hopper.pd.kp) << "\n";
    out << "env.pd.kd=" << Fmt(c.hopper.pd.kd) << "\n";
    out << "env.pd.torque_limit=" << Fmt(c.hopper.pd.torque_limit) << "\n";
    out << "env.contact.stiffness=" << Fmt(c.hopper.contact.stiffness) << "\n";
    out << "env.contact.damping=" << Fmt(c.hopper.contact.damping) << "\n";
    out << "env.contact.friction_coefficient="
        << Fmt(c.hopper.contact.friction_coefficient) << "\n";
    out << "env.contact.friction_regularization_velocity="
        << Fmt(c.hopper.contact.friction_regularization_velocity) << "\n";
    out << "gait.enabled=" << c.use_gait_reference << "\n";
    out << "gait.period=" << Fmt(c.gait.period) << "\n";
    out << "gait.duty_factor=" << Fmt(c.gait.duty_factor) << "\n";
    out << "gait.amplitude=" << Fmt(c.gait.amplitude) << "\n";
    out << "gait.phase_offsets=" << Fmt(c.gait.phase_offsets) << "\n";
    out << "gait.stand_pose=" << Fmt(c.gait.stand_pose) << "\n";
  }
  return out.str();
}

std::uint64_t ConfigHash(const TaskConfig& config) {
  const std::string canonical = CanonicalConfigString(config);
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char byte : canonical) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::unique_ptr<EnvModel> BuildEnv(const TaskConfig& config) {
  if (config.task == "double_integrator") {
    DoubleIntegratorParams params = config.double_integrator;
    params.sim_dt = config.planner.sim_dt;
    return std::make_unique<DoubleIntegratorEnv>(params);
  }
  if (config.task == "cartpole") {
    CartPoleParams params = config.cartpole;
    params.sim_dt = config.planner.sim_dt;
    return std::make_unique<CartPoleEnv>(params);
  }
  if (config.task == "pusher") {
    PlanarPusherParams params = config.pusher;
    params.sim_dt = config.planner.sim_dt;
    return std::make_unique<PlanarPusherEnv>(params);
  }
  if (config.task == "hopper") {
    HopperParams params = config.hopper;
    params.sim_dt = config.planner.sim_dt;
    return std::make_unique<HopperEnv>(params);
  }
  throw std::invalid_argument("unknown task: " + config.task);
}

CostSpec BuildCost(const TaskConfig& config, const EnvModel& env) {
  CostSpec spec;
  spec.terminal_weight = config.cost.terminal_weight;
  spec.tracking.q_diag = config.cost.q_diag;
  spec.tracking.r_diag = config.cost.r_diag;

  if (config.cost.x_ref.size() > 0) {
    spec.tracking.x_ref = config.cost.x_ref;
  } else if (config.task == "double_integrator") {
    spec.tracking.x_ref = Eigen::VectorXd::Zero(4);
    spec.tracking.x_ref.head<2>() = config.success.goal_position;
  } else if (config.task == "pusher") {
    // robot reference starts at the box and is re-anchored per plan step
    spec.tracking.x_ref = Eigen::VectorXd::Zero(10);
    spec.tracking.x_ref.head<2>() = config.pusher.box_start;
  } else if (config.task == "hopper") {
    spec.tracking.x_ref = env.initial_state();
  } else {
    spec.tracking.x_ref = Eigen::VectorXd::Zero(env.state_dim());
  }

  if (config.task == "hopper") {
    if (config.use_gait_reference) {
      const GaitParams gait = config.gait;
      spec.tracking.u_ref = [gait](double t) { return GaitReference(t, gait); };
      // track the gait's stand pose instead of the equilibrium crouch
      spec.tracking.x_ref(0) = config.gait.stand_pose(0);
    } else {
      spec.tracking.u_ref = MakeConstantReference(env.nominal_control());
    }
  }

  if (config.task == "pusher" && config.cost.q_box > 0.0) {
    spec.kind = CostSpec::Kind::kBoxPush;
    spec.box.q_box = config.cost.q_box;
    spec.box.box_target = config.cost.box_target;
    spec.box.goal_tolerance = config.cost.goal_tolerance;
    spec.box.box_state_index = PlanarPusherEnv::kBoxPositionIndex;
  }

  ValidateCostSpec(spec, env.state_dim(), env.control_dim());
  return spec;
}

EkfModelConfig DoubleIntegratorEkfModel(const EstimatorConfig& config) {
  EkfModelConfig model;
  model.nq = 2;
  model.pose_indices = {0, 1};
  model.accel_indices = {0, 1};
  model.gyro_index = -1;
  model.accel_noise_density = config.accel_noise_density;
  return model;
}

}  // namespace harness
}  // namespace mppi
