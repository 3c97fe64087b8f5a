#pragma once

#include <array>
#include <string>

#include "pushsim/core.hpp"

namespace pushsim {

constexpr int kArmDof = 10;
constexpr int kActionDim = 13;  // vx, vy, v_ang + 10 arm residuals

struct ObjectSpec {
  double mass = 5.0;        // kg
  double friction_mu = 0.5;
  double width = 1.0;       // m, along object x
  double depth = 1.0;       // m, along object y
  double height = 0.7;      // m
  Vec2 com_offset;          // in object frame

  void validate() const;
};

struct ObjectState {
  Pose2 pose;
  Vec2 lin_vel;
  double ang_vel = 0.0;
  double tilt = 0.0;  // held at 0 in the planar model
};

struct CommandVector {
  double vx = 0.0;     // m/s, base frame
  double vy = 0.0;     // m/s, base frame
  double v_ang = 0.0;  // rad/s
  std::array<double, kArmDof> arm_residual{};

  // Clamp to the command box; returns true if anything was out of bounds.
  bool clamp();
  double diff_norm_sq(const CommandVector& prev) const;
  std::array<double, kActionDim> flat() const;
  static CommandVector from_flat(const std::array<double, kActionDim>& a);
};

constexpr double kMaxLinVel = 1.0;    // m/s
constexpr double kMaxAngVel = 1.5;    // rad/s
constexpr double kMaxArmResidual = 0.8;  // rad

struct RobotState {
  Pose2 base;
  Vec2 lin_vel;          // world frame
  double ang_vel = 0.0;
  std::array<double, kArmDof> arm_q{};
  std::array<double, kArmDof> arm_qd{};
  Vec2 ee_left;
  Vec2 ee_right;
  bool fallen = false;
};

struct ControllerSpec {
  std::string name = "fa";
  bool force_adaptive = true;
  double f_max = 60.0;             // N
  double hazard_base = 1e-4;       // per-step
  double hazard_force_gain = 0.002;
  double hazard_jerk_gain = 0.01;

  void validate() const;
};

struct PhysicsConfig {
  double gravity = 9.81;
  double dt = 0.02;           // 50 Hz control loop
  double tau_v = 0.1;         // velocity tracking time constant
  double arm_rate = 2.0;      // rad/s joint rate limit
  double k_rot = 1.5;         // rad of yaw per (m translation * m lever)
  double ee_radius = 0.06;    // contact disc radius
  // ee kinematics: forward reach 0.45 + 0.3*q[0|5], lateral +-0.15 + 0.2*q[1|6]
  double ee_forward = 0.45;
  double ee_forward_gain = 0.3;
  double ee_lateral = 0.15;
  double ee_lateral_gain = 0.2;
};

// Minimum force to initiate sliding under Coulomb friction: mu*m*g.
double breakaway_force(const ObjectSpec& spec, double g);

// End-effector world positions from (base, arm_q).
void update_ee(RobotState& r, const PhysicsConfig& cfg);

// Integrates commanded velocities with a first-order lag (tau_v) and
// rate-limited arm motion. Throws if the robot has fallen.
RobotState step_robot(const RobotState& state, const CommandVector& cmd,
                      double dt, const PhysicsConfig& cfg);

struct PushResult {
  ObjectState obj;
  RobotState robot;  // pushed back out of the box when blocked
  bool contact = false;
  double applied_force = 0.0;
  double required_force = 0.0;
};

// Quasi-static penetration resolution of both ee discs against the box
// footprint (left disc first, then right). If the controller force budget
// covers the breakaway force the box translates along the contact normal
// and yaws by k_rot * lever * translation; otherwise the robot is blocked.
PushResult resolve_push(const RobotState& robot, const ObjectSpec& obj_spec,
                        const ObjectState& obj_state, const ControllerSpec& ctrl,
                        double dt, const PhysicsConfig& cfg);

// Per-step fall hazard:
//   lambda = base + force_gain*max(0, f_req - f_max)/f_max + jerk_gain*||cmd - prev||^2
double fall_hazard(const ControllerSpec& ctrl, double applied_force,
                   double f_req, const CommandVector& cmd,
                   const CommandVector& prev_cmd);

RobotState stability_update(const RobotState& robot, const ControllerSpec& ctrl,
                            double applied_force, double f_req,
                            const CommandVector& cmd, const CommandVector& prev_cmd,
                            RngStream& rng);

// Distance from a point to the box footprint boundary (0 when inside).
double box_surface_distance(const ObjectSpec& spec, const Pose2& pose, const Vec2& p);

}  // namespace pushsim
