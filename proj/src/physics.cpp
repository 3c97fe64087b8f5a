#include "pushsim/physics.hpp"

#include <algorithm>
#include <cmath>

namespace pushsim {

void ObjectSpec::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("ObjectSpec: mass must be > 0");
  if (friction_mu < 0.05 || friction_mu > 2.0)
    throw std::invalid_argument("ObjectSpec: friction_mu out of [0.05, 2.0]");
  if (!(width > 0.0 && depth > 0.0 && height > 0.0))
    throw std::invalid_argument("ObjectSpec: dims must be > 0");
  if (std::abs(com_offset.x) >= 0.5 * width || std::abs(com_offset.y) >= 0.5 * depth)
    throw std::invalid_argument("ObjectSpec: com_offset outside footprint");
}

void ControllerSpec::validate() const {
  if (!(f_max > 0.0)) throw std::invalid_argument("ControllerSpec: f_max must be > 0");
  if (hazard_base < 0.0 || hazard_force_gain < 0.0 || hazard_jerk_gain < 0.0)
    throw std::invalid_argument("ControllerSpec: hazard terms must be >= 0");
}

bool CommandVector::clamp() {
  bool violated = false;
  auto clip = [&](double& v, double lim) {
    if (v > lim) { v = lim; violated = true; }
    if (v < -lim) { v = -lim; violated = true; }
  };
  clip(vx, kMaxLinVel);
  clip(vy, kMaxLinVel);
  clip(v_ang, kMaxAngVel);
  for (double& q : arm_residual) clip(q, kMaxArmResidual);
  return violated;
}

double CommandVector::diff_norm_sq(const CommandVector& prev) const {
  double s = 0.0;
  auto sq = [](double v) { return v * v; };
  s += sq(vx - prev.vx) + sq(vy - prev.vy) + sq(v_ang - prev.v_ang);
  for (int i = 0; i < kArmDof; ++i) s += sq(arm_residual[i] - prev.arm_residual[i]);
  return s;
}

std::array<double, kActionDim> CommandVector::flat() const {
  std::array<double, kActionDim> a;
  a[0] = vx;
  a[1] = vy;
  a[2] = v_ang;
  for (int i = 0; i < kArmDof; ++i) a[3 + i] = arm_residual[i];
  return a;
}

CommandVector CommandVector::from_flat(const std::array<double, kActionDim>& a) {
  CommandVector c;
  c.vx = a[0];
  c.vy = a[1];
  c.v_ang = a[2];
  for (int i = 0; i < kArmDof; ++i) c.arm_residual[i] = a[3 + i];
  return c;
}

double breakaway_force(const ObjectSpec& spec, double g) {
  return spec.friction_mu * spec.mass * g;
}

void update_ee(RobotState& r, const PhysicsConfig& cfg) {
  double fwd_l = cfg.ee_forward + cfg.ee_forward_gain * r.arm_q[0];
  double lat_l = cfg.ee_lateral + cfg.ee_lateral_gain * r.arm_q[1];
  double fwd_r = cfg.ee_forward + cfg.ee_forward_gain * r.arm_q[5];
  double lat_r = -cfg.ee_lateral + cfg.ee_lateral_gain * r.arm_q[6];
  r.ee_left = from_frame(r.base, {fwd_l, lat_l});
  r.ee_right = from_frame(r.base, {fwd_r, lat_r});
}

RobotState step_robot(const RobotState& state, const CommandVector& cmd,
                      double dt, const PhysicsConfig& cfg) {
  if (state.fallen) throw std::logic_error("step_robot: robot has fallen");
  RobotState r = state;

  double decay = std::exp(-dt / cfg.tau_v);
  double lag = cfg.tau_v * (1.0 - decay);

  // commanded body-frame velocity expressed in the world frame at current yaw
  Vec2 v_target = Vec2{cmd.vx, cmd.vy}.rotated(r.base.yaw);
  Vec2 dv = state.lin_vel - v_target;
  r.base.position = r.base.position + v_target * dt + dv * lag;
  r.lin_vel = v_target + dv * decay;

  double dw = state.ang_vel - cmd.v_ang;
  r.base.yaw = wrap_angle(r.base.yaw + cmd.v_ang * dt + dw * lag);
  r.ang_vel = cmd.v_ang + dw * decay;

  double max_dq = cfg.arm_rate * dt;
  for (int i = 0; i < kArmDof; ++i) {
    double target = std::clamp(cmd.arm_residual[i], -kMaxArmResidual, kMaxArmResidual);
    double dq = std::clamp(target - r.arm_q[i], -max_dq, max_dq);
    r.arm_q[i] += dq;
    r.arm_qd[i] = dq / dt;
  }
  update_ee(r, cfg);
  return r;
}

namespace {

struct DiscContact {
  bool hit = false;
  double penetration = 0.0;
  Vec2 push_normal;   // world; direction the box yields along
  Vec2 contact_point; // world, on the box surface
};

DiscContact disc_vs_box(const Vec2& center, double radius,
                        const ObjectSpec& spec, const Pose2& pose) {
  DiscContact c;
  Vec2 q = to_frame(pose, center);
  double hx = 0.5 * spec.width, hy = 0.5 * spec.depth;
  double cx = std::clamp(q.x, -hx, hx);
  double cy = std::clamp(q.y, -hy, hy);
  Vec2 local_normal, local_contact;
  if (cx == q.x && cy == q.y) {
    // disc center inside the footprint: exit through the nearest face
    double dx = hx - std::abs(q.x);
    double dy = hy - std::abs(q.y);
    if (dx <= dy) {
      double s = q.x >= 0.0 ? 1.0 : -1.0;
      local_normal = {s, 0.0};
      local_contact = {s * hx, q.y};
      c.penetration = radius + dx;
    } else {
      double s = q.y >= 0.0 ? 1.0 : -1.0;
      local_normal = {0.0, s};
      local_contact = {q.x, s * hy};
      c.penetration = radius + dy;
    }
  } else {
    Vec2 d = {q.x - cx, q.y - cy};
    double dist = d.norm();
    if (dist >= radius) return c;
    c.penetration = radius - dist;
    local_normal = d * (1.0 / dist);
    local_contact = {cx, cy};
  }
  c.hit = true;
  // box yields away from the disc
  c.push_normal = (-local_normal).rotated(pose.yaw);
  c.contact_point = from_frame(pose, local_contact);
  return c;
}

}  // namespace

double box_surface_distance(const ObjectSpec& spec, const Pose2& pose, const Vec2& p) {
  Vec2 q = to_frame(pose, p);
  double hx = 0.5 * spec.width, hy = 0.5 * spec.depth;
  double dx = std::max(std::abs(q.x) - hx, 0.0);
  double dy = std::max(std::abs(q.y) - hy, 0.0);
  return std::hypot(dx, dy);
}

PushResult resolve_push(const RobotState& robot, const ObjectSpec& obj_spec,
                        const ObjectState& obj_state, const ControllerSpec& ctrl,
                        double dt, const PhysicsConfig& cfg) {
  PushResult res;
  res.obj = obj_state;
  res.robot = robot;
  double f_break = breakaway_force(obj_spec, cfg.gravity);

  Pose2 start_pose = obj_state.pose;
  bool movable = ctrl.f_max >= f_break;

  const Vec2* ees[2] = {&res.robot.ee_left, &res.robot.ee_right};
  for (int i = 0; i < 2; ++i) {
    DiscContact c = disc_vs_box(*ees[i], cfg.ee_radius, obj_spec, res.obj.pose);
    if (!c.hit) continue;
    res.contact = true;
    if (movable) {
      // resolve in thin slices, refreshing the contact geometry each time,
      // so the result is step-size independent (matches a dt/10 oracle)
      for (int guard = 0; c.hit && guard < 64; ++guard) {
        double moved = std::min(c.penetration, 0.001);
        Vec2 com_world = from_frame(res.obj.pose, obj_spec.com_offset);
        double lever = c.push_normal.cross(c.contact_point - com_world);
        double dyaw = cfg.k_rot * lever * moved;
        // translate along the contact normal, then rotate about the COM
        Vec2 center = res.obj.pose.position + c.push_normal * moved;
        Vec2 pivot = com_world + c.push_normal * moved;
        res.obj.pose.position = pivot + (center - pivot).rotated(dyaw);
        res.obj.pose.yaw = wrap_angle(res.obj.pose.yaw + dyaw);
        c = disc_vs_box(*ees[i], cfg.ee_radius, obj_spec, res.obj.pose);
      }
    } else {
      // box holds; robot's advance is blocked along the normal
      res.robot.base.position = res.robot.base.position - c.push_normal * c.penetration;
      update_ee(res.robot, cfg);
    }
  }

  if (res.contact) {
    res.required_force = f_break;
    res.applied_force = std::min(f_break, ctrl.f_max);
    res.obj.lin_vel = (res.obj.pose.position - start_pose.position) * (1.0 / dt);
    res.obj.ang_vel = wrap_angle(res.obj.pose.yaw - start_pose.yaw) / dt;
  } else {
    res.obj.lin_vel = {0.0, 0.0};
    res.obj.ang_vel = 0.0;
  }
  return res;
}

double fall_hazard(const ControllerSpec& ctrl, double /*applied_force*/,
                   double f_req, const CommandVector& cmd,
                   const CommandVector& prev_cmd) {
  double deficit = std::max(0.0, f_req - ctrl.f_max) / ctrl.f_max;
  return ctrl.hazard_base + ctrl.hazard_force_gain * deficit +
         ctrl.hazard_jerk_gain * cmd.diff_norm_sq(prev_cmd);
}

RobotState stability_update(const RobotState& robot, const ControllerSpec& ctrl,
                            double applied_force, double f_req,
                            const CommandVector& cmd, const CommandVector& prev_cmd,
                            RngStream& rng) {
  if (robot.fallen) throw std::logic_error("stability_update: robot has fallen");
  double lambda = fall_hazard(ctrl, applied_force, f_req, cmd, prev_cmd);
  RobotState r = robot;
  if (rng.uniform() < std::min(lambda, 1.0)) r.fallen = true;
  return r;
}

}  // namespace pushsim
