#include "pushsim/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "pushsim/scenario.hpp"

namespace pushsim {

void RewardConfig::validate() const {
  if (!(sigma_reach > 0.0 && sigma_push > 0.0 && sigma_track > 0.0 && sigma_align > 0.0))
    throw std::invalid_argument("rewards: all sigma must be > 0");
  if (!(w_reach > 0.0 && w_push > 0.0 && w_track > 0.0 && w_align > 0.0))
    throw std::invalid_argument("rewards: task weights must be > 0");
  if (w_smooth > 0.0 || w_balance > 0.0 || w_upper > 0.0)
    throw std::invalid_argument("rewards: penalty weights must be <= 0");
  if (!(theta_fov > 0.0)) throw std::invalid_argument("rewards: theta_fov must be > 0");
}

double reach_reward(double d_left, double d_right, const RewardConfig& cfg) {
  if (d_left < 0.0 || d_right < 0.0)
    throw std::domain_error("reach_reward: negative distance");
  double s2 = cfg.sigma_reach * cfg.sigma_reach;
  double rl = std::exp(-d_left * d_left / s2);
  double rr = std::exp(-d_right * d_right / s2);
  double denom = rl + rr;
  if (denom == 0.0) return 0.0;  // limit convention
  return 2.0 * rl * rr / denom;
}

double push_reward(const Vec2& obj, const Vec2& goal, const RewardConfig& cfg) {
  double d2 = (goal - obj).norm_sq();
  return std::exp(-d2 / (cfg.sigma_push * cfg.sigma_push));
}

double track_reward(double theta, const RewardConfig& cfg) {
  if (std::abs(theta) > cfg.theta_fov) return 0.0;
  return std::exp(-theta * theta / (cfg.sigma_track * cfg.sigma_track));
}

double alignment_angle(const Vec2& robot, const Vec2& obj, const Vec2& goal) {
  Vec2 to_robot = robot - obj;
  Vec2 to_goal = goal - obj;
  if ((to_robot.x == 0.0 && to_robot.y == 0.0) ||
      (to_goal.x == 0.0 && to_goal.y == 0.0))
    throw std::domain_error("alignment_angle: coincident points");
  double phi = std::acos(std::clamp(
      to_robot.dot(to_goal) / (to_robot.norm() * to_goal.norm()), -1.0, 1.0));
  return phi / kPi;
}

double align_reward(const Vec2& robot, const Vec2& obj, const Vec2& goal,
                    const RewardConfig& cfg) {
  double theta_align = alignment_angle(robot, obj, goal);
  double e = 1.0 - theta_align;
  return std::exp(-e * e / (cfg.sigma_align * cfg.sigma_align));
}

RewardBreakdown step_reward(const WorldState& world, const CommandVector& cmd,
                            const CommandVector& prev_cmd, const RewardConfig& cfg) {
  RewardBreakdown b;
  double dl = box_surface_distance(world.obj_spec, world.obj.pose, world.robot.ee_left);
  double dr = box_surface_distance(world.obj_spec, world.obj.pose, world.robot.ee_right);
  b.reach = reach_reward(dl, dr, cfg);
  b.push = push_reward(world.obj.pose.position, world.goal, cfg);
  // degenerate coincidences (object exactly at goal / robot exactly at the
  // object center) take the saturated limit instead of throwing mid-episode
  Vec2 obj = world.obj.pose.position;
  bool robot_at_obj = (obj - world.robot.base.position).norm() < 1e-9;
  bool obj_at_goal = (world.goal - obj).norm() < 1e-9;
  b.track = robot_at_obj ? 1.0 : track_reward(bearing(world.robot.base, obj), cfg);
  b.align = (robot_at_obj || obj_at_goal)
                ? 1.0
                : align_reward(world.robot.base.position, obj, world.goal, cfg);
  b.smooth_pen = cmd.diff_norm_sq(prev_cmd);
  b.balance_pen = world.obj.tilt * world.obj.tilt;
  double qn = 0.0;
  for (double q : world.robot.arm_q) qn += q * q;
  b.upper_pen = qn;
  b.total = cfg.w_reach * b.reach + cfg.w_push * b.push + cfg.w_track * b.track +
            cfg.w_align * b.align + cfg.w_smooth * b.smooth_pen +
            cfg.w_balance * b.balance_pen + cfg.w_upper * b.upper_pen;
  return b;
}

}  // namespace pushsim
