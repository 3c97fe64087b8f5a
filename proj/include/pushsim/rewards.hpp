#pragma once

#include "pushsim/core.hpp"
#include "pushsim/physics.hpp"

namespace pushsim {

struct WorldState;  // scenario.hpp

struct RewardConfig {
  double sigma_reach = 2.0;
  double sigma_push = 10.0;
  double sigma_track = 0.5;
  double sigma_align = 0.25;
  double w_reach = 1.25;
  double w_push = 2.5;
  double w_track = 1.0;
  double w_align = 2.0;
  double w_smooth = -1.0;
  double w_balance = -0.5;
  double w_upper = -0.5;
  double theta_fov = kPi / 3.0;  // half horizontal FOV

  void validate() const;
};

struct RewardBreakdown {
  double reach = 0.0;
  double push = 0.0;
  double track = 0.0;
  double align = 0.0;
  double smooth_pen = 0.0;
  double balance_pen = 0.0;
  double upper_pen = 0.0;
  double total = 0.0;
};

// Harmonic mean of exp(-d^2/sigma^2) per end-effector.
double reach_reward(double d_left, double d_right, const RewardConfig& cfg);

// exp(-||goal - obj||^2 / sigma_push^2)
double push_reward(const Vec2& obj, const Vec2& goal, const RewardConfig& cfg);

// exp(-theta^2 / sigma_track^2) inside the FOV, exactly 0 outside.
double track_reward(double theta, const RewardConfig& cfg);

// phi = unsigned angle between (robot - obj) and (goal - obj);
// returns exp(-(1 - phi/pi)^2 / sigma_align^2).
double align_reward(const Vec2& robot, const Vec2& obj, const Vec2& goal,
                    const RewardConfig& cfg);

// Unsigned angle used by align_reward, normalized to [0, 1].
double alignment_angle(const Vec2& robot, const Vec2& obj, const Vec2& goal);

RewardBreakdown step_reward(const WorldState& world, const CommandVector& cmd,
                            const CommandVector& prev_cmd, const RewardConfig& cfg);

}  // namespace pushsim
