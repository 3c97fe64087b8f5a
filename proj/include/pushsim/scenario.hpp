#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pushsim/core.hpp"
#include "pushsim/physics.hpp"
#include "pushsim/rewards.hpp"

namespace pushsim {

enum class EpisodeStatus { Running, Success, PreContactFall, PostContactFall, Timeout };
enum class GoalSector { Front, Lateral, Rear };
enum class MassBin { Light, Medium, Heavy, ExtraHeavy };

const char* to_string(EpisodeStatus s);
const char* to_string(GoalSector s);
const char* to_string(MassBin b);

struct ScenarioConfig {
  double mass_min = 1.0, mass_max = 8.0;          // kg
  double friction_min = 0.1, friction_max = 1.0;
  double goal_radius_min = 2.5, goal_radius_max = 3.5;  // m
  double goal_angle_min = -kPi, goal_angle_max = kPi;   // full 360 arc
  // sample |angle| in [min, max] with a random sign (sector evaluation cells)
  bool goal_angle_symmetric = false;
  double object_bearing = kPi / 3.0;              // +-60 deg
  double object_dist_min = 1.8, object_dist_max = 2.2;  // m
  double footprint_min = 0.8, footprint_max = 1.2;      // m
  double height_min = 0.5, height_max = 0.8;            // m
  double com_offset_max = 0.0;                    // m, radial
  double timeout = 40.0;                          // s (2000 steps at 50 Hz)
  double success_dist = 0.3;                      // m
  double success_hold = 2.0;                      // s

  void validate() const;
};

struct WorldState {
  RobotState robot;
  ObjectSpec obj_spec;
  ObjectState obj;
  Vec2 goal;
  double t = 0.0;
  int step = 0;
  double hold_timer = 0.0;
  EpisodeStatus status = EpisodeStatus::Running;
  bool ever_contacted = false;
};

struct TraceRow {
  double t = 0.0;
  Pose2 robot;
  std::array<double, kArmDof> arm_q{};
  Pose2 obj;
  double obj_tilt = 0.0;
  Vec2 ee_left, ee_right;
  Vec2 goal;
  CommandVector cmd;
  RewardBreakdown reward;
  bool contact = false;
  double applied_force = 0.0;
  EpisodeStatus status = EpisodeStatus::Running;
};

struct EpisodeRecord {
  EpisodeStatus outcome = EpisodeStatus::Running;
  int steps = 0;
  double return_sum = 0.0;
  int command_violations = 0;
  uint64_t seed = 0;
  std::string preset;
  std::string policy;
  GoalSector goal_sector = GoalSector::Front;
  MassBin mass_bin = MassBin::Light;
  bool mass_ood = false;
  double goal_angle = 0.0;
  double mass = 0.0;
  std::vector<TraceRow> trace;  // filled only when tracing is enabled
};

// Robot at origin facing +x; object within the FOV cone; goal on the
// 360-degree annulus. Resamples the goal if it lands inside the footprint.
WorldState sample_scenario(const ScenarioConfig& cfg, RngStream& rng);

// |theta| bins with boundaries going to the lower-named bin.
GoalSector classify_goal_sector(double theta);

// Light 1-3, Medium 3-5, Heavy 5-8, ExtraHeavy 8-12 kg; boundaries to the
// lower bin. Throws outside [1, 12].
MassBin classify_mass_bin(double mass);
bool mass_bin_is_ood(MassBin b);

// Terminal bookkeeping for one elapsed step. Throws on a terminal state.
WorldState update_status(const WorldState& world, double dt, const ScenarioConfig& cfg);

}  // namespace pushsim
