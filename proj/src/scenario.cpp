#include "pushsim/scenario.hpp"

#include <cmath>

namespace pushsim {

const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Running: return "Running";
    case EpisodeStatus::Success: return "Success";
    case EpisodeStatus::PreContactFall: return "PreContactFall";
    case EpisodeStatus::PostContactFall: return "PostContactFall";
    case EpisodeStatus::Timeout: return "Timeout";
  }
  return "?";
}

const char* to_string(GoalSector s) {
  switch (s) {
    case GoalSector::Front: return "Front";
    case GoalSector::Lateral: return "Lateral";
    case GoalSector::Rear: return "Rear";
  }
  return "?";
}

const char* to_string(MassBin b) {
  switch (b) {
    case MassBin::Light: return "Light";
    case MassBin::Medium: return "Medium";
    case MassBin::Heavy: return "Heavy";
    case MassBin::ExtraHeavy: return "ExtraHeavy";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  auto range_ok = [](double lo, double hi) { return lo <= hi; };
  if (!(mass_min > 0.0)) throw std::invalid_argument("scenario: mass must be > 0");
  if (!range_ok(mass_min, mass_max)) throw std::invalid_argument("scenario: mass range");
  if (friction_min < 0.05 || !range_ok(friction_min, friction_max))
    throw std::invalid_argument("scenario: friction range");
  if (!range_ok(goal_radius_min, goal_radius_max) || goal_radius_min <= 0.0)
    throw std::invalid_argument("scenario: goal radius range");
  if (!range_ok(goal_angle_min, goal_angle_max))
    throw std::invalid_argument("scenario: goal angle range");
  if (!range_ok(object_dist_min, object_dist_max) || object_dist_min <= 0.0)
    throw std::invalid_argument("scenario: object distance range");
  if (!range_ok(footprint_min, footprint_max) || footprint_min <= 0.0)
    throw std::invalid_argument("scenario: footprint range");
  if (!range_ok(height_min, height_max) || height_min <= 0.0)
    throw std::invalid_argument("scenario: height range");
  if (com_offset_max < 0.0) throw std::invalid_argument("scenario: com_offset_max");
  if (!(timeout > 0.0)) throw std::invalid_argument("scenario: timeout must be > 0");
}

WorldState sample_scenario(const ScenarioConfig& cfg, RngStream& rng) {
  cfg.validate();
  WorldState w;
  w.robot.base = {{0.0, 0.0}, 0.0};

  double obj_bearing = rng.uniform(-cfg.object_bearing, cfg.object_bearing);
  double obj_dist = rng.uniform(cfg.object_dist_min, cfg.object_dist_max);
  w.obj.pose.position = {obj_dist * std::cos(obj_bearing),
                         obj_dist * std::sin(obj_bearing)};
  w.obj.pose.yaw = wrap_angle(rng.uniform(-kPi, kPi));

  w.obj_spec.mass = rng.uniform(cfg.mass_min, cfg.mass_max);
  w.obj_spec.friction_mu = rng.uniform(cfg.friction_min, cfg.friction_max);
  w.obj_spec.width = rng.uniform(cfg.footprint_min, cfg.footprint_max);
  w.obj_spec.depth = rng.uniform(cfg.footprint_min, cfg.footprint_max);
  w.obj_spec.height = rng.uniform(cfg.height_min, cfg.height_max);
  if (cfg.com_offset_max > 0.0) {
    double r = cfg.com_offset_max * std::sqrt(rng.uniform());
    double a = rng.uniform(-kPi, kPi);
    w.obj_spec.com_offset = {r * std::cos(a), r * std::sin(a)};
  }
  w.obj_spec.validate();

  for (int attempt = 0; attempt < 64; ++attempt) {
    double ga = rng.uniform(cfg.goal_angle_min, cfg.goal_angle_max);
    if (cfg.goal_angle_symmetric && rng.uniform() < 0.5) ga = -ga;
    double gr = rng.uniform(cfg.goal_radius_min, cfg.goal_radius_max);
    w.goal = {gr * std::cos(ga), gr * std::sin(ga)};
    if (box_surface_distance(w.obj_spec, w.obj.pose, w.goal) > 0.0) break;
  }

  PhysicsConfig pcfg;  // ee geometry defaults
  update_ee(w.robot, pcfg);
  return w;
}

GoalSector classify_goal_sector(double theta) {
  double a = std::abs(wrap_angle(theta));
  if (a <= kPi / 3.0) return GoalSector::Front;
  if (a <= 2.0 * kPi / 3.0) return GoalSector::Lateral;
  return GoalSector::Rear;
}

MassBin classify_mass_bin(double mass) {
  if (mass < 1.0 || mass > 12.0)
    throw std::out_of_range("classify_mass_bin: mass outside [1, 12] kg");
  if (mass <= 3.0) return MassBin::Light;
  if (mass <= 5.0) return MassBin::Medium;
  if (mass <= 8.0) return MassBin::Heavy;
  return MassBin::ExtraHeavy;
}

bool mass_bin_is_ood(MassBin b) { return b == MassBin::ExtraHeavy; }

WorldState update_status(const WorldState& world, double dt, const ScenarioConfig& cfg) {
  if (world.status != EpisodeStatus::Running)
    throw std::logic_error("update_status: episode already terminal");
  WorldState w = world;
  if (w.robot.fallen) {
    w.status = w.ever_contacted ? EpisodeStatus::PostContactFall
                                : EpisodeStatus::PreContactFall;
    return w;
  }
  double d = (w.obj.pose.position - w.goal).norm();
  if (d <= cfg.success_dist) {
    w.hold_timer += dt;
    if (w.hold_timer >= cfg.success_hold) {
      w.hold_timer = cfg.success_hold;
      w.status = EpisodeStatus::Success;
      return w;
    }
  } else {
    w.hold_timer = 0.0;
  }
  if (w.t >= cfg.timeout) w.status = EpisodeStatus::Timeout;
  return w;
}

}  // namespace pushsim
