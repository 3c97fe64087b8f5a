#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "pushsim/config.hpp"
#include "pushsim/policy.hpp"
#include "pushsim/scenario.hpp"
#include "pushsim/sensors.hpp"

namespace pushsim {

struct EnvOptions {
  std::string preset = "fa";
  bool use_perception = false;  // render depth + run the estimator at 5 Hz
  bool augment = false;         // depth augmentations + extrinsic jitter
  bool trace = false;
};

struct StepResult {
  ObservationSet obs;
  RewardBreakdown reward;
  EpisodeStatus status = EpisodeStatus::Running;
  bool contact = false;
  double applied_force = 0.0;
  bool command_clamped = false;
  int step = 0;
};

// One 50 Hz simulation loop: observe -> act -> step_robot -> resolve_push ->
// stability_update -> step_reward -> update_status. Owns the per-episode RNG
// streams (scenario / physics / sensors), so draws in one subsystem never
// shift another.
class Environment {
 public:
  Environment(SimConfig cfg, EnvOptions opt);

  ObservationSet reset(uint64_t seed);
  ObservationSet reset(uint64_t seed, const ScenarioConfig& scenario_override);
  StepResult step(const CommandVector& action);

  // Issues a new goal without resetting (sequential-goal scenarios); extends
  // the episode clock budget by extra_time.
  void resume_with_goal(const Vec2& goal, double extra_time);

  const WorldState& world() const { return world_; }
  WorldState& mutable_world() { return world_; }
  const ObjectEstimate& estimate() const { return estimate_; }
  const SimConfig& config() const { return cfg_; }
  const EnvOptions& options() const { return opt_; }
  const ControllerSpec& controller() const { return ctrl_; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  const CommandVector& last_cmd() const { return last_cmd_; }
  int command_violations() const { return violations_; }
  uint64_t episode_seed() const { return seed_; }
  double effective_timeout() const { return timeout_; }
  ObservationSet observe() const;

 private:
  void refresh_perception();

  SimConfig cfg_;
  EnvOptions opt_;
  ControllerSpec ctrl_;
  WorldState world_;
  ScenarioConfig active_scenario_;
  CameraModel episode_cam_;
  std::vector<DepthImage> depth_stack_;
  ObjectEstimate estimate_;
  ObjectEstimate raw_estimate_;
  Pose2 est_frame_;
  CommandVector last_cmd_;
  std::unique_ptr<RngStream> phys_rng_;
  std::unique_ptr<RngStream> sensor_rng_;
  std::vector<TraceRow> trace_;
  int violations_ = 0;
  uint64_t seed_ = 0;
  double timeout_ = 0.0;
  bool last_contact_ = false;
};

// Policy callback: full world (privileged), assembled observations, and the
// current depth-based estimate.
using PolicyFn = std::function<CommandVector(
    const WorldState&, const ObservationSet&, const ObjectEstimate&)>;

// Named policy factory: "teacher" | "student" | "greedy".
PolicyFn make_policy(const std::string& name, const TeacherParams& params,
                     const SimConfig& cfg);

EpisodeRecord run_episode(Environment& env, uint64_t seed, const PolicyFn& policy,
                          const std::string& policy_name = "",
                          const ScenarioConfig* scenario_override = nullptr);

}  // namespace pushsim
