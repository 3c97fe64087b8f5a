#include "pushsim/env.hpp"

#include <cmath>

namespace pushsim {

Environment::Environment(SimConfig cfg, EnvOptions opt)
    : cfg_(std::move(cfg)), opt_(std::move(opt)) {
  auto it = cfg_.presets.find(opt_.preset);
  if (it == cfg_.presets.end())
    throw std::invalid_argument("env: unknown controller preset '" + opt_.preset + "'");
  ctrl_ = it->second;
}

ObservationSet Environment::reset(uint64_t seed) {
  return reset(seed, cfg_.scenario);
}

ObservationSet Environment::reset(uint64_t seed, const ScenarioConfig& scenario_override) {
  seed_ = seed;
  active_scenario_ = scenario_override;
  timeout_ = active_scenario_.timeout;
  RngStream scen_rng(seed, "scenario");
  world_ = sample_scenario(active_scenario_, scen_rng);
  update_ee(world_.robot, cfg_.physics);

  phys_rng_ = std::make_unique<RngStream>(seed, "physics");
  sensor_rng_ = std::make_unique<RngStream>(seed, "sensors");
  last_cmd_ = CommandVector{};
  last_contact_ = false;
  violations_ = 0;
  trace_.clear();
  estimate_ = ObjectEstimate{};
  raw_estimate_ = ObjectEstimate{};
  est_frame_ = Pose2{};

  episode_cam_ = cfg_.camera;
  if (opt_.use_perception) {
    if (opt_.augment)
      episode_cam_ = perturb_extrinsics(cfg_.camera, cfg_.augment, *sensor_rng_);
    depth_stack_.clear();
    refresh_perception();
    while (depth_stack_.size() < kDepthStackLen)
      depth_stack_.insert(depth_stack_.begin(), depth_stack_.front());
  } else {
    DepthImage blank;
    blank.width = cfg_.camera.width;
    blank.height = cfg_.camera.height;
    blank.pixels.assign(static_cast<size_t>(blank.width) * blank.height, 0.0);
    depth_stack_.assign(kDepthStackLen, blank);
  }
  return observe();
}

void Environment::refresh_perception() {
  DepthImage img = render_depth(world_, episode_cam_);
  if (opt_.augment) {
    int gr = ground_boundary_row(episode_cam_, world_.robot.base);
    img = apply_augmentations(img, cfg_.augment, episode_cam_.far_plane, gr,
                              *sensor_rng_);
  }
  depth_stack_.push_back(std::move(img));
  while (depth_stack_.size() > kDepthStackLen) depth_stack_.erase(depth_stack_.begin());
  ObjectEstimate raw = estimate_object_from_depth(depth_stack_, episode_cam_,
                                                  world_.robot, raw_estimate_);
  // one perception tick (0.2 s) of pipeline latency, re-expressed in the
  // current base frame
  if (raw_estimate_.confidence > 0.0) {
    Vec2 prev_world = from_frame(est_frame_, raw_estimate_.rel_pos);
    estimate_ = {to_frame(world_.robot.base, prev_world), raw_estimate_.confidence};
  } else {
    estimate_ = raw;
  }
  raw_estimate_ = raw;
  est_frame_ = world_.robot.base;
}

ObservationSet Environment::observe() const {
  return assemble_observations(world_, estimate_, last_cmd_, depth_stack_,
                               last_contact_);
}

StepResult Environment::step(const CommandVector& action) {
  if (world_.status != EpisodeStatus::Running)
    throw std::logic_error("env: step on a terminal episode, reset required");

  CommandVector cmd = action;
  bool clamped = cmd.clamp();
  if (clamped) ++violations_;

  CommandVector prev = last_cmd_;
  world_.robot = step_robot(world_.robot, cmd, cfg_.physics.dt, cfg_.physics);
  PushResult push = resolve_push(world_.robot, world_.obj_spec, world_.obj, ctrl_,
                                 cfg_.physics.dt, cfg_.physics);
  world_.robot = push.robot;
  world_.obj = push.obj;
  if (push.contact) world_.ever_contacted = true;

  world_.robot = stability_update(world_.robot, ctrl_, push.applied_force,
                                  push.required_force, cmd, prev, *phys_rng_);

  RewardBreakdown reward = step_reward(world_, cmd, prev, cfg_.rewards);

  world_.t += cfg_.physics.dt;
  world_.step += 1;
  ScenarioConfig status_cfg = active_scenario_;
  status_cfg.timeout = timeout_;
  world_ = update_status(world_, cfg_.physics.dt, status_cfg);

  last_cmd_ = cmd;
  last_contact_ = push.contact;

  if (opt_.use_perception && world_.status == EpisodeStatus::Running &&
      world_.step % 10 == 0 && !world_.robot.fallen)
    refresh_perception();

  StepResult res;
  res.reward = reward;
  res.status = world_.status;
  res.contact = push.contact;
  res.applied_force = push.applied_force;
  res.command_clamped = clamped;
  res.step = world_.step;
  res.obs = observe();

  if (opt_.trace) {
    TraceRow row;
    row.t = world_.t;
    row.robot = world_.robot.base;
    row.arm_q = world_.robot.arm_q;
    row.obj = world_.obj.pose;
    row.obj_tilt = world_.obj.tilt;
    row.ee_left = world_.robot.ee_left;
    row.ee_right = world_.robot.ee_right;
    row.goal = world_.goal;
    row.cmd = cmd;
    row.reward = reward;
    row.contact = push.contact;
    row.applied_force = push.applied_force;
    row.status = world_.status;
    trace_.push_back(row);
  }
  return res;
}

void Environment::resume_with_goal(const Vec2& goal, double extra_time) {
  world_.goal = goal;
  world_.status = EpisodeStatus::Running;
  world_.hold_timer = 0.0;
  timeout_ += extra_time;
}

namespace {

// Per-step slew limit on every command channel; keeps the jerk hazard term
// small through phase transitions. Stateful per policy instance: episodes
// start from the zero command, matching the env's prev_cmd after reset.
CommandVector slew_limit(const CommandVector& cmd, CommandVector& prev,
                         double max_delta) {
  auto a = cmd.flat();
  auto p = prev.flat();
  for (int i = 0; i < kActionDim; ++i)
    a[i] = p[i] + std::clamp(a[i] - p[i], -max_delta, max_delta);
  prev = CommandVector::from_flat(a);
  return prev;
}

constexpr double kSlewPerStep = 0.08;

}  // namespace

PolicyFn make_policy(const std::string& name, const TeacherParams& params,
                     const SimConfig& cfg) {
  PhysicsConfig pcfg = cfg.physics;
  if (name == "teacher") {
    TeacherParams p = params;
    auto prev = std::make_shared<CommandVector>();
    return [p, pcfg, prev](const WorldState& w, const ObservationSet&,
                           const ObjectEstimate&) {
      if (w.step == 0) *prev = CommandVector{};
      return slew_limit(teacher_act(w, p, pcfg), *prev, kSlewPerStep);
    };
  }
  if (name == "greedy") {
    TeacherParams p = params;
    p.align_enabled = false;
    auto prev = std::make_shared<CommandVector>();
    return [p, pcfg, prev](const WorldState& w, const ObservationSet&,
                           const ObjectEstimate&) {
      if (w.step == 0) *prev = CommandVector{};
      return slew_limit(teacher_act(w, p, pcfg), *prev, kSlewPerStep);
    };
  }
  if (name == "student") {
    TeacherParams p = params;
    double fp = 0.5 * (cfg.scenario.footprint_min + cfg.scenario.footprint_max);
    PilotGeometry geom;
    geom.avoid_radius = 0.5 * std::sqrt(2.0) * fp;
    geom.face_dist = 0.5 * fp;
    auto prev = std::make_shared<CommandVector>();
    return [p, pcfg, geom, prev](const WorldState& w, const ObservationSet& obs,
                                 const ObjectEstimate& est) {
      if (w.step == 0) *prev = CommandVector{};
      return slew_limit(student_act(obs, est, p, pcfg, geom), *prev, kSlewPerStep);
    };
  }
  throw std::invalid_argument("make_policy: unknown policy '" + name + "'");
}

EpisodeRecord run_episode(Environment& env, uint64_t seed, const PolicyFn& policy,
                          const std::string& policy_name,
                          const ScenarioConfig* scenario_override) {
  ObservationSet obs = scenario_override ? env.reset(seed, *scenario_override)
                                         : env.reset(seed);
  EpisodeRecord rec;
  rec.seed = seed;
  rec.preset = env.options().preset;
  rec.policy = policy_name;
  const WorldState& w0 = env.world();
  rec.goal_angle = std::atan2(w0.goal.y, w0.goal.x);
  rec.goal_sector = classify_goal_sector(rec.goal_angle);
  rec.mass = w0.obj_spec.mass;
  rec.mass_bin = classify_mass_bin(rec.mass);
  rec.mass_ood = mass_bin_is_ood(rec.mass_bin);

  while (env.world().status == EpisodeStatus::Running) {
    CommandVector cmd = policy(env.world(), obs, env.estimate());
    StepResult res = env.step(cmd);
    rec.return_sum += res.reward.total;
    obs = std::move(res.obs);
  }
  rec.outcome = env.world().status;
  rec.steps = env.world().step;
  rec.command_violations = env.command_violations();
  rec.trace = env.trace();
  return rec;
}

}  // namespace pushsim
