#include "pushsim/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pushsim {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& known,
                const std::string& section) {
  if (!j.is_object())
    throw std::invalid_argument("config: section '" + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + section + "." + it.key() + "'");
}

template <typename T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

GoalSector sector_from_string(const std::string& s) {
  if (s == "Front") return GoalSector::Front;
  if (s == "Lateral") return GoalSector::Lateral;
  if (s == "Rear") return GoalSector::Rear;
  throw std::invalid_argument("config: unknown goal sector '" + s + "'");
}

MassBin mass_bin_from_string(const std::string& s) {
  if (s == "Light") return MassBin::Light;
  if (s == "Medium") return MassBin::Medium;
  if (s == "Heavy") return MassBin::Heavy;
  if (s == "ExtraHeavy") return MassBin::ExtraHeavy;
  throw std::invalid_argument("config: unknown mass bin '" + s + "'");
}

void parse_physics(const json& j, PhysicsConfig& c) {
  check_keys(j, {"gravity", "dt", "tau_v", "arm_rate", "k_rot", "ee_radius",
                 "ee_forward", "ee_forward_gain", "ee_lateral", "ee_lateral_gain"},
             "physics");
  get(j, "gravity", c.gravity);
  get(j, "dt", c.dt);
  get(j, "tau_v", c.tau_v);
  get(j, "arm_rate", c.arm_rate);
  get(j, "k_rot", c.k_rot);
  get(j, "ee_radius", c.ee_radius);
  get(j, "ee_forward", c.ee_forward);
  get(j, "ee_forward_gain", c.ee_forward_gain);
  get(j, "ee_lateral", c.ee_lateral);
  get(j, "ee_lateral_gain", c.ee_lateral_gain);
  if (!(c.dt > 0.0)) throw std::invalid_argument("config: physics.dt must be > 0");
  if (!(c.tau_v > 0.0)) throw std::invalid_argument("config: physics.tau_v must be > 0");
}

void parse_rewards(const json& j, RewardConfig& c) {
  check_keys(j, {"sigma_reach", "sigma_push", "sigma_track", "sigma_align",
                 "w_reach", "w_push", "w_track", "w_align", "w_smooth",
                 "w_balance", "w_upper", "theta_fov"},
             "rewards");
  get(j, "sigma_reach", c.sigma_reach);
  get(j, "sigma_push", c.sigma_push);
  get(j, "sigma_track", c.sigma_track);
  get(j, "sigma_align", c.sigma_align);
  get(j, "w_reach", c.w_reach);
  get(j, "w_push", c.w_push);
  get(j, "w_track", c.w_track);
  get(j, "w_align", c.w_align);
  get(j, "w_smooth", c.w_smooth);
  get(j, "w_balance", c.w_balance);
  get(j, "w_upper", c.w_upper);
  get(j, "theta_fov", c.theta_fov);
  c.validate();
}

void parse_camera(const json& j, CameraModel& c) {
  check_keys(j, {"width", "height", "h_fov", "aspect", "mount_x", "mount_y",
                 "mount_z", "mount_yaw", "mount_pitch", "mount_roll", "far_plane"},
             "camera");
  get(j, "width", c.width);
  get(j, "height", c.height);
  get(j, "h_fov", c.h_fov);
  get(j, "aspect", c.aspect);
  get(j, "mount_x", c.mount_offset.x);
  get(j, "mount_y", c.mount_offset.y);
  get(j, "mount_z", c.mount_offset.z);
  get(j, "mount_yaw", c.mount_yaw);
  get(j, "mount_pitch", c.mount_pitch);
  get(j, "mount_roll", c.mount_roll);
  get(j, "far_plane", c.far_plane);
  c.validate();
}

void parse_augment(const json& j, AugmentConfig& c) {
  check_keys(j, {"far_patch_enable", "far_patch_count_min", "far_patch_count_max",
                 "far_patch_size_min", "far_patch_size_max", "corr_noise_enable",
                 "corr_grid", "corr_sigma", "dropout_enable", "dropout_prob",
                 "jitter_xyz", "jitter_yaw", "jitter_pitch", "jitter_roll"},
             "augment");
  get(j, "far_patch_enable", c.far_patch_enable);
  get(j, "far_patch_count_min", c.far_patch_count_min);
  get(j, "far_patch_count_max", c.far_patch_count_max);
  get(j, "far_patch_size_min", c.far_patch_size_min);
  get(j, "far_patch_size_max", c.far_patch_size_max);
  get(j, "corr_noise_enable", c.corr_noise_enable);
  get(j, "corr_grid", c.corr_grid);
  get(j, "corr_sigma", c.corr_sigma);
  get(j, "dropout_enable", c.dropout_enable);
  get(j, "dropout_prob", c.dropout_prob);
  get(j, "jitter_xyz", c.jitter_xyz);
  get(j, "jitter_yaw", c.jitter_yaw);
  get(j, "jitter_pitch", c.jitter_pitch);
  get(j, "jitter_roll", c.jitter_roll);
  c.validate();
}

void parse_scenario(const json& j, ScenarioConfig& c) {
  check_keys(j, {"mass_min", "mass_max", "friction_min", "friction_max",
                 "goal_radius_min", "goal_radius_max", "goal_angle_min",
                 "goal_angle_max", "goal_angle_symmetric", "object_bearing",
                 "object_dist_min",
                 "object_dist_max", "footprint_min", "footprint_max",
                 "height_min", "height_max", "com_offset_max", "timeout",
                 "success_dist", "success_hold"},
             "scenario");
  get(j, "mass_min", c.mass_min);
  get(j, "mass_max", c.mass_max);
  get(j, "friction_min", c.friction_min);
  get(j, "friction_max", c.friction_max);
  get(j, "goal_radius_min", c.goal_radius_min);
  get(j, "goal_radius_max", c.goal_radius_max);
  get(j, "goal_angle_min", c.goal_angle_min);
  get(j, "goal_angle_max", c.goal_angle_max);
  get(j, "goal_angle_symmetric", c.goal_angle_symmetric);
  get(j, "object_bearing", c.object_bearing);
  get(j, "object_dist_min", c.object_dist_min);
  get(j, "object_dist_max", c.object_dist_max);
  get(j, "footprint_min", c.footprint_min);
  get(j, "footprint_max", c.footprint_max);
  get(j, "height_min", c.height_min);
  get(j, "height_max", c.height_max);
  get(j, "com_offset_max", c.com_offset_max);
  get(j, "timeout", c.timeout);
  get(j, "success_dist", c.success_dist);
  get(j, "success_hold", c.success_hold);
  c.validate();
}

void parse_preset(const json& j, const std::string& name, ControllerSpec& c) {
  check_keys(j, {"force_adaptive", "f_max", "hazard_base", "hazard_force_gain",
                 "hazard_jerk_gain"},
             "presets." + name);
  c.name = name;
  get(j, "force_adaptive", c.force_adaptive);
  get(j, "f_max", c.f_max);
  get(j, "hazard_base", c.hazard_base);
  get(j, "hazard_force_gain", c.hazard_force_gain);
  get(j, "hazard_jerk_gain", c.hazard_jerk_gain);
  c.validate();
}

void parse_teacher(const json& j, TeacherParams& c) {
  check_keys(j, {"standoff", "approach_speed", "push_speed", "heading_gain",
                 "lateral_gain", "realign_threshold", "align_enabled"},
             "teacher");
  get(j, "standoff", c.standoff);
  get(j, "approach_speed", c.approach_speed);
  get(j, "push_speed", c.push_speed);
  get(j, "heading_gain", c.heading_gain);
  get(j, "lateral_gain", c.lateral_gain);
  get(j, "realign_threshold", c.realign_threshold);
  get(j, "align_enabled", c.align_enabled);
  c.validate();
}

void parse_cem(const json& j, CemConfig& c) {
  check_keys(j, {"population", "elite_fraction", "iterations", "init_std",
                 "episodes_per_candidate", "seed"},
             "cem");
  get(j, "population", c.population);
  get(j, "elite_fraction", c.elite_fraction);
  get(j, "iterations", c.iterations);
  get(j, "init_std", c.init_std);
  get(j, "episodes_per_candidate", c.episodes_per_candidate);
  get(j, "seed", c.seed);
  c.validate();
}

void parse_suites(const json& j, std::map<std::string, SuiteSpec>& suites) {
  if (!j.is_object()) throw std::invalid_argument("config: suites must be an object");
  suites.clear();
  for (auto it = j.begin(); it != j.end(); ++it) {
    SuiteSpec suite;
    suite.name = it.key();
    if (!it.value().is_array())
      throw std::invalid_argument("config: suite '" + it.key() + "' must be an array");
    for (const auto& cj : it.value()) {
      check_keys(cj, {"name", "preset", "policy", "sector", "mass_bin",
                      "episodes", "base_seed"},
                 "suites." + it.key());
      SuiteCell cell;
      get(cj, "name", cell.name);
      get(cj, "preset", cell.preset);
      get(cj, "policy", cell.policy);
      if (cj.contains("sector"))
        cell.sector = sector_from_string(cj.at("sector").get<std::string>());
      if (cj.contains("mass_bin"))
        cell.mass_bin = mass_bin_from_string(cj.at("mass_bin").get<std::string>());
      get(cj, "episodes", cell.episodes);
      get(cj, "base_seed", cell.base_seed);
      if (cell.episodes < 1)
        throw std::invalid_argument("config: cell episodes must be >= 1");
      suite.cells.push_back(std::move(cell));
    }
    suites[it.key()] = std::move(suite);
  }
}

}  // namespace

void SimConfig::validate() const {
  rewards.validate();
  camera.validate();
  augment.validate();
  scenario.validate();
  teacher.validate();
  cem.validate();
  for (const auto& [name, p] : presets) p.validate();
  auto fa = presets.find("fa");
  auto base = presets.find("baseline");
  if (fa != presets.end() && base != presets.end()) {
    if (!(fa->second.f_max > base->second.f_max))
      throw std::invalid_argument("config: fa preset must have larger f_max than baseline");
    if (!(fa->second.hazard_force_gain < base->second.hazard_force_gain))
      throw std::invalid_argument(
          "config: fa preset must have smaller hazard_force_gain than baseline");
  }
  for (const auto& [sname, suite] : suites)
    for (const auto& cell : suite.cells)
      if (!presets.count(cell.preset))
        throw std::invalid_argument("config: suite cell references unknown preset '" +
                                    cell.preset + "'");
}

SimConfig default_config() {
  SimConfig cfg;
  ControllerSpec fa;
  fa.name = "fa";
  fa.force_adaptive = true;
  fa.f_max = 60.0;
  fa.hazard_base = 1e-4;
  fa.hazard_force_gain = 0.002;
  fa.hazard_jerk_gain = 0.01;
  ControllerSpec baseline;
  baseline.name = "baseline";
  baseline.force_adaptive = false;
  baseline.f_max = 25.0;
  baseline.hazard_base = 1e-4;
  baseline.hazard_force_gain = 0.02;
  baseline.hazard_jerk_gain = 0.01;
  cfg.presets["fa"] = fa;
  cfg.presets["baseline"] = baseline;

  const char* sectors[3] = {"Front", "Lateral", "Rear"};
  const char* bins[4] = {"Light", "Medium", "Heavy", "ExtraHeavy"};
  const char* presets[2] = {"fa", "baseline"};
  const char* policies[2] = {"teacher", "student"};

  // every cell in a suite shares one base seed: cross-preset and cross-policy
  // comparisons see identical scenario draws, and cross-sector comparisons
  // differ only in the goal placement
  for (const char* pol : policies) {
    std::string suffix = std::string(pol) == "teacher" ? "" : "-student";

    SuiteSpec gs;
    gs.name = "goal-sectors" + suffix;
    for (const char* pre : presets)
      for (const char* sec : sectors) {
        SuiteCell c;
        c.name = std::string(sec) + "-" + pre + "-" + pol;
        c.preset = pre;
        c.policy = pol;
        c.sector = sector_from_string(sec);
        c.episodes = 500;
        c.base_seed = 10000;
        gs.cells.push_back(c);
      }
    cfg.suites[gs.name] = gs;

    SuiteSpec mb;
    mb.name = "mass-bins" + suffix;
    for (const char* pre : presets)
      for (const char* bin : bins) {
        SuiteCell c;
        c.name = std::string(bin) + "-" + pre + "-" + pol;
        c.preset = pre;
        c.policy = pol;
        c.mass_bin = mass_bin_from_string(bin);
        c.episodes = 500;
        c.base_seed = 50000;
        mb.cells.push_back(c);
      }
    cfg.suites[mb.name] = mb;
  }
  return cfg;
}

SimConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, {"physics", "rewards", "camera", "augment", "scenario", "presets",
                 "teacher", "cem", "suites", "provenance"},
             "(top level)");
  SimConfig cfg = default_config();
  if (j.contains("physics")) parse_physics(j["physics"], cfg.physics);
  if (j.contains("rewards")) parse_rewards(j["rewards"], cfg.rewards);
  if (j.contains("camera")) parse_camera(j["camera"], cfg.camera);
  if (j.contains("augment")) parse_augment(j["augment"], cfg.augment);
  if (j.contains("scenario")) parse_scenario(j["scenario"], cfg.scenario);
  if (j.contains("presets")) {
    if (!j["presets"].is_object())
      throw std::invalid_argument("config: presets must be an object");
    for (auto it = j["presets"].begin(); it != j["presets"].end(); ++it) {
      ControllerSpec spec = cfg.presets.count(it.key()) ? cfg.presets[it.key()]
                                                        : ControllerSpec{};
      parse_preset(it.value(), it.key(), spec);
      cfg.presets[it.key()] = spec;
    }
  }
  if (j.contains("teacher")) parse_teacher(j["teacher"], cfg.teacher);
  if (j.contains("cem")) parse_cem(j["cem"], cfg.cem);
  if (j.contains("suites")) parse_suites(j["suites"], cfg.suites);
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const SimConfig& cfg) {
  json j;
  j["physics"] = {{"gravity", cfg.physics.gravity},
                  {"dt", cfg.physics.dt},
                  {"tau_v", cfg.physics.tau_v},
                  {"arm_rate", cfg.physics.arm_rate},
                  {"k_rot", cfg.physics.k_rot},
                  {"ee_radius", cfg.physics.ee_radius},
                  {"ee_forward", cfg.physics.ee_forward},
                  {"ee_forward_gain", cfg.physics.ee_forward_gain},
                  {"ee_lateral", cfg.physics.ee_lateral},
                  {"ee_lateral_gain", cfg.physics.ee_lateral_gain}};
  j["rewards"] = {{"sigma_reach", cfg.rewards.sigma_reach},
                  {"sigma_push", cfg.rewards.sigma_push},
                  {"sigma_track", cfg.rewards.sigma_track},
                  {"sigma_align", cfg.rewards.sigma_align},
                  {"w_reach", cfg.rewards.w_reach},
                  {"w_push", cfg.rewards.w_push},
                  {"w_track", cfg.rewards.w_track},
                  {"w_align", cfg.rewards.w_align},
                  {"w_smooth", cfg.rewards.w_smooth},
                  {"w_balance", cfg.rewards.w_balance},
                  {"w_upper", cfg.rewards.w_upper},
                  {"theta_fov", cfg.rewards.theta_fov}};
  j["camera"] = {{"width", cfg.camera.width},
                 {"height", cfg.camera.height},
                 {"h_fov", cfg.camera.h_fov},
                 {"aspect", cfg.camera.aspect},
                 {"mount_x", cfg.camera.mount_offset.x},
                 {"mount_y", cfg.camera.mount_offset.y},
                 {"mount_z", cfg.camera.mount_offset.z},
                 {"mount_yaw", cfg.camera.mount_yaw},
                 {"mount_pitch", cfg.camera.mount_pitch},
                 {"mount_roll", cfg.camera.mount_roll},
                 {"far_plane", cfg.camera.far_plane}};
  j["augment"] = {{"far_patch_enable", cfg.augment.far_patch_enable},
                  {"far_patch_count_min", cfg.augment.far_patch_count_min},
                  {"far_patch_count_max", cfg.augment.far_patch_count_max},
                  {"far_patch_size_min", cfg.augment.far_patch_size_min},
                  {"far_patch_size_max", cfg.augment.far_patch_size_max},
                  {"corr_noise_enable", cfg.augment.corr_noise_enable},
                  {"corr_grid", cfg.augment.corr_grid},
                  {"corr_sigma", cfg.augment.corr_sigma},
                  {"dropout_enable", cfg.augment.dropout_enable},
                  {"dropout_prob", cfg.augment.dropout_prob},
                  {"jitter_xyz", cfg.augment.jitter_xyz},
                  {"jitter_yaw", cfg.augment.jitter_yaw},
                  {"jitter_pitch", cfg.augment.jitter_pitch},
                  {"jitter_roll", cfg.augment.jitter_roll}};
  j["scenario"] = {{"mass_min", cfg.scenario.mass_min},
                   {"mass_max", cfg.scenario.mass_max},
                   {"friction_min", cfg.scenario.friction_min},
                   {"friction_max", cfg.scenario.friction_max},
                   {"goal_radius_min", cfg.scenario.goal_radius_min},
                   {"goal_radius_max", cfg.scenario.goal_radius_max},
                   {"goal_angle_min", cfg.scenario.goal_angle_min},
                   {"goal_angle_max", cfg.scenario.goal_angle_max},
                   {"goal_angle_symmetric", cfg.scenario.goal_angle_symmetric},
                   {"object_bearing", cfg.scenario.object_bearing},
                   {"object_dist_min", cfg.scenario.object_dist_min},
                   {"object_dist_max", cfg.scenario.object_dist_max},
                   {"footprint_min", cfg.scenario.footprint_min},
                   {"footprint_max", cfg.scenario.footprint_max},
                   {"height_min", cfg.scenario.height_min},
                   {"height_max", cfg.scenario.height_max},
                   {"com_offset_max", cfg.scenario.com_offset_max},
                   {"timeout", cfg.scenario.timeout},
                   {"success_dist", cfg.scenario.success_dist},
                   {"success_hold", cfg.scenario.success_hold}};
  for (const auto& [name, p] : cfg.presets)
    j["presets"][name] = {{"force_adaptive", p.force_adaptive},
                          {"f_max", p.f_max},
                          {"hazard_base", p.hazard_base},
                          {"hazard_force_gain", p.hazard_force_gain},
                          {"hazard_jerk_gain", p.hazard_jerk_gain}};
  j["teacher"] = {{"standoff", cfg.teacher.standoff},
                  {"approach_speed", cfg.teacher.approach_speed},
                  {"push_speed", cfg.teacher.push_speed},
                  {"heading_gain", cfg.teacher.heading_gain},
                  {"lateral_gain", cfg.teacher.lateral_gain},
                  {"realign_threshold", cfg.teacher.realign_threshold},
                  {"align_enabled", cfg.teacher.align_enabled}};
  j["cem"] = {{"population", cfg.cem.population},
              {"elite_fraction", cfg.cem.elite_fraction},
              {"iterations", cfg.cem.iterations},
              {"init_std", cfg.cem.init_std},
              {"episodes_per_candidate", cfg.cem.episodes_per_candidate},
              {"seed", cfg.cem.seed}};
  for (const auto& [sname, suite] : cfg.suites) {
    json cells = json::array();
    for (const auto& c : suite.cells) {
      json cj = {{"name", c.name},
                 {"preset", c.preset},
                 {"policy", c.policy},
                 {"episodes", c.episodes},
                 {"base_seed", c.base_seed}};
      if (c.sector) cj["sector"] = to_string(*c.sector);
      if (c.mass_bin) cj["mass_bin"] = to_string(*c.mass_bin);
      cells.push_back(cj);
    }
    j["suites"][sname] = cells;
  }
  j["provenance"] = {
      {"physics.dt", "50 Hz control loop"},
      {"rewards.sigma_reach", "reach reward scale 2.0"},
      {"rewards.sigma_push", "push reward scale 10.0"},
      {"rewards.sigma_track", "track reward scale 0.5"},
      {"rewards.sigma_align", "alignment reward scale 0.25"},
      {"rewards.w_reach", "reach weight 1.25"},
      {"rewards.w_push", "push weight 2.5"},
      {"rewards.w_track", "track weight 1.0"},
      {"rewards.w_align", "alignment weight 2.0"},
      {"rewards.w_smooth", "command smoothness penalty -1.0"},
      {"rewards.w_balance", "object balance penalty -0.5"},
      {"rewards.w_upper", "upper joint action penalty -0.5"},
      {"rewards.theta_fov", "object init FOV half-angle 60 deg"},
      {"scenario.mass", "box mass range 1-8 kg"},
      {"scenario.friction", "friction coefficient range 0.1-1.0"},
      {"scenario.goal_radius", "goal radius 2.5-3.5 m over 360 deg"},
      {"scenario.object_bearing", "object init within +-60 deg FOV"},
      {"scenario.object_dist", "object init distance 1.8-2.2 m"},
      {"scenario.success", "within 0.3 m of goal held for 2 s"},
      {"augment.jitter", "extrinsics: +-3 cm xyz, +-5 deg yaw/pitch, +-2 deg roll"},
      {"camera.resolution", "32x32 depth, 3-frame stack at 5 Hz"}};
  return j.dump(2) + "\n";
}

ScenarioConfig parse_scenario_overrides(const std::string& json_text,
                                        ScenarioConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  parse_scenario(j, base);
  return base;
}

std::string config_hash(const SimConfig& cfg) {
  std::string s = dump_config(cfg);
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pushsim
