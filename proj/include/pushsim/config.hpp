#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pushsim/physics.hpp"
#include "pushsim/policy.hpp"
#include "pushsim/rewards.hpp"
#include "pushsim/scenario.hpp"
#include "pushsim/sensors.hpp"

namespace pushsim {

struct SuiteCell {
  std::string name;
  std::string preset = "fa";        // controller preset key
  std::string policy = "teacher";   // teacher | student | greedy
  std::optional<GoalSector> sector;
  std::optional<MassBin> mass_bin;
  int episodes = 500;
  uint64_t base_seed = 0;
};

struct SuiteSpec {
  std::string name;
  std::vector<SuiteCell> cells;
};

struct SimConfig {
  PhysicsConfig physics;
  RewardConfig rewards;
  CameraModel camera;
  AugmentConfig augment;
  ScenarioConfig scenario;
  std::map<std::string, ControllerSpec> presets;
  TeacherParams teacher;
  CemConfig cem;
  std::map<std::string, SuiteSpec> suites;

  void validate() const;
};

// Defaults: FA/baseline presets, goal-sector and mass-bin suites.
SimConfig default_config();

// Strict parse: unknown keys and range violations are errors; unspecified
// fields keep their defaults.
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);

// Effective config including a provenance section naming the source of each
// pinned default. Loading the dump reproduces it (fixed point).
std::string dump_config(const SimConfig& cfg);

// FNV-1a hash of the canonical dump, hex encoded.
std::string config_hash(const SimConfig& cfg);

// Strict parse of a scenario section (JSON object text) on top of `base`;
// used for per-reset overrides on the wire protocol.
ScenarioConfig parse_scenario_overrides(const std::string& json_text,
                                        ScenarioConfig base);

}  // namespace pushsim
