#pragma once

#include <functional>
#include <vector>

#include "pushsim/core.hpp"
#include "pushsim/physics.hpp"
#include "pushsim/scenario.hpp"
#include "pushsim/sensors.hpp"

namespace pushsim {

struct TeacherParams {
  double standoff = 0.8;          // m behind the object, opposite the goal
  double approach_speed = 0.6;    // m/s
  double push_speed = 0.4;        // m/s
  double heading_gain = 2.0;      // 1/s
  double lateral_gain = 1.5;      // 1/m
  double realign_threshold = 0.85;  // alignment-angle units
  bool align_enabled = true;      // false = greedy approach (ablation)

  void validate() const;
  std::vector<double> to_vector() const;     // tunable fields only
  static TeacherParams from_vector(const std::vector<double>& v,
                                   const TeacherParams& base);
};

enum class PilotPhase { Align, Push };

// Object geometry as the pilot sees it; the teacher fills it from privileged
// state, the student from nominal assumptions.
struct PilotGeometry {
  double avoid_radius = 0.70710678118654752;  // half diagonal of a 1 m box
  double face_dist = 0.5;  // center-to-face distance along the push axis
  Vec2 rel_com;            // COM offset, base-frame axes
};

PilotPhase pilot_phase(const Vec2& rel_obj, const Vec2& rel_goal,
                       const TeacherParams& params);

// Shared two-phase control law in robot-relative coordinates.
CommandVector pilot_command(const Vec2& rel_obj, const Vec2& rel_goal,
                            const PilotGeometry& geom, const TeacherParams& params,
                            const PhysicsConfig& pcfg);

PilotGeometry privileged_geometry(const WorldState& world);

CommandVector teacher_act(const WorldState& world, const TeacherParams& params,
                          const PhysicsConfig& pcfg);

CommandVector student_act(const ObservationSet& obs, const ObjectEstimate& estimate,
                          const TeacherParams& params, const PhysicsConfig& pcfg,
                          const PilotGeometry& geom = {});

struct CemConfig {
  int population = 64;
  double elite_fraction = 0.125;
  int iterations = 30;
  std::vector<double> init_std;  // per-parameter; empty = 10% of |mean| + 0.05
  int episodes_per_candidate = 8;
  uint64_t seed = 0;

  void validate() const;
  int elite_count() const;
};

struct CemTracePoint {
  int iteration = 0;
  double elite_mean_return = 0.0;
  double best_return = 0.0;
};

// Maximizes the mean of `episode_return` over common per-iteration seeds.
// Non-finite candidate scores are excluded from the elite set.
std::vector<double> cem_optimize_vec(
    const std::vector<double>& init_mean, const CemConfig& cfg,
    const std::function<double(const std::vector<double>&, uint64_t)>& episode_return,
    std::vector<CemTracePoint>* trace = nullptr);

}  // namespace pushsim
