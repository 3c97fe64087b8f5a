#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pushsim/config.hpp"
#include "pushsim/env.hpp"
#include "pushsim/policy.hpp"

using namespace pushsim;

namespace {
const TeacherParams kParams;
const PhysicsConfig kPcfg;
}

TEST_CASE("phase machine pins the standoff waypoint") {
  // waypoint = obj + standoff * unit(obj - goal); the push gate opens within
  // 1.2 * standoff of it
  CHECK(pilot_phase({2.0, 0.0}, {5.0, 0.0}, kParams) == PilotPhase::Align);
  CHECK(pilot_phase({1.8, 0.0}, {4.8, 0.0}, kParams) == PilotPhase::Align);  // 1.00 m out
  CHECK(pilot_phase({1.7, 0.0}, {4.7, 0.0}, kParams) == PilotPhase::Push);   // 0.90 m out
  CHECK(pilot_phase({0.8, 0.0}, {3.8, 0.0}, kParams) == PilotPhase::Push);   // at waypoint
}

TEST_CASE("poor alignment forces the align phase even when close") {
  // robot-object-goal angle of pi/2 gives theta_align = 0.5 < 0.85
  CHECK(pilot_phase({0.4, 0.0}, {0.4, 3.0}, kParams) == PilotPhase::Align);
  // mid-push alignment drop reverts to align
  CHECK(pilot_phase({0.8, 0.0}, {3.8, 0.0}, kParams) == PilotPhase::Push);
  CHECK(pilot_phase({0.8, 0.0}, {0.8, 3.0}, kParams) == PilotPhase::Align);
}

TEST_CASE("push-phase turn rate combines heading and lateral terms") {
  PilotGeometry geom;
  Vec2 rel_obj{0.85, 0.1};
  Vec2 rel_goal{5.0, 0.0};
  REQUIRE(pilot_phase(rel_obj, rel_goal, kParams) == PilotPhase::Push);
  CommandVector cmd = pilot_command(rel_obj, rel_goal, geom, kParams, kPcfg);
  double bearing_obj = std::atan2(rel_obj.y, rel_obj.x);
  double lateral_err = rel_goal.normalized().cross(rel_obj);
  CHECK(lateral_err == doctest::Approx(0.1));
  CHECK(cmd.v_ang == doctest::Approx(kParams.heading_gain * bearing_obj +
                                     kParams.lateral_gain * lateral_err)
                         .epsilon(1e-12));
  CHECK(cmd.v_ang > 0.0);  // object left of the goal line turns left
  CHECK(cmd.arm_residual[0] == kMaxArmResidual);
  CHECK(cmd.arm_residual[5] == kMaxArmResidual);

  // mirrored scene turns the other way
  CommandVector mir = pilot_command({0.85, -0.1}, rel_goal, geom, kParams, kPcfg);
  CHECK(mir.v_ang == doctest::Approx(-cmd.v_ang).epsilon(1e-12));
}

TEST_CASE("object inside the success ball stops the base") {
  PilotGeometry geom;
  CommandVector cmd = pilot_command({2.0, 0.0}, {2.1, 0.0}, geom, kParams, kPcfg);
  CHECK(cmd.vx == 0.0);
  CHECK(cmd.vy == 0.0);
  CHECK(std::abs(cmd.v_ang) <= 0.2);
}

TEST_CASE("greedy variant heads straight for the object") {
  TeacherParams greedy = kParams;
  greedy.align_enabled = false;
  PilotGeometry geom;
  Vec2 rel_obj{0.96, 0.72};  // dist 1.2, inside arm-extension range
  CommandVector cmd = pilot_command(rel_obj, {-3.0, 0.0}, geom, greedy, kPcfg);
  double d = rel_obj.norm();
  CHECK(cmd.vx == doctest::Approx(greedy.approach_speed * rel_obj.x / d));
  CHECK(cmd.vy == doctest::Approx(greedy.approach_speed * rel_obj.y / d));
  CHECK(cmd.arm_residual[0] == kMaxArmResidual);
  CHECK(cmd.arm_residual[5] == kMaxArmResidual);
  // the goal position never enters the greedy law
  CommandVector other = pilot_command(rel_obj, {4.0, -2.0}, geom, greedy, kPcfg);
  CHECK(other.vx == cmd.vx);
  CHECK(other.v_ang == cmd.v_ang);
}

TEST_CASE("teacher commands are deterministic and always within bounds") {
  RngStream rng(19, "policy");
  for (int i = 0; i < 2000; ++i) {
    WorldState w;
    w.robot.base = {{rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(-kPi, kPi)};
    w.obj.pose = {{rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(-kPi, kPi)};
    w.goal = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
    update_ee(w.robot, kPcfg);
    CommandVector a = teacher_act(w, kParams, kPcfg);
    CommandVector b = teacher_act(w, kParams, kPcfg);
    CHECK(a.flat() == b.flat());
    CommandVector clamped = a;
    CHECK_FALSE(clamped.clamp());  // already within bounds
  }
  WorldState w;
  w.status = EpisodeStatus::Success;
  CHECK_THROWS_AS(teacher_act(w, kParams, kPcfg), std::logic_error);
}

TEST_CASE("student equals teacher under perfect perception") {
  RngStream rng(23, "student");
  for (int i = 0; i < 2000; ++i) {
    WorldState w;
    w.robot.base = {{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-kPi, kPi)};
    w.obj.pose = {{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-kPi, kPi)};
    w.goal = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    update_ee(w.robot, kPcfg);

    ObjectEstimate truth{to_frame(w.robot.base, w.obj.pose.position), 1.0};
    ObservationSet obs;
    obs.relative_goal = to_frame(w.robot.base, w.goal);
    CommandVector s = student_act(obs, truth, kParams, kPcfg,
                                  privileged_geometry(w));
    CommandVector t = teacher_act(w, kParams, kPcfg);
    CHECK(s.flat() == t.flat());  // exact, not approximate
  }
}

TEST_CASE("zero confidence commands a search rotation") {
  ObservationSet obs;
  obs.relative_goal = {3.0, 0.0};
  ObjectEstimate lost{{1.0, 1.0}, 0.0};
  CommandVector cmd = student_act(obs, lost, kParams, kPcfg);
  CHECK(cmd.vx == 0.0);
  CHECK(cmd.vy == 0.0);
  CHECK(cmd.v_ang == 0.5);
}

TEST_CASE("lateral estimate error perturbs the command within the gain bound") {
  PilotGeometry geom;
  Vec2 rel_goal{5.0, 0.0};
  Vec2 rel_obj{0.85, 0.0};
  ObservationSet obs;
  obs.relative_goal = rel_goal;
  ObjectEstimate exact{rel_obj, 1.0};
  ObjectEstimate shifted{{rel_obj.x, rel_obj.y + 0.1}, 1.0};
  REQUIRE(pilot_phase(exact.rel_pos, rel_goal, kParams) == PilotPhase::Push);
  REQUIRE(pilot_phase(shifted.rel_pos, rel_goal, kParams) == PilotPhase::Push);
  CommandVector a = student_act(obs, exact, kParams, kPcfg, geom);
  CommandVector b = student_act(obs, shifted, kParams, kPcfg, geom);
  double bearing_shift =
      std::abs(std::atan2(shifted.rel_pos.y, shifted.rel_pos.x) -
               std::atan2(rel_obj.y, rel_obj.x));
  double bound = kParams.lateral_gain * 0.1 + kParams.heading_gain * bearing_shift;
  CHECK(std::abs(b.v_ang - a.v_ang) <= bound + 1e-9);
  double dvx = b.vx - a.vx, dvy = b.vy - a.vy;
  CHECK(std::hypot(dvx, dvy) <= kParams.push_speed);  // direction change only
}

TEST_CASE("teacher params vector round trip and validation") {
  TeacherParams p;
  p.standoff = 0.9;
  p.push_speed = 0.33;
  p.realign_threshold = 0.7;
  std::vector<double> v = p.to_vector();
  CHECK(v.size() == 6);
  TeacherParams q = TeacherParams::from_vector(v, TeacherParams{});
  CHECK(q.standoff == p.standoff);
  CHECK(q.push_speed == p.push_speed);
  CHECK(q.realign_threshold == p.realign_threshold);
  CHECK_THROWS_AS(TeacherParams::from_vector({1.0, 2.0}, p), std::invalid_argument);

  TeacherParams bad;
  bad.realign_threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = TeacherParams{};
  bad.push_speed = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("cem converges on a quadratic objective") {
  const std::vector<double> target{0.8, -1.3, 2.0};
  CemConfig cfg;
  cfg.episodes_per_candidate = 1;
  cfg.seed = 5;
  auto objective = [&](const std::vector<double>& p, uint64_t) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += (p[i] - target[i]) * (p[i] - target[i]);
    return -s;
  };
  std::vector<CemTracePoint> trace;
  std::vector<double> best = cem_optimize_vec({3.0, 3.0, 3.0}, cfg, objective, &trace);
  REQUIRE(best.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(std::abs(best[i] - target[i]) <= 0.05);

  REQUIRE(trace.size() == static_cast<size_t>(cfg.iterations));
  int drops = 0;
  for (size_t i = 1; i < trace.size(); ++i)
    if (trace[i].elite_mean_return < trace[i - 1].elite_mean_return - 1e-9) ++drops;
  CHECK(drops <= 2);
}

TEST_CASE("cem excludes non-finite candidates and still converges") {
  CemConfig cfg;
  cfg.episodes_per_candidate = 1;
  cfg.seed = 11;
  auto objective = [](const std::vector<double>& p, uint64_t) {
    if (p[0] > 6.0) return std::nan("");
    return -(p[0] - 1.0) * (p[0] - 1.0);
  };
  std::vector<double> best = cem_optimize_vec({5.0}, cfg, objective);
  REQUIRE(best.size() == 1);
  CHECK(std::isfinite(best[0]));
  CHECK(std::abs(best[0] - 1.0) <= 0.05);
}

TEST_CASE("cem uses common seeds across candidates within an iteration") {
  CemConfig cfg;
  cfg.population = 8;
  cfg.elite_fraction = 0.125;
  cfg.iterations = 1;
  cfg.episodes_per_candidate = 2;
  CHECK(cfg.elite_count() == 1);

  std::vector<std::vector<uint64_t>> per_candidate;
  per_candidate.emplace_back();
  auto objective = [&](const std::vector<double>& p, uint64_t seed) {
    if (per_candidate.back().size() == 2) per_candidate.emplace_back();
    per_candidate.back().push_back(seed);
    return -p[0] * p[0];
  };
  cem_optimize_vec({1.0}, cfg, objective);
  REQUIRE(per_candidate.size() == 8);
  for (const auto& seeds : per_candidate) CHECK(seeds == per_candidate[0]);
}

TEST_CASE("cem config validation") {
  CemConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.population = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = CemConfig{};
  cfg.elite_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("policy factory knows its three names") {
  SimConfig cfg = default_config();
  CHECK(make_policy("teacher", TeacherParams{}, cfg));
  CHECK(make_policy("student", TeacherParams{}, cfg));
  CHECK(make_policy("greedy", TeacherParams{}, cfg));
  CHECK_THROWS_AS(make_policy("ppo", TeacherParams{}, cfg), std::invalid_argument);
}
