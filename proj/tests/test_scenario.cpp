#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pushsim/config.hpp"
#include "pushsim/env.hpp"
#include "pushsim/scenario.hpp"

using namespace pushsim;

TEST_CASE("scenario sampling is deterministic") {
  ScenarioConfig cfg;
  RngStream a(5, "scenario"), b(5, "scenario");
  WorldState wa = sample_scenario(cfg, a);
  WorldState wb = sample_scenario(cfg, b);
  CHECK(wa.obj.pose.position.x == wb.obj.pose.position.x);
  CHECK(wa.obj.pose.position.y == wb.obj.pose.position.y);
  CHECK(wa.obj.pose.yaw == wb.obj.pose.yaw);
  CHECK(wa.obj_spec.mass == wb.obj_spec.mass);
  CHECK(wa.obj_spec.friction_mu == wb.obj_spec.friction_mu);
  CHECK(wa.obj_spec.width == wb.obj_spec.width);
  CHECK(wa.goal.x == wb.goal.x);
  CHECK(wa.goal.y == wb.goal.y);
}

TEST_CASE("sampled scenarios respect the configured ranges") {
  ScenarioConfig cfg;
  RngStream rng(9, "scenario");
  for (int i = 0; i < 10000; ++i) {
    WorldState w = sample_scenario(cfg, rng);
    CHECK(w.robot.base.position.x == 0.0);
    CHECK(w.robot.base.yaw == 0.0);
    CHECK(w.obj_spec.mass >= 1.0);
    CHECK(w.obj_spec.mass <= 8.0);
    CHECK(w.obj_spec.friction_mu >= 0.1);
    CHECK(w.obj_spec.friction_mu <= 1.0);
    double gr = w.goal.norm();
    CHECK(gr >= 2.5);
    CHECK(gr <= 3.5);
    double od = w.obj.pose.position.norm();
    CHECK(od >= 1.8);
    CHECK(od <= 2.2);
    CHECK(std::abs(bearing(w.robot.base, w.obj.pose.position)) <= kPi / 3.0 + 1e-12);
    CHECK(box_surface_distance(w.obj_spec, w.obj.pose, w.goal) > 0.0);
    CHECK_NOTHROW(w.obj_spec.validate());
  }
}

TEST_CASE("goal angles are uniform over the full circle") {
  ScenarioConfig cfg;
  RngStream rng(13, "scenario");
  const int kBins = 36, kN = 10000;
  int counts[kBins] = {};
  for (int i = 0; i < kN; ++i) {
    WorldState w = sample_scenario(cfg, rng);
    double a = std::atan2(w.goal.y, w.goal.x);
    int b = std::min(kBins - 1,
                     static_cast<int>((a + kPi) / (2.0 * kPi) * kBins));
    ++counts[b];
  }
  double expect = static_cast<double>(kN) / kBins;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // chi-square critical value, 35 dof, p = 0.01
  CHECK(chi2 < 57.34);
}

TEST_CASE("goal sector classification") {
  auto deg = [](double d) { return d * kPi / 180.0; };
  CHECK(classify_goal_sector(deg(30)) == GoalSector::Front);
  CHECK(classify_goal_sector(deg(60)) == GoalSector::Front);   // boundary down
  CHECK(classify_goal_sector(deg(-100)) == GoalSector::Lateral);
  CHECK(classify_goal_sector(deg(120)) == GoalSector::Lateral);  // boundary down
  CHECK(classify_goal_sector(deg(175)) == GoalSector::Rear);
  CHECK(classify_goal_sector(deg(-175)) == GoalSector::Rear);
  CHECK(classify_goal_sector(deg(30 + 360)) == GoalSector::Front);  // wraps
}

TEST_CASE("mass bin classification") {
  CHECK(classify_mass_bin(2.0) == MassBin::Light);
  CHECK(classify_mass_bin(3.0) == MassBin::Light);   // boundary down
  CHECK(classify_mass_bin(4.0) == MassBin::Medium);
  CHECK(classify_mass_bin(5.0) == MassBin::Medium);  // boundary down
  CHECK(classify_mass_bin(6.0) == MassBin::Heavy);
  CHECK(classify_mass_bin(8.0) == MassBin::Heavy);   // boundary down
  CHECK(classify_mass_bin(10.0) == MassBin::ExtraHeavy);
  CHECK(mass_bin_is_ood(MassBin::ExtraHeavy));
  CHECK_FALSE(mass_bin_is_ood(MassBin::Heavy));
  CHECK_THROWS_AS(classify_mass_bin(0.5), std::out_of_range);
  CHECK_THROWS_AS(classify_mass_bin(12.5), std::out_of_range);
}

namespace {

WorldState world_with_goal_gap(double dist) {
  WorldState w;
  w.obj.pose = {{2.0, 0.0}, 0.0};
  w.goal = {2.0 + dist, 0.0};
  return w;
}

}  // namespace

TEST_CASE("success requires holding inside the threshold") {
  ScenarioConfig cfg;
  const double dt = 0.02;

  WorldState w = world_with_goal_gap(0.25);
  int steps = 0;
  while (w.status == EpisodeStatus::Running) {
    w = update_status(w, dt, cfg);
    w.t += dt;
    ++steps;
    REQUIRE(steps < 200);
  }
  CHECK(w.status == EpisodeStatus::Success);
  CHECK(w.hold_timer == doctest::Approx(2.0));
  CHECK(steps == 100);  // exactly 2 s at 50 Hz
}

TEST_CASE("a near miss at 0.35 m times out instead of succeeding") {
  ScenarioConfig cfg;
  WorldState w = world_with_goal_gap(0.35);
  const double dt = 0.02;
  while (w.status == EpisodeStatus::Running) {
    w = update_status(w, dt, cfg);
    w.t += dt;
  }
  CHECK(w.status == EpisodeStatus::Timeout);
  CHECK(w.hold_timer == 0.0);
}

TEST_CASE("leaving the threshold resets the hold timer") {
  ScenarioConfig cfg;
  const double dt = 0.02;
  WorldState w = world_with_goal_gap(0.25);
  for (int i = 0; i < 50; ++i) {  // one second inside
    w = update_status(w, dt, cfg);
    w.t += dt;
  }
  CHECK(w.hold_timer == doctest::Approx(1.0));
  w.obj.pose.position.x -= 0.2;  // slips out for one step
  w = update_status(w, dt, cfg);
  CHECK(w.hold_timer == 0.0);
  w.obj.pose.position.x += 0.2;
  int steps = 0;
  while (w.status == EpisodeStatus::Running) {
    w = update_status(w, dt, cfg);
    w.t += dt;
    ++steps;
  }
  CHECK(w.status == EpisodeStatus::Success);
  CHECK(steps == 100);  // needs the full two seconds again
}

TEST_CASE("falls split on whether contact ever happened") {
  ScenarioConfig cfg;
  WorldState w = world_with_goal_gap(1.0);
  w.robot.fallen = true;
  CHECK(update_status(w, 0.02, cfg).status == EpisodeStatus::PreContactFall);
  w.ever_contacted = true;
  CHECK(update_status(w, 0.02, cfg).status == EpisodeStatus::PostContactFall);
}

TEST_CASE("update_status rejects terminal states") {
  ScenarioConfig cfg;
  WorldState w = world_with_goal_gap(1.0);
  w.t = cfg.timeout;
  w = update_status(w, 0.02, cfg);
  CHECK(w.status == EpisodeStatus::Timeout);
  CHECK_THROWS_AS(update_status(w, 0.02, cfg), std::logic_error);
}

TEST_CASE("outcomes are mutually exclusive over random traces") {
  ScenarioConfig cfg;
  RngStream rng(17, "status");
  for (int i = 0; i < 1000; ++i) {
    WorldState w = world_with_goal_gap(rng.uniform(0.0, 1.0));
    w.ever_contacted = rng.uniform() < 0.5;
    int terminal_seen = 0;
    while (w.status == EpisodeStatus::Running) {
      if (rng.uniform() < 0.001) w.robot.fallen = true;
      w = update_status(w, 0.02, cfg);
      w.t += 0.02;
      if (w.status != EpisodeStatus::Running) ++terminal_seen;
    }
    CHECK(terminal_seen == 1);
  }
}

TEST_CASE("an inert policy times out without moving the object") {
  SimConfig cfg = default_config();
  Environment env(cfg, EnvOptions{});
  PolicyFn zero = [](const WorldState&, const ObservationSet&,
                     const ObjectEstimate&) { return CommandVector{}; };
  env.reset(123);
  Vec2 obj0 = env.world().obj.pose.position;
  EpisodeRecord rec = run_episode(env, 123, zero, "zero");
  CHECK(rec.outcome == EpisodeStatus::Timeout);
  CHECK(env.world().obj.pose.position.x == obj0.x);
  CHECK(env.world().obj.pose.position.y == obj0.y);
  CHECK(rec.return_sum != 0.0);
}

TEST_CASE("identical seed and policy give identical episodes") {
  SimConfig cfg = default_config();
  Environment env(cfg, EnvOptions{});
  PolicyFn teacher = make_policy("teacher", TeacherParams{}, cfg);
  EpisodeRecord a = run_episode(env, 77, teacher, "teacher");
  EpisodeRecord b = run_episode(env, 77, teacher, "teacher");
  CHECK(a.outcome == b.outcome);
  CHECK(a.steps == b.steps);
  CHECK(a.return_sum == b.return_sum);
  CHECK(a.command_violations == b.command_violations);
}

TEST_CASE("scripted frontal push succeeds with the strong preset") {
  SimConfig cfg = default_config();
  EnvOptions opt;
  opt.preset = "fa";
  Environment env(cfg, opt);
  ScenarioConfig frontal;
  frontal.object_bearing = 0.0;
  frontal.object_dist_min = frontal.object_dist_max = 2.0;
  frontal.goal_angle_min = frontal.goal_angle_max = 0.0;
  frontal.goal_radius_min = frontal.goal_radius_max = 3.0;
  frontal.mass_min = frontal.mass_max = 3.0;
  frontal.friction_min = frontal.friction_max = 0.5;
  PolicyFn teacher = make_policy("teacher", TeacherParams{}, cfg);
  EpisodeRecord rec = run_episode(env, 1, teacher, "teacher", &frontal);
  CHECK(rec.outcome == EpisodeStatus::Success);
  CHECK(rec.goal_sector == GoalSector::Front);
  CHECK(rec.mass_bin == MassBin::Light);
}

TEST_CASE("scenario config validation") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.mass_min = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.goal_radius_min = 4.0;  // inverted range
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.timeout = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
