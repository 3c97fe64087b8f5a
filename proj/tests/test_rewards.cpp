#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pushsim/rewards.hpp"
#include "pushsim/scenario.hpp"

using namespace pushsim;

namespace {
const RewardConfig kCfg;
}

TEST_CASE("reach reward worked values") {
  CHECK(reach_reward(0.0, 0.0, kCfg) == 1.0);
  CHECK(reach_reward(2.0, 2.0, kCfg) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  double e1 = std::exp(-1.0);
  CHECK(reach_reward(0.0, 2.0, kCfg) ==
        doctest::Approx(2.0 * e1 / (1.0 + e1)).epsilon(1e-12));
  CHECK(reach_reward(0.0, 2.0, kCfg) == doctest::Approx(0.537883).epsilon(1e-6));
  CHECK(reach_reward(1e9, 1e9, kCfg) == 0.0);  // limit convention
  CHECK_THROWS_AS(reach_reward(-0.1, 0.0, kCfg), std::domain_error);
}

TEST_CASE("push reward worked values") {
  CHECK(push_reward({3.0, 4.0}, {3.0, 4.0}, kCfg) == 1.0);
  CHECK(push_reward({0.0, 0.0}, {10.0, 0.0}, kCfg) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(push_reward({0.0, 0.0}, {0.0, 3.0}, kCfg) ==
        doctest::Approx(0.913931).epsilon(1e-6));
}

TEST_CASE("track reward worked values") {
  CHECK(track_reward(0.0, kCfg) == 1.0);
  CHECK(track_reward(1.2, kCfg) == 0.0);  // outside the pi/3 half FOV
  CHECK(track_reward(-1.2, kCfg) == 0.0);
  CHECK(track_reward(0.5, kCfg) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("align reward worked values") {
  Vec2 obj{0.0, 0.0};
  // diametrically opposite the goal
  CHECK(align_reward({-1.0, 0.0}, obj, {1.0, 0.0}, kCfg) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // phi = pi/2
  CHECK(align_reward({0.0, 1.0}, obj, {1.0, 0.0}, kCfg) ==
        doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
  CHECK(align_reward({0.0, 1.0}, obj, {1.0, 0.0}, kCfg) ==
        doctest::Approx(0.018316).epsilon(1e-4));
  // on the goal side
  CHECK(align_reward({2.0, 0.0}, obj, {1.0, 0.0}, kCfg) ==
        doctest::Approx(std::exp(-16.0)).epsilon(1e-9));
  CHECK_THROWS_AS(align_reward(obj, obj, {1.0, 0.0}, kCfg), std::domain_error);
}

TEST_CASE("closed-form agreement on a generated suite") {
  RngStream rng(31, "closed-form");
  for (int i = 0; i < 1000; ++i) {
    double dl = rng.uniform(0.0, 5.0), dr = rng.uniform(0.0, 5.0);
    double rl = std::exp(-dl * dl / 4.0), rr = std::exp(-dr * dr / 4.0);
    CHECK(std::abs(reach_reward(dl, dr, kCfg) - 2.0 * rl * rr / (rl + rr)) < 1e-9);

    Vec2 o{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec2 g{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(std::abs(push_reward(o, g, kCfg) -
                   std::exp(-(g - o).norm_sq() / 100.0)) < 1e-9);

    double th = rng.uniform(-kPi, kPi);
    double want = std::abs(th) > kPi / 3.0 ? 0.0 : std::exp(-th * th / 0.25);
    CHECK(std::abs(track_reward(th, kCfg) - want) < 1e-9);

    Vec2 r{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    if ((r - o).norm() < 1e-6 || (g - o).norm() < 1e-6) continue;
    double phi = std::acos(std::clamp(
        (r - o).dot(g - o) / ((r - o).norm() * (g - o).norm()), -1.0, 1.0));
    double e = 1.0 - phi / kPi;
    CHECK(std::abs(align_reward(r, o, g, kCfg) - std::exp(-e * e / 0.0625)) < 1e-9);
  }
}

TEST_CASE("harmonic mean bounds over 1e5 pairs") {
  RngStream rng(37, "hm");
  for (int i = 0; i < 100000; ++i) {
    double dl = rng.uniform(0.0, 6.0), dr = rng.uniform(0.0, 6.0);
    double rl = std::exp(-dl * dl / 4.0), rr = std::exp(-dr * dr / 4.0);
    double hm = reach_reward(dl, dr, kCfg);
    double lo = std::min(rl, rr), hi = std::max(rl, rr);
    CHECK(hm >= lo - 1e-15);
    CHECK(hm <= std::min(2.0 * lo, hi) + 1e-15);
    CHECK(hm >= 0.0);
    CHECK(hm <= 1.0);
  }
}

TEST_CASE("rigid transform invariance over 1e5 scenes") {
  RngStream rng(41, "rigid");
  for (int i = 0; i < 100000; ++i) {
    Vec2 r{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec2 o{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec2 g{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    if ((r - o).norm() < 1e-3 || (g - o).norm() < 1e-3) continue;
    double ang = rng.uniform(-kPi, kPi);
    Vec2 shift{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    auto tf = [&](const Vec2& p) { return p.rotated(ang) + shift; };
    CHECK(align_reward(r, o, g, kCfg) ==
          doctest::Approx(align_reward(tf(r), tf(o), tf(g), kCfg)).epsilon(1e-9));
    CHECK(push_reward(o, g, kCfg) ==
          doctest::Approx(push_reward(tf(o), tf(g), kCfg)).epsilon(1e-9));
  }
}

TEST_CASE("align is radius-invariant and monotone in phi") {
  RngStream rng(43, "radial");
  Vec2 obj{1.0, -2.0};
  Vec2 goal{4.0, 1.0};
  for (int i = 0; i < 100000; ++i) {
    double phi = rng.uniform(0.02, kPi);
    Vec2 dir_goal = (goal - obj).normalized();
    Vec2 r = obj + dir_goal.rotated(phi) * rng.uniform(0.1, 20.0);
    double a = align_reward(r, obj, goal, kCfg);
    Vec2 r2 = obj + dir_goal.rotated(phi) * rng.uniform(0.1, 20.0);
    CHECK(align_reward(r2, obj, goal, kCfg) == doctest::Approx(a).epsilon(1e-9));
    Vec2 r3 = obj + dir_goal.rotated(phi * 0.9) * 1.0;
    CHECK(align_reward(r3, obj, goal, kCfg) < a + 1e-12);
  }
}

TEST_CASE("track symmetry and push monotonicity") {
  RngStream rng(47, "sym");
  for (int i = 0; i < 100000; ++i) {
    double th = rng.uniform(0.0, kPi);
    CHECK(track_reward(th, kCfg) == track_reward(-th, kCfg));
    double d1 = rng.uniform(0.0, 20.0);
    double d2 = d1 + rng.uniform(0.01, 5.0);
    CHECK(push_reward({0, 0}, {d2, 0}, kCfg) < push_reward({0, 0}, {d1, 0}, kCfg));
  }
}

TEST_CASE("step reward worked total and penalties") {
  WorldState w;
  // both ee on the box, object exactly at the goal, facing the object
  w.obj.pose = {{0.95, 0.0}, 0.0};
  w.goal = w.obj.pose.position;
  update_ee(w.robot, PhysicsConfig{});
  CommandVector zero;
  RewardBreakdown b = step_reward(w, zero, zero, kCfg);
  CHECK(b.reach == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.push == 1.0);
  CHECK(b.track == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.align == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.total == doctest::Approx(6.75).epsilon(1e-9));

  // identical consecutive commands: zero smoothness penalty
  CommandVector moving;
  moving.vx = 0.7;
  b = step_reward(w, moving, moving, kCfg);
  CHECK(b.smooth_pen == 0.0);

  // q_upper = (0.5, 0, ...) -> penalty 0.25, contribution -0.125
  w.robot.arm_q[0] = 0.5;
  update_ee(w.robot, PhysicsConfig{});
  b = step_reward(w, zero, zero, kCfg);
  CHECK(b.upper_pen == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(kCfg.w_upper * b.upper_pen == doctest::Approx(-0.125).epsilon(1e-12));
}

TEST_CASE("total equals the weighted sum of terms") {
  RngStream rng(53, "total");
  for (int i = 0; i < 20000; ++i) {
    WorldState w;
    w.obj.pose = {{rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(-kPi, kPi)};
    w.goal = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    w.robot.base = {{rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(-kPi, kPi)};
    for (double& q : w.robot.arm_q) q = rng.uniform(-0.8, 0.8);
    update_ee(w.robot, PhysicsConfig{});
    w.obj.tilt = rng.uniform(0.0, 0.2);
    CommandVector cmd, prev;
    cmd.vx = rng.uniform(-1, 1);
    prev.vy = rng.uniform(-1, 1);
    RewardBreakdown b = step_reward(w, cmd, prev, kCfg);
    double total = kCfg.w_reach * b.reach + kCfg.w_push * b.push +
                   kCfg.w_track * b.track + kCfg.w_align * b.align +
                   kCfg.w_smooth * b.smooth_pen + kCfg.w_balance * b.balance_pen +
                   kCfg.w_upper * b.upper_pen;
    CHECK(std::abs(b.total - total) < 1e-12);
    CHECK(b.reach >= 0.0);
    CHECK(b.reach <= 1.0);
    CHECK(b.push >= 0.0);
    CHECK(b.push <= 1.0);
    CHECK(b.track >= 0.0);
    CHECK(b.track <= 1.0);
    CHECK(b.align >= 0.0);
    CHECK(b.align <= 1.0);
  }
}

TEST_CASE("reward config validation") {
  RewardConfig c;
  CHECK_NOTHROW(c.validate());
  c.sigma_push = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RewardConfig{};
  c.w_smooth = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
