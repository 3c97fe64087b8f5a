#include "pushsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pushsim/rewards.hpp"

namespace pushsim {

void TeacherParams::validate() const {
  if (!(standoff > 0.0 && approach_speed > 0.0 && push_speed > 0.0 &&
        heading_gain > 0.0 && lateral_gain > 0.0))
    throw std::invalid_argument("teacher: parameters must be positive");
  if (!(realign_threshold > 0.0 && realign_threshold < 1.0))
    throw std::invalid_argument("teacher: realign_threshold outside (0, 1)");
}

std::vector<double> TeacherParams::to_vector() const {
  return {standoff, approach_speed, push_speed, heading_gain, lateral_gain,
          realign_threshold};
}

TeacherParams TeacherParams::from_vector(const std::vector<double>& v,
                                         const TeacherParams& base) {
  if (v.size() != 6) throw std::invalid_argument("TeacherParams: expected 6 values");
  TeacherParams p = base;
  p.standoff = std::clamp(v[0], 0.05, 3.0);
  p.approach_speed = std::clamp(v[1], 0.05, kMaxLinVel);
  p.push_speed = std::clamp(v[2], 0.05, kMaxLinVel);
  p.heading_gain = std::clamp(v[3], 0.05, 10.0);
  p.lateral_gain = std::clamp(v[4], 0.05, 10.0);
  p.realign_threshold = std::clamp(v[5], 0.05, 0.99);
  return p;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b,
                              double* t_out = nullptr) {
  Vec2 ab = b - a;
  double len2 = ab.norm_sq();
  if (len2 == 0.0) {
    if (t_out) *t_out = 0.0;
    return (p - a).norm();
  }
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  if (t_out) *t_out = t;
  return (p - (a + ab * t)).norm();
}

}  // namespace

PilotPhase pilot_phase(const Vec2& rel_obj, const Vec2& rel_goal,
                       const TeacherParams& params) {
  Vec2 away = rel_obj - rel_goal;
  if (away.norm() < 1e-9) return PilotPhase::Push;  // object already at goal
  Vec2 w = rel_obj + away.normalized() * params.standoff;
  double theta_align = alignment_angle({0.0, 0.0}, rel_obj, rel_goal);
  if (theta_align >= params.realign_threshold &&
      w.norm() <= 1.2 * params.standoff)
    return PilotPhase::Push;
  return PilotPhase::Align;
}

CommandVector pilot_command(const Vec2& rel_obj, const Vec2& rel_goal,
                            const PilotGeometry& geom, const TeacherParams& params,
                            const PhysicsConfig& pcfg) {
  CommandVector cmd;
  double obj_dist = rel_obj.norm();
  if (obj_dist < 1e-6) return cmd;
  double bearing_obj = std::atan2(rel_obj.y, rel_obj.x);

  if (!params.align_enabled) {
    // greedy: head straight for the object and keep advancing into it
    cmd.vx = params.approach_speed * rel_obj.x / obj_dist;
    cmd.vy = params.approach_speed * rel_obj.y / obj_dist;
    cmd.v_ang = params.heading_gain * bearing_obj;
    if (obj_dist < 1.5) {
      cmd.arm_residual[0] = kMaxArmResidual;
      cmd.arm_residual[5] = kMaxArmResidual;
    }
    cmd.clamp();
    return cmd;
  }

  Vec2 away = rel_obj - rel_goal;
  Vec2 d = away.norm() > 1e-9 ? (-away).normalized() : Vec2{1.0, 0.0};

  // object already inside the success ball: stop and let the hold timer run
  if ((rel_goal - rel_obj).norm() < 0.18) {
    cmd.v_ang = 0.2 * bearing_obj;
    cmd.clamp();
    return cmd;
  }

  if (pilot_phase(rel_obj, rel_goal, params) == PilotPhase::Push) {
    double ee_eff = pcfg.ee_forward + pcfg.ee_forward_gain * kMaxArmResidual;
    Vec2 com_perp = geom.rel_com - d * geom.rel_com.dot(d);
    Vec2 target = rel_obj - d * (geom.face_dist + ee_eff - 0.10) - com_perp * 0.5;
    Vec2 v_dir = target.norm() > 0.02 ? target.normalized() : d;
    cmd.vx = params.push_speed * v_dir.x;
    cmd.vy = params.push_speed * v_dir.y;
    double lateral_err = 0.0;
    if (rel_goal.norm() > 0.3)
      lateral_err = rel_goal.normalized().cross(rel_obj);
    cmd.v_ang = params.heading_gain * bearing_obj + params.lateral_gain * lateral_err;
    cmd.arm_residual[0] = kMaxArmResidual;
    cmd.arm_residual[5] = kMaxArmResidual;
  } else {
    Vec2 w = rel_obj - d * params.standoff;
    Vec2 target = w;
    // keep the base path clear of the footprint by at least the ee reach
    double clear = geom.avoid_radius + pcfg.ee_forward + pcfg.ee_radius + 0.10;
    double orbit_r = clear + 0.25;
    double seg_t = 0.0;
    double seg_d = point_segment_distance(rel_obj, {0.0, 0.0}, w, &seg_t);
    if (obj_dist < orbit_r || (seg_d < clear && seg_t < 0.85)) {
      // straight segment crosses the expanded footprint (or we are already
      // inside it): orbit the object, blending a tangential step toward the
      // standoff point with a radial correction onto the orbit circle
      Vec2 radial_out = rel_obj * (-1.0 / obj_dist);
      double phi_r = std::atan2(radial_out.y, radial_out.x);
      double phi_w = std::atan2(w.y - rel_obj.y, w.x - rel_obj.x);
      double side = wrap_angle(phi_w - phi_r) >= 0.0 ? 1.0 : -1.0;
      Vec2 tangent = radial_out.perp() * side;
      double radial_gain = std::clamp((orbit_r - obj_dist) * 2.0, -0.5, 1.5);
      // waypoint one meter along the orbit field from the current position
      Vec2 dir = tangent + radial_out * radial_gain;
      target = dir.normalized() * 1.0;
    }
    double td = target.norm();
    if (td > 0.05) {
      double speed = params.approach_speed * std::min(1.0, td / 0.5);
      cmd.vx = speed * target.x / td;
      cmd.vy = speed * target.y / td;
    }
    cmd.v_ang = params.heading_gain * bearing_obj;
  }
  cmd.clamp();
  return cmd;
}

PilotGeometry privileged_geometry(const WorldState& world) {
  PilotGeometry g;
  const ObjectSpec& s = world.obj_spec;
  g.avoid_radius = 0.5 * std::hypot(s.width, s.depth);
  Vec2 d_world = world.goal - world.obj.pose.position;
  if (d_world.norm() > 1e-9) {
    Vec2 d = d_world.normalized().rotated(-world.obj.pose.yaw);
    g.face_dist = 0.5 * s.width * std::abs(d.x) + 0.5 * s.depth * std::abs(d.y);
  } else {
    g.face_dist = 0.5 * std::min(s.width, s.depth);
  }
  g.rel_com = s.com_offset.rotated(
      wrap_angle(world.obj.pose.yaw - world.robot.base.yaw));
  return g;
}

CommandVector teacher_act(const WorldState& world, const TeacherParams& params,
                          const PhysicsConfig& pcfg) {
  if (world.status != EpisodeStatus::Running)
    throw std::logic_error("teacher_act: episode not running");
  Vec2 rel_obj = to_frame(world.robot.base, world.obj.pose.position);
  Vec2 rel_goal = to_frame(world.robot.base, world.goal);
  return pilot_command(rel_obj, rel_goal, privileged_geometry(world), params, pcfg);
}

CommandVector student_act(const ObservationSet& obs, const ObjectEstimate& estimate,
                          const TeacherParams& params, const PhysicsConfig& pcfg,
                          const PilotGeometry& geom) {
  if (estimate.confidence <= 0.0) {
    // lost the object: rotate in place until it re-enters the estimate
    CommandVector cmd;
    cmd.v_ang = 0.5;
    return cmd;
  }
  return pilot_command(estimate.rel_pos, obs.relative_goal, geom, params, pcfg);
}

void CemConfig::validate() const {
  if (population < 8) throw std::invalid_argument("cem: population must be >= 8");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0))
    throw std::invalid_argument("cem: elite_fraction outside (0, 1)");
  if (iterations < 1) throw std::invalid_argument("cem: iterations must be >= 1");
  if (episodes_per_candidate < 1)
    throw std::invalid_argument("cem: episodes_per_candidate must be >= 1");
}

int CemConfig::elite_count() const {
  return std::max(1, static_cast<int>(std::ceil(population * elite_fraction)));
}

std::vector<double> cem_optimize_vec(
    const std::vector<double>& init_mean, const CemConfig& cfg,
    const std::function<double(const std::vector<double>&, uint64_t)>& episode_return,
    std::vector<CemTracePoint>* trace) {
  cfg.validate();
  const size_t dim = init_mean.size();
  std::vector<double> mean = init_mean;
  std::vector<double> stddev = cfg.init_std;
  if (stddev.empty()) {
    stddev.resize(dim);
    for (size_t i = 0; i < dim; ++i) stddev[i] = 0.1 * std::abs(mean[i]) + 0.05;
  }
  if (stddev.size() != dim) throw std::invalid_argument("cem: init_std size mismatch");

  RngStream sampler(cfg.seed, "cem-sampler");
  const int n_elite = cfg.elite_count();

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    std::vector<std::vector<double>> pop(cfg.population);
    std::vector<double> score(cfg.population);
    for (int k = 0; k < cfg.population; ++k) {
      pop[k].resize(dim);
      for (size_t i = 0; i < dim; ++i)
        pop[k][i] = mean[i] + stddev[i] * sampler.normal();
    }
    for (int k = 0; k < cfg.population; ++k) {
      double sum = 0.0;
      bool bad = false;
      for (int e = 0; e < cfg.episodes_per_candidate; ++e) {
        // common random numbers: the same seed set for every candidate
        uint64_t seed = cfg.seed ^ (static_cast<uint64_t>(iter) << 32 | e);
        double r = episode_return(pop[k], seed);
        if (!std::isfinite(r)) { bad = true; break; }
        sum += r;
      }
      score[k] = bad ? -std::numeric_limits<double>::infinity()
                     : sum / cfg.episodes_per_candidate;
    }

    std::vector<int> order(cfg.population);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return score[a] > score[b]; });
    std::vector<int> elites;
    for (int idx : order) {
      if (!std::isfinite(score[idx])) break;
      elites.push_back(idx);
      if (static_cast<int>(elites.size()) == n_elite) break;
    }
    if (elites.empty()) continue;  // every candidate diverged; keep the mean

    std::vector<double> new_mean(dim, 0.0), new_var(dim, 0.0);
    for (int idx : elites)
      for (size_t i = 0; i < dim; ++i) new_mean[i] += pop[idx][i];
    for (size_t i = 0; i < dim; ++i) new_mean[i] /= elites.size();
    for (int idx : elites)
      for (size_t i = 0; i < dim; ++i) {
        double d = pop[idx][i] - new_mean[i];
        new_var[i] += d * d;
      }
    for (size_t i = 0; i < dim; ++i) {
      // fold the mean shift into the refit variance so the search cannot
      // stall while the mean is still travelling toward the optimum
      double shift = new_mean[i] - mean[i];
      stddev[i] = std::max(
          std::sqrt(new_var[i] / elites.size() + shift * shift), 1e-6);
    }
    mean = new_mean;

    if (trace) {
      double elite_sum = 0.0;
      for (int idx : elites) elite_sum += score[idx];
      trace->push_back({iter, elite_sum / elites.size(), score[order[0]]});
    }
  }
  return mean;
}

}  // namespace pushsim
