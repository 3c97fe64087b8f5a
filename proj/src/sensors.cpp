#include "pushsim/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pushsim {

void CameraModel::validate() const {
  if (h_fov <= 0.0 || h_fov >= kPi)
    throw std::invalid_argument("camera: h_fov outside (0, pi)");
  if (!(far_plane > 0.0)) throw std::invalid_argument("camera: far_plane must be > 0");
  if (width <= 0 || height <= 0) throw std::invalid_argument("camera: bad resolution");
  if (!(aspect > 0.0)) throw std::invalid_argument("camera: aspect must be > 0");
}

void AugmentConfig::validate() const {
  if (dropout_prob < 0.0 || dropout_prob > 1.0)
    throw std::invalid_argument("augment: dropout_prob outside [0, 1]");
  if (far_patch_count_min < 0 || far_patch_count_max < far_patch_count_min)
    throw std::invalid_argument("augment: far patch count range");
  if (far_patch_size_min < 1 || far_patch_size_max < far_patch_size_min)
    throw std::invalid_argument("augment: far patch size range");
  if (corr_grid < 2) throw std::invalid_argument("augment: corr_grid must be >= 2");
  if (corr_sigma < 0.0) throw std::invalid_argument("augment: corr_sigma");
}

namespace {

struct Mat3 {
  double m[3][3];
  Vec3 mul(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 mul(const Mat3& o) const {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.m[i][j] = 0.0;
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
      }
    return r;
  }
};

Mat3 rot_z(double a) {
  double c = std::cos(a), s = std::sin(a);
  return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
}
// positive pitch tilts the optical axis up
Mat3 rot_y_up(double a) {
  double c = std::cos(a), s = std::sin(a);
  return {{{c, 0, -s}, {0, 1, 0}, {s, 0, c}}};
}
Mat3 rot_x(double a) {
  double c = std::cos(a), s = std::sin(a);
  return {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
}

struct CameraPose {
  Vec3 origin;
  Mat3 rot;  // camera -> world; camera axes: x forward, y left, z up
};

CameraPose camera_pose(const CameraModel& cam, const Pose2& base) {
  CameraPose p;
  Vec2 off = Vec2{cam.mount_offset.x, cam.mount_offset.y}.rotated(base.yaw);
  p.origin = {base.position.x + off.x, base.position.y + off.y, cam.mount_offset.z};
  p.rot = rot_z(base.yaw + cam.mount_yaw)
              .mul(rot_y_up(cam.mount_pitch))
              .mul(rot_x(cam.mount_roll));
  return p;
}

Ray pose_pixel_ray(const CameraPose& p, const CameraModel& cam, double row,
                   double col) {
  double tan_h = std::tan(0.5 * cam.h_fov);
  double tan_v = tan_h / cam.aspect;
  double u = (col + 0.5) / cam.width * 2.0 - 1.0;   // -1 left edge
  double v = (row + 0.5) / cam.height * 2.0 - 1.0;  // -1 top edge
  Vec3 d_cam = {1.0, -u * tan_h, -v * tan_v};
  return {p.origin, p.rot.mul(d_cam)};
}

}  // namespace

Ray pixel_ray(const CameraModel& cam, const Pose2& base, double row, double col) {
  return pose_pixel_ray(camera_pose(cam, base), cam, row, col);
}

double cast_ray(const Ray& ray, const ObjectSpec& spec, const Pose2& obj_pose,
                double far_plane, bool include_object) {
  double best = far_plane;

  if (ray.dir.z < 0.0) {
    double t = -ray.origin.z / ray.dir.z;
    if (t >= 0.0 && t < best) best = t;
  }

  if (include_object) {
    // slab test in the box frame: footprint extruded over z in [0, height]
    Vec2 o2 = to_frame(obj_pose, {ray.origin.x, ray.origin.y});
    Vec2 d2 = Vec2{ray.dir.x, ray.dir.y}.rotated(-obj_pose.yaw);
    double lo[3] = {-0.5 * spec.width, -0.5 * spec.depth, 0.0};
    double hi[3] = {0.5 * spec.width, 0.5 * spec.depth, spec.height};
    double o[3] = {o2.x, o2.y, ray.origin.z};
    double d[3] = {d2.x, d2.y, ray.dir.z};
    double t_near = 0.0, t_far = best;
    bool hit = true;
    for (int i = 0; i < 3 && hit; ++i) {
      if (d[i] == 0.0) {
        if (o[i] < lo[i] || o[i] > hi[i]) hit = false;
      } else {
        double t1 = (lo[i] - o[i]) / d[i];
        double t2 = (hi[i] - o[i]) / d[i];
        if (t1 > t2) std::swap(t1, t2);
        t_near = std::max(t_near, t1);
        t_far = std::min(t_far, t2);
        if (t_near > t_far) hit = false;
      }
    }
    if (hit && t_near < best) best = t_near;
  }
  return std::clamp(best, 0.0, far_plane);
}

DepthImage render_depth(const WorldState& world, const CameraModel& cam) {
  if (world.robot.fallen) throw std::logic_error("render_depth: robot has fallen");
  DepthImage img;
  img.width = cam.width;
  img.height = cam.height;
  img.timestamp = world.t;
  img.pixels.resize(static_cast<size_t>(cam.width) * cam.height);
  CameraPose pose = camera_pose(cam, world.robot.base);
  for (int r = 0; r < cam.height; ++r)
    for (int c = 0; c < cam.width; ++c) {
      Ray ray = pose_pixel_ray(pose, cam, r, c);
      img.at(r, c) = cast_ray(ray, world.obj_spec, world.obj.pose, cam.far_plane);
    }
  return img;
}

int ground_boundary_row(const CameraModel& cam, const Pose2& base) {
  double mid = 0.5 * (cam.width - 1);
  for (int r = 0; r < cam.height; ++r) {
    Ray ray = pixel_ray(cam, base, r, mid);
    if (ray.dir.z < 0.0 && -ray.origin.z / ray.dir.z <= cam.far_plane) return r;
  }
  return cam.height;
}

DepthImage apply_augmentations(const DepthImage& img, const AugmentConfig& cfg,
                               double far_plane, int ground_row, RngStream& rng) {
  cfg.validate();
  DepthImage out = img;
  const int w = img.width, h = img.height;

  if (cfg.far_patch_enable && ground_row > 0) {
    int count = static_cast<int>(
        rng.uniform_int(cfg.far_patch_count_min, cfg.far_patch_count_max));
    int region_h = std::min(ground_row, h);
    for (int k = 0; k < count; ++k) {
      int pw = std::min<int>(rng.uniform_int(cfg.far_patch_size_min, cfg.far_patch_size_max), w);
      int ph = std::min<int>(rng.uniform_int(cfg.far_patch_size_min, cfg.far_patch_size_max), region_h);
      int r0 = static_cast<int>(rng.uniform_int(0, region_h - ph));
      int c0 = static_cast<int>(rng.uniform_int(0, w - pw));
      // one value per 2x2-aligned block for a blocky far-depth texture
      for (int br = r0 / 2; br <= (r0 + ph - 1) / 2; ++br) {
        for (int bc = c0 / 2; bc <= (c0 + pw - 1) / 2; ++bc) {
          double val = rng.uniform(0.8, 1.0) * far_plane;
          for (int r = std::max(r0, br * 2); r < std::min(r0 + ph, br * 2 + 2); ++r)
            for (int c = std::max(c0, bc * 2); c < std::min(c0 + pw, bc * 2 + 2); ++c)
              out.at(r, c) = val;
        }
      }
    }
  }

  if (cfg.corr_noise_enable) {
    int g = cfg.corr_grid;
    std::vector<double> field(static_cast<size_t>(g) * g);
    for (double& f : field) f = rng.normal(0.0, cfg.corr_sigma);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        if (out.at(r, c) <= 0.0) continue;  // invalid pixels stay invalid
        double fr = std::clamp((r + 0.5) / h * g - 0.5, 0.0, g - 1.0);
        double fc = std::clamp((c + 0.5) / w * g - 0.5, 0.0, g - 1.0);
        int r0 = std::min(static_cast<int>(fr), g - 2);
        int c0 = std::min(static_cast<int>(fc), g - 2);
        double ar = fr - r0, ac = fc - c0;
        double v = field[r0 * g + c0] * (1 - ar) * (1 - ac) +
                   field[(r0 + 1) * g + c0] * ar * (1 - ac) +
                   field[r0 * g + c0 + 1] * (1 - ar) * ac +
                   field[(r0 + 1) * g + c0 + 1] * ar * ac;
        out.at(r, c) += v;
      }
  }

  if (cfg.dropout_enable) {
    for (double& p : out.pixels)
      if (rng.uniform() < cfg.dropout_prob) p = 0.0;
  }

  for (double& p : out.pixels) p = std::clamp(p, 0.0, far_plane);
  return out;
}

CameraModel perturb_extrinsics(const CameraModel& cam, const AugmentConfig& cfg,
                               RngStream& rng) {
  CameraModel out = cam;
  out.mount_offset.x += rng.uniform(-cfg.jitter_xyz, cfg.jitter_xyz);
  out.mount_offset.y += rng.uniform(-cfg.jitter_xyz, cfg.jitter_xyz);
  out.mount_offset.z += rng.uniform(-cfg.jitter_xyz, cfg.jitter_xyz);
  out.mount_yaw += rng.uniform(-cfg.jitter_yaw, cfg.jitter_yaw);
  out.mount_pitch += rng.uniform(-cfg.jitter_pitch, cfg.jitter_pitch);
  out.mount_roll += rng.uniform(-cfg.jitter_roll, cfg.jitter_roll);
  return out;
}

namespace {

// Single-frame localization; returns false when no foreground blob is found.
// center_out is in world coordinates.
bool locate_object_in_frame(const DepthImage& img, const CameraModel& cam,
                            const RobotState& robot, double assumed_footprint,
                            Vec2& center_out, double& confidence_out) {
  const int w = img.width, h = img.height;

  // foreground: noticeably nearer than the analytic ground/far background
  ObjectSpec none;
  CameraPose pose = camera_pose(cam, robot.base);
  std::vector<uint8_t> mask(static_cast<size_t>(w) * h, 0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double d = img.at(r, c);
      if (d <= 0.0 || d > 0.7 * cam.far_plane) continue;  // far-patch noise
      Ray ray = pose_pixel_ray(pose, cam, r, c);
      double bg = cast_ray(ray, none, {}, cam.far_plane, false);
      if (d < bg - 0.15) mask[r * w + c] = 1;
    }

  // largest 4-connected blob
  std::vector<int> label(mask.size(), -1);
  int best_area = 0, best_label = -1;
  double best_r = 0.0, best_c = 0.0;
  int next = 0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (!mask[r * w + c] || label[r * w + c] >= 0) continue;
      int area = 0;
      double sum_r = 0.0, sum_c = 0.0;
      std::deque<std::pair<int, int>> q{{r, c}};
      label[r * w + c] = next;
      while (!q.empty()) {
        auto [cr, cc] = q.front();
        q.pop_front();
        ++area;
        sum_r += cr;
        sum_c += cc;
        const int dr[4] = {1, -1, 0, 0}, dc[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nr = cr + dr[k], nc = cc + dc[k];
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          if (!mask[nr * w + nc] || label[nr * w + nc] >= 0) continue;
          label[nr * w + nc] = next;
          q.emplace_back(nr, nc);
        }
      }
      if (area > best_area) {
        best_area = area;
        best_label = next;
        best_r = sum_r / area;
        best_c = sum_c / area;
      }
      ++next;
    }

  if (best_area == 0) return false;

  // coarse estimate: bearing from the midpoint of the blob's angular
  // extremes, range from the median horizontal distance to the near surface
  // shifted to the nominal footprint center
  double axis_yaw = robot.base.yaw + cam.mount_yaw;  // bearings measured here
  double beta_min = kPi, beta_max = -kPi;
  std::vector<double> ranges;
  ranges.reserve(best_area);
  // one surface point per image column: the median-range blob pixel, which
  // rejects dropout/noise outliers within the column
  std::vector<Vec2> points;
  int c_lo = w, c_hi = -1, r_lo = h, r_hi = -1;
  for (int c = 0; c < w; ++c) {
    std::vector<std::pair<double, int>> col;  // (horizontal range, row)
    for (int r = 0; r < h; ++r) {
      if (label[r * w + c] != best_label) continue;
      c_lo = std::min(c_lo, c);
      c_hi = std::max(c_hi, c);
      r_lo = std::min(r_lo, r);
      r_hi = std::max(r_hi, r);
      Ray ray = pose_pixel_ray(pose, cam, r, c);
      Vec2 horiz = {ray.dir.x, ray.dir.y};
      double hn = horiz.norm();
      if (hn < 1e-9) continue;
      double beta = wrap_angle(std::atan2(horiz.y, horiz.x) - axis_yaw);
      beta_min = std::min(beta_min, beta);
      beta_max = std::max(beta_max, beta);
      double range = img.at(r, c) * hn;
      ranges.push_back(range);
      col.emplace_back(range, r);
    }
    if (col.empty()) continue;
    std::nth_element(col.begin(), col.begin() + col.size() / 2, col.end());
    auto [range, row] = col[col.size() / 2];
    Ray ray = pose_pixel_ray(pose, cam, row, c);
    double d = img.at(row, c);
    points.push_back({pose.origin.x + d * ray.dir.x, pose.origin.y + d * ray.dir.y});
  }
  if (ranges.empty()) return false;
  std::nth_element(ranges.begin(), ranges.begin() + ranges.size() / 2, ranges.end());
  double range = ranges[ranges.size() / 2] + 0.5 * assumed_footprint;
  double beta = axis_yaw + 0.5 * (beta_min + beta_max);
  Vec2 center = Vec2{pose.origin.x, pose.origin.y} +
                Vec2{std::cos(beta), std::sin(beta)} * range;
  double confidence = static_cast<double>(best_area) / (w * h);

  // refine by fitting the assumed square footprint to the surface points:
  // the coarse centroid heuristics bias up to ~0.15 m on oblique corner
  // views, while the points pin both visible faces
  if (points.size() >= 4) {
    double a = 0.5 * assumed_footprint;
    // a silhouette edge is only evidence if the column beyond it shows real
    // background; far-patch noise (or the image border) may hide the edge
    auto side_trusted = [&](int c_adj) {
      if (c_adj < 0 || c_adj >= w) return false;
      for (int r = r_lo; r <= r_hi; ++r)
        if (img.at(r, c_adj) > 0.7 * cam.far_plane) return false;
      return true;
    };
    bool trust_min, trust_max;
    {
      Ray lo = pose_pixel_ray(pose, cam, 0.5 * (r_lo + r_hi), c_lo);
      double beta_lo = wrap_angle(std::atan2(lo.dir.y, lo.dir.x) - axis_yaw);
      bool lo_is_min = std::abs(beta_lo - beta_min) < std::abs(beta_lo - beta_max);
      // column index runs opposite to bearing when the camera looks forward
      (lo_is_min ? trust_min : trust_max) = side_trusted(c_lo - 1);
      (lo_is_min ? trust_max : trust_min) = side_trusted(c_hi + 1);
    }
    auto cost = [&](double cx, double cy, double yaw) {
      double cs = std::cos(yaw), sn = std::sin(yaw), sum = 0.0;
      for (const Vec2& p : points) {
        double dx = p.x - cx, dy = p.y - cy;
        double qx = cs * dx + sn * dy, qy = -sn * dx + cs * dy;
        double e = std::max(std::abs(qx), std::abs(qy)) - a;
        double ae = std::abs(e);
        // Huber loss, linear beyond 0.1 m
        sum += ae <= 0.1 ? e * e : 0.1 * (2.0 * ae - 0.1);
      }
      // silhouette-extent constraints: a single visible face leaves the
      // lateral position otherwise unconstrained. The square's angular span
      // must stay inside the observed span (augmentations only erode the
      // silhouette, never extend it) and reach out to cover it.
      double smin = kPi, smax = -kPi;
      for (int k = 0; k < 4; ++k) {
        double qx = (k & 1) ? a : -a, qy = (k & 2) ? a : -a;
        double px = cx + cs * qx - sn * qy - pose.origin.x;
        double py = cy + sn * qx + cs * qy - pose.origin.y;
        double bk = wrap_angle(std::atan2(py, px) - axis_yaw);
        smin = std::min(smin, bk);
        smax = std::max(smax, bk);
      }
      // the true edge lies within the half pixel beyond the blob extreme;
      // protruding past it is impossible (augmentations only erode the
      // silhouette), so penalize that harder than falling short
      double half_px = 0.5 * cam.h_fov / w;
      double r2 = range * range;  // angular error in meters at object range
      auto edge_cost = [&](double e) {  // e > 0: square protrudes
        return r2 * std::min(e * e, 0.025 / r2);
      };
      if (trust_max) sum += edge_cost(smax - (beta_max + half_px));
      if (trust_min) sum += edge_cost((beta_min - half_px) - smin);
      return sum;
    };
    double bx = center.x, by = center.y, byaw = 0.0;
    double bcost = std::numeric_limits<double>::infinity();
    for (double yaw0 : {0.0, kPi / 6.0, kPi / 3.0}) {  // square period pi/2
      double x = center.x, y = center.y, ya = yaw0;
      double f = cost(x, y, ya);
      for (double step = 0.16; step >= 0.005; ) {
        bool moved = false;
        const double dx[6] = {step, -step, 0, 0, 0, 0};
        const double dy[6] = {0, 0, step, -step, 0, 0};
        const double dw[6] = {0, 0, 0, 0, step, -step};
        for (int k = 0; k < 6; ++k) {
          double fk = cost(x + dx[k], y + dy[k], ya + dw[k]);
          if (fk < f) {
            f = fk;
            x += dx[k];
            y += dy[k];
            ya += dw[k];
            moved = true;
          }
        }
        if (!moved) step *= 0.5;
      }
      if (f < bcost) {
        bcost = f;
        bx = x;
        by = y;
        byaw = ya;
      }
    }
    (void)byaw;
    center = {bx, by};
  }
  center_out = center;
  confidence_out = confidence;
  return true;
}

}  // namespace

ObjectEstimate estimate_object_from_depth(
    const std::vector<DepthImage>& stack, const CameraModel& cam,
    const RobotState& robot, const ObjectEstimate& previous,
    double assumed_footprint) {
  if (stack.empty()) throw std::invalid_argument("estimate: empty stack");
  Vec2 newest;
  double confidence = 0.0;
  if (!locate_object_in_frame(stack.back(), cam, robot, assumed_footprint,
                              newest, confidence))
    return {previous.rel_pos, 0.0};
  // average older frames that agree with the newest one: noise averages out
  // on a (near-)static scene while stale views of a moving camera, which
  // project through the current pose, land far away and are dropped
  Vec2 sum = newest;
  int n = 1;
  for (size_t i = 0; i + 1 < stack.size(); ++i) {
    Vec2 c;
    double conf;
    if (!locate_object_in_frame(stack[i], cam, robot, assumed_footprint, c, conf))
      continue;
    if ((c - newest).norm() > 0.15) continue;
    sum = sum + c;
    ++n;
  }
  return {to_frame(robot.base, sum * (1.0 / n)), confidence};
}

ObservationSet assemble_observations(const WorldState& world,
                                     const ObjectEstimate& estimate,
                                     const CommandVector& last_cmd,
                                     const std::vector<DepthImage>& depth_stack,
                                     bool contact) {
  ObservationSet obs;
  const RobotState& rb = world.robot;
  Vec2 rel_goal = to_frame(rb.base, world.goal);
  obs.relative_goal = rel_goal;

  auto& ta = obs.teacher_actor;
  Vec2 rel_l = (world.obj.pose.position - rb.ee_left).rotated(-rb.base.yaw);
  Vec2 rel_r = (world.obj.pose.position - rb.ee_right).rotated(-rb.base.yaw);
  ta[0] = rel_l.x; ta[1] = rel_l.y;
  ta[2] = rel_r.x; ta[3] = rel_r.y;
  double rel_yaw = wrap_angle(world.obj.pose.yaw - rb.base.yaw);
  ta[9] = std::cos(rel_yaw); ta[10] = std::sin(rel_yaw);
  for (int i = 0; i < kArmDof; ++i) ta[12 + i] = rb.arm_q[i];
  for (int i = 0; i < kArmDof; ++i) ta[22 + i] = rb.arm_qd[i];
  Vec2 v_body = rb.lin_vel.rotated(-rb.base.yaw);
  ta[32] = v_body.x; ta[33] = v_body.y;
  ta[37] = rb.ang_vel;
  ta[40] = -1.0;  // projected gravity, upright planar robot
  ta[41] = rel_goal.x; ta[42] = rel_goal.y;
  auto act = last_cmd.flat();
  for (int i = 0; i < kActionDim; ++i) ta[43 + i] = act[i];

  auto& cp = obs.critic_priv;
  std::copy(ta.begin(), ta.end(), cp.begin());
  cp[56] = contact ? 1.0 : 0.0;
  cp[57] = world.obj_spec.com_offset.x;
  cp[58] = world.obj_spec.com_offset.y;
  cp[60] = world.obj_spec.mass;
  cp[69] = world.obj_spec.width;
  cp[70] = world.obj_spec.depth;
  cp[71] = world.obj_spec.height;
  Vec2 ov = world.obj.lin_vel.rotated(-rb.base.yaw);
  cp[78] = ov.x; cp[79] = ov.y;
  cp[83] = world.obj.ang_vel;

  auto& sp = obs.student_proprio;
  sp[2] = -1.0;  // projected gravity
  sp[5] = rb.ang_vel;
  for (int i = 0; i < kArmDof; ++i) sp[6 + i] = rb.arm_q[i];     // leg slots stay 0
  for (int i = 0; i < kArmDof; ++i) sp[29 + i] = rb.arm_qd[i];
  for (int i = 0; i < kActionDim; ++i) sp[52 + i] = act[i];
  sp[65] = rel_goal.x; sp[66] = rel_goal.y;

  obs.depth_stack = depth_stack;
  (void)estimate;
  return obs;
}

DepthImage downsample(const DepthImage& img, int out_width, int out_height) {
  DepthImage out;
  out.width = out_width;
  out.height = out_height;
  out.timestamp = img.timestamp;
  out.pixels.resize(static_cast<size_t>(out_width) * out_height);
  double sx = static_cast<double>(img.width) / out_width;
  double sy = static_cast<double>(img.height) / out_height;
  for (int r = 0; r < out_height; ++r)
    for (int c = 0; c < out_width; ++c) {
      double y0 = r * sy, y1 = (r + 1) * sy;
      double x0 = c * sx, x1 = (c + 1) * sx;
      double sum = 0.0, wsum = 0.0;
      for (int ir = static_cast<int>(y0); ir < img.height && ir < y1; ++ir)
        for (int ic = static_cast<int>(x0); ic < img.width && ic < x1; ++ic) {
          double wy = std::min<double>(ir + 1, y1) - std::max<double>(ir, y0);
          double wx = std::min<double>(ic + 1, x1) - std::max<double>(ic, x0);
          sum += img.at(ir, ic) * wy * wx;
          wsum += wy * wx;
        }
      out.at(r, c) = wsum > 0.0 ? sum / wsum : 0.0;
    }
  return out;
}

void write_pfm(const DepthImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_pfm: cannot open " + path);
  f << "Pf\n" << img.width << " " << img.height << "\n-1.0\n";
  // PFM stores rows bottom-up
  for (int r = img.height - 1; r >= 0; --r)
    for (int c = 0; c < img.width; ++c) {
      float v = static_cast<float>(img.at(r, c));
      f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

void write_pgm(const DepthImage& img, const std::string& path, double far_plane) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_pgm: cannot open " + path);
  f << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double v = std::clamp(img.at(r, c) / far_plane, 0.0, 1.0);
      unsigned char b = static_cast<unsigned char>(std::lround(v * 255.0));
      f.write(reinterpret_cast<const char*>(&b), 1);
    }
}

}  // namespace pushsim
