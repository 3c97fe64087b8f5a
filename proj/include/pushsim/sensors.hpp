#pragma once

#include <array>
#include <string>
#include <vector>

#include "pushsim/core.hpp"
#include "pushsim/physics.hpp"
#include "pushsim/scenario.hpp"

namespace pushsim {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct CameraModel {
  int width = 32;
  int height = 32;
  double h_fov = 2.0 * kPi / 3.0;  // horizontal field of view
  // 16:9 source aspect fixes the vertical FOV regardless of the pixel grid
  double aspect = 640.0 / 360.0;
  Vec3 mount_offset = {0.0, 0.0, 1.10};  // relative to base, base frame
  double mount_yaw = 0.0;
  double mount_pitch = -0.1745329251994330;  // -10 deg, positive is up
  double mount_roll = 0.0;
  double far_plane = 10.0;

  void validate() const;
};

struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // row-major, meters; 0 encodes invalid
  double timestamp = 0.0;

  double& at(int row, int col) { return pixels[row * width + col]; }
  double at(int row, int col) const { return pixels[row * width + col]; }
};

struct AugmentConfig {
  bool far_patch_enable = true;
  int far_patch_count_min = 1, far_patch_count_max = 3;
  int far_patch_size_min = 4, far_patch_size_max = 12;  // px
  bool corr_noise_enable = true;
  int corr_grid = 4;
  double corr_sigma = 0.05;  // m
  bool dropout_enable = true;
  double dropout_prob = 0.05;
  double jitter_xyz = 0.03;                       // +-3 cm
  double jitter_yaw = 5.0 * kPi / 180.0;          // +-5 deg
  double jitter_pitch = 5.0 * kPi / 180.0;        // +-5 deg
  double jitter_roll = 2.0 * kPi / 180.0;         // +-2 deg

  void validate() const;
};

// World-frame ray for a (possibly fractional) pixel position; direction has
// unit projection on the optical axis, so the ray parameter is metric depth.
struct Ray {
  Vec3 origin;
  Vec3 dir;
};
Ray pixel_ray(const CameraModel& cam, const Pose2& base, double row, double col);

// Nearest hit of a ray against the box (footprint extruded to its height)
// and the ground plane; far_plane when nothing is hit.
double cast_ray(const Ray& ray, const ObjectSpec& spec, const Pose2& obj_pose,
                double far_plane, bool include_object = true);

DepthImage render_depth(const WorldState& world, const CameraModel& cam);

// First image row whose center-column ray reaches the ground within the far
// plane; rows above it see background/sky.
int ground_boundary_row(const CameraModel& cam, const Pose2& base);

// Far-plane patches, correlated low-frequency noise, pixel dropout — in that
// order, all clamped to [0, far_plane].
DepthImage apply_augmentations(const DepthImage& img, const AugmentConfig& cfg,
                               double far_plane, int ground_row, RngStream& rng);

CameraModel perturb_extrinsics(const CameraModel& cam, const AugmentConfig& cfg,
                               RngStream& rng);

struct ObjectEstimate {
  Vec2 rel_pos;       // robot base frame
  double confidence = 0.0;
};

// Foreground blob segmentation against the analytic background, then a
// square-footprint fit to the per-column surface points constrained by the
// silhouette extent; older stack frames that agree with the newest are
// averaged in. Stands in for a learned encoder.
ObjectEstimate estimate_object_from_depth(
    const std::vector<DepthImage>& stack, const CameraModel& cam,
    const RobotState& robot, const ObjectEstimate& previous,
    double assumed_footprint = 1.0);

constexpr int kTeacherObsDim = 56;
constexpr int kCriticObsDim = 84;
constexpr int kStudentObsDim = 67;
constexpr int kDepthStackLen = 3;

// Layouts (zero-padded where the planar model has no analog):
//  teacher_actor (56): ee-object rel pos [0:9) (left xy, right xy, pad),
//    object rotation [9:12) (cos, sin, pad), arm q [12:22), arm qd [22:32),
//    base lin vel [32:35), base ang vel [35:38), projected gravity [38:41),
//    relative goal [41:43), last action [43:56).
//  critic_priv (84): teacher_actor then contact [56], object CoM [57:60),
//    mass [60:69), dims [69:78), object lin vel [78:81), ang vel [81:84).
//  student_proprio (67): gravity [0:3), base ang vel [3:6), dof pos [6:29)
//    (10 arm + 13 zero leg slots), dof vel [29:52), last action [52:65),
//    relative goal [65:67).
struct ObservationSet {
  std::array<double, kTeacherObsDim> teacher_actor{};
  std::array<double, kCriticObsDim> critic_priv{};
  std::array<double, kStudentObsDim> student_proprio{};
  std::vector<DepthImage> depth_stack;  // oldest -> newest
  Vec2 relative_goal;
};

ObservationSet assemble_observations(const WorldState& world,
                                     const ObjectEstimate& estimate,
                                     const CommandVector& last_cmd,
                                     const std::vector<DepthImage>& depth_stack,
                                     bool contact);

// Area-average resample (supports the 640x360 -> 32x32 fidelity path).
DepthImage downsample(const DepthImage& img, int out_width, int out_height);

void write_pfm(const DepthImage& img, const std::string& path);
void write_pgm(const DepthImage& img, const std::string& path, double far_plane);

}  // namespace pushsim
