#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pushsim {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  // scalar z-component of the 3D cross product
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  Vec2 perp() const { return {-y, x}; }
  Vec2 normalized() const {
    double n = norm();
    if (n == 0.0) throw std::domain_error("normalized: zero vector");
    return {x / n, y / n};
  }
  Vec2 rotated(double angle) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Wraps to (-pi, pi].
double wrap_angle(double a);

struct Pose2 {
  Vec2 position;
  double yaw = 0.0;  // normalized to (-pi, pi]

  bool operator==(const Pose2&) const = default;
};

// Signed angle in (-pi, pi] between the pose heading and the direction to `to`.
double bearing(const Pose2& from, const Vec2& to);

// World point expressed in `frame` coordinates (inverse rigid transform).
Vec2 to_frame(const Pose2& frame, const Vec2& world_point);

// Frame-local point expressed in world coordinates.
Vec2 from_frame(const Pose2& frame, const Vec2& local_point);

// Counter-based deterministic RNG. A draw is a pure function of
// (seed, stream name, counter), so adding draws in one subsystem never
// perturbs the sequence seen by another.
class RngStream {
 public:
  RngStream(uint64_t seed, std::string_view stream_name);

  uint64_t next_u64();
  // uniform in [0, 1)
  double uniform();
  double uniform(double lo, double hi);
  // inclusive on both ends
  int64_t uniform_int(int64_t lo, int64_t hi);
  // Box-Muller; consumes exactly two draws per call
  double normal(double mean = 0.0, double stddev = 1.0);

  uint64_t seed() const { return seed_; }
  const std::string& name() const { return name_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  std::string name_;
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace pushsim
