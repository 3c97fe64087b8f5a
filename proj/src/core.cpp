#include "pushsim/core.hpp"

namespace pushsim {

double wrap_angle(double a) {
  if (!std::isfinite(a)) throw std::domain_error("wrap_angle: non-finite input");
  double r = std::fmod(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

double bearing(const Pose2& from, const Vec2& to) {
  Vec2 d = to - from.position;
  if (d.x == 0.0 && d.y == 0.0)
    throw std::domain_error("bearing: coincident points");
  return wrap_angle(std::atan2(d.y, d.x) - from.yaw);
}

Vec2 to_frame(const Pose2& frame, const Vec2& world_point) {
  Vec2 d = world_point - frame.position;
  return d.rotated(-frame.yaw);
}

Vec2 from_frame(const Pose2& frame, const Vec2& local_point) {
  return frame.position + local_point.rotated(frame.yaw);
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t seed, std::string_view stream_name)
    : seed_(seed), name_(stream_name) {
  key_ = splitmix64(splitmix64(seed) ^ fnv1a64(name_));
}

uint64_t RngStream::next_u64() {
  uint64_t v = splitmix64(key_ + splitmix64(counter_));
  ++counter_;
  return v;
}

double RngStream::uniform() {
  // 53 mantissa bits
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int64_t RngStream::uniform_int(int64_t lo, int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int64_t>(next_u64() % span);
}

double RngStream::normal(double mean, double stddev) {
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  return mean + stddev * z;
}

}  // namespace pushsim
