#pragma once

#include <cmath>
#include <numbers>

namespace wheelsim {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Segment {
  Vec2 a;
  Vec2 b;
  friend constexpr bool operator==(const Segment&, const Segment&) = default;
};

/// Parameter in [0,1] of the point on `seg` closest to `p`.
/// Degenerate segments project to their first endpoint.
inline double closest_param(Vec2 p, const Segment& seg) {
  const Vec2 d = seg.b - seg.a;
  const double len2 = dot(d, d);
  if (len2 <= 0.0) return 0.0;
  const double t = dot(p - seg.a, d) / len2;
  return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

inline Vec2 closest_point(Vec2 p, const Segment& seg) {
  const double t = closest_param(p, seg);
  return seg.a + t * (seg.b - seg.a);
}

inline double point_segment_distance(Vec2 p, const Segment& seg) {
  return distance(p, closest_point(p, seg));
}

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (a > -kPi && a <= kPi) return a;
  a = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (a <= -kPi) a += kTwoPi;
  return a;
}

}  // namespace wheelsim
