#pragma once

#include <cmath>

namespace conetime {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }

/// Signed angle from a to b in (-pi, pi].
inline double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

/// Closest distance from p to the segment [a, b].
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double u = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  u = u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
  return distance(p, a + ab * u);
}

/// Orientation-preserving isometry of the plane: p -> R p + t.
struct RigidMotion {
  double c = 1.0;  // cos of the rotation angle
  double s = 0.0;  // sin of the rotation angle
  Vec2 t{};

  static RigidMotion identity() { return {}; }
  static RigidMotion translation(Vec2 v) { return {1.0, 0.0, v}; }
  static RigidMotion rotation(double angle) { return {std::cos(angle), std::sin(angle), {}}; }

  /// The motion taking segment (a0, a1) onto (b0, b1); lengths are assumed equal.
  static RigidMotion matching(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    const Vec2 da = normalized(a1 - a0);
    const Vec2 db = normalized(b1 - b0);
    RigidMotion m{dot(da, db), cross(da, db), {}};
    const Vec2 mid_a = (a0 + a1) * 0.5;
    const Vec2 mid_b = (b0 + b1) * 0.5;
    m.t = mid_b - m.rotate(mid_a);
    return m;
  }

  Vec2 rotate(Vec2 v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }
  Vec2 operator()(Vec2 p) const { return rotate(p) + t; }

  /// (this * other)(p) = this(other(p)).
  RigidMotion operator*(const RigidMotion& o) const {
    RigidMotion r{c * o.c - s * o.s, s * o.c + c * o.s, {}};
    r.t = rotate(o.t) + t;
    return r;
  }

  RigidMotion inverse() const {
    RigidMotion r{c, -s, {}};
    r.t = -r.rotate(t);
    return r;
  }

  double angle() const { return std::atan2(s, c); }
};

}  // namespace conetime
