#pragma once

#include <cmath>

namespace bplab {

/// A point or direction in the frequency or physical plane.
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
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Perpendicular with the fixed convention v^perp = (-v2, v1).
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Scalar cross product a x b = a1 b2 - a2 b1.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

}  // namespace bplab
