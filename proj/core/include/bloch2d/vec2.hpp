#pragma once

#include <cmath>

namespace bloch2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct Mat2 {
  // row-major: [a b; c d]
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 mul(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 transpose() const { return {a, c, b, d}; }
  double det() const { return a * d - b * c; }

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 rotation(double angle) {
    const double cs = std::cos(angle), sn = std::sin(angle);
    return {cs, -sn, sn, cs};
  }
  // reflection across the line through the origin at the given angle
  static Mat2 reflection(double angle) {
    const double cs = std::cos(2 * angle), sn = std::sin(2 * angle);
    return {cs, sn, sn, -cs};
  }
};

struct IVec2 {
  long x = 0;
  long y = 0;
  bool operator==(const IVec2& o) const { return x == o.x && y == o.y; }
  bool operator<(const IVec2& o) const { return x != o.x ? x < o.x : y < o.y; }
  IVec2 operator+(const IVec2& o) const { return {x + o.x, y + o.y}; }
  IVec2 operator-(const IVec2& o) const { return {x - o.x, y - o.y}; }
  IVec2 operator-() const { return {-x, -y}; }
};

}  // namespace bloch2d
