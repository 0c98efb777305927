#pragma once

#include <array>
#include <cmath>

namespace tridg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {a * x, a * y}; }
  Vec2 operator/(double a) const { return {x / a, y / a}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double a, const Vec2& v) { return {a * v.x, a * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

using Tri = std::array<Vec2, 3>;

inline double tri_area_signed(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

inline double tri_area(const Tri& t) {
  return std::abs(tri_area_signed(t[0], t[1], t[2]));
}

inline Vec2 tri_centroid(const Tri& t) {
  return (t[0] + t[1] + t[2]) / 3.0;
}

inline double tri_circumradius(const Tri& t) {
  const double a = norm(t[1] - t[2]);
  const double b = norm(t[2] - t[0]);
  const double c = norm(t[0] - t[1]);
  return a * b * c / (4.0 * tri_area(t));
}

inline double tri_inradius(const Tri& t) {
  const double a = norm(t[1] - t[2]);
  const double b = norm(t[2] - t[0]);
  const double c = norm(t[0] - t[1]);
  return 2.0 * tri_area(t) / (a + b + c);
}

// Average side length; the paper's working definition of the grid size h.
inline double tri_hsize(const Tri& t) {
  return (norm(t[1] - t[0]) + norm(t[2] - t[1]) + norm(t[0] - t[2])) / 3.0;
}

inline bool point_in_tri(const Vec2& p, const Tri& t, double tol = 1e-12) {
  const double a = tri_area_signed(t[0], t[1], t[2]);
  const double l0 = tri_area_signed(p, t[1], t[2]) / a;
  const double l1 = tri_area_signed(t[0], p, t[2]) / a;
  const double l2 = tri_area_signed(t[0], t[1], p) / a;
  return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

}  // namespace tridg
