#ifndef RDLOC_GEOMETRY_HPP
#define RDLOC_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rdloc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline Vec2 midpoint(const Vec2& a, const Vec2& b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

using Triangle = std::array<Vec2, 3>;

inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

inline double area(const Triangle& t) { return std::abs(signed_area(t[0], t[1], t[2])); }

inline double diameter(const Triangle& t) {
  double h = norm(t[1] - t[0]);
  h = std::max(h, norm(t[2] - t[1]));
  return std::max(h, norm(t[0] - t[2]));
}

/// Diameter of the inscribed ball, 2*area/semiperimeter... rho = 2*|K|/s with
/// s the half-perimeter gives the inradius; the paper's rho_K is the inscribed
/// ball diameter, i.e. twice that.
inline double inscribed_diameter(const Triangle& t) {
  const double a = norm(t[1] - t[0]);
  const double b = norm(t[2] - t[1]);
  const double c = norm(t[0] - t[2]);
  return 4.0 * area(t) / (a + b + c);
}

inline Vec2 centroid(const Triangle& t) {
  return {(t[0].x + t[1].x + t[2].x) / 3.0, (t[0].y + t[1].y + t[2].y) / 3.0};
}

/// Barycentric coordinates of p with respect to t (no clamping).
inline std::array<double, 3> barycentric(const Triangle& t, const Vec2& p) {
  const double d = cross(t[1] - t[0], t[2] - t[0]);
  const double l1 = cross(p - t[0], t[2] - t[0]) / d;
  const double l2 = cross(t[1] - t[0], p - t[0]) / d;
  return {1.0 - l1 - l2, l1, l2};
}

inline bool contains(const Triangle& t, const Vec2& p, double tol) {
  const auto l = barycentric(t, p);
  return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

/// An oriented line n.x = c used to describe gradient kinks of target
/// functions; dist() is positive on the side the normal points to.
struct Line {
  Vec2 normal;   // need not be unit length
  double offset; // n . x = offset on the line

  double dist(const Vec2& p) const { return dot(normal, p) - offset; }

  static Line vertical(double x0) { return {{1.0, 0.0}, x0}; }
};

using Polygon = std::vector<Vec2>;

/// Clips a convex polygon against the half-plane dist >= 0 (keep==+1) or
/// dist <= 0 (keep==-1). Vertices within snap_tol of the line are kept on it.
Polygon clip_halfplane(const Polygon& poly, const Line& line, int keep, double snap_tol);

/// Splits a triangle along a set of lines; returns a fan triangulation of the
/// resulting pieces. Pieces of relative area below area_drop_tol are dropped.
std::vector<Triangle> split_by_lines(const Triangle& t, const std::vector<Line>& lines,
                                     double snap_tol, double area_drop_tol = 1e-14);

/// FNV-1a over the bit patterns of a list of doubles (order-sensitive).
uint64_t hash_doubles(const double* data, std::size_t n, uint64_t seed = 1469598103934665603ull);

} // namespace rdloc

#endif
