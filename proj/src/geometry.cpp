#include "geometry.hpp"

#include <cstring>

namespace rdloc {

Polygon clip_halfplane(const Polygon& poly, const Line& line, int keep, double snap_tol) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  auto side = [&](const Vec2& p) {
    double d = line.dist(p) * keep;
    if (std::abs(d) <= snap_tol) return 0;
    return d > 0 ? 1 : -1;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const int sa = side(a);
    const int sb = side(b);
    if (sa >= 0) out.push_back(a);
    if (sa * sb < 0) {
      // edge crosses strictly; intersection parameter from exact distances
      const double da = line.dist(a);
      const double db = line.dist(b);
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

static void fan_triangulate(const Polygon& poly, std::vector<Triangle>& out, double area_drop_tol,
                            double scale_sq) {
  if (poly.size() < 3) return;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    Triangle t{poly[0], poly[i], poly[i + 1]};
    if (area(t) > area_drop_tol * scale_sq) out.push_back(t);
  }
}

std::vector<Triangle> split_by_lines(const Triangle& t, const std::vector<Line>& lines,
                                     double snap_tol, double area_drop_tol) {
  std::vector<Polygon> pieces{{t[0], t[1], t[2]}};
  for (const Line& line : lines) {
    std::vector<Polygon> next;
    for (const Polygon& p : pieces) {
      Polygon lo = clip_halfplane(p, line, -1, snap_tol);
      Polygon hi = clip_halfplane(p, line, +1, snap_tol);
      if (lo.size() >= 3) next.push_back(std::move(lo));
      if (hi.size() >= 3) next.push_back(std::move(hi));
    }
    pieces = std::move(next);
  }
  std::vector<Triangle> out;
  const double scale_sq = area(t);
  for (const Polygon& p : pieces) fan_triangulate(p, out, area_drop_tol, scale_sq);
  return out;
}

uint64_t hash_doubles(const double* data, std::size_t n, uint64_t seed) {
  uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

} // namespace rdloc
