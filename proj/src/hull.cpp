#include "lehmerlab/hull.hpp"

#include <algorithm>

#include "lehmerlab/errors.hpp"

namespace lehmerlab {

LatticePointSet inverse_pairs(const Modulus& modulus) {
  LatticePointSet set{modulus.value(), {}};
  set.points.reserve(modulus.phi());
  const auto inv = modulus.inverse_table();
  for (u64 n = 1; n < modulus.value(); ++n) {
    if (inv[n] != 0) set.points.push_back({static_cast<i64>(n), static_cast<i64>(inv[n])});
  }
  return set;
}

__int128 orientation(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  return static_cast<__int128>(b.x - a.x) * (c.y - a.y) - static_cast<__int128>(b.y - a.y) * (c.x - a.x);
}

std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t n = points.size();
  if (n <= 2) return points;

  // Andrew's monotone chain; popping on orientation <= 0 discards collinear points.
  std::vector<LatticePoint> hull(2 * n);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (h >= 2 && orientation(hull[h - 2], hull[h - 1], points[i]) <= 0) --h;
    hull[h++] = points[i];
  }
  for (std::size_t i = n - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && orientation(hull[h - 2], hull[h - 1], points[i]) <= 0) --h;
    hull[h++] = points[i];
  }
  hull.resize(h - 1);
  // all points collinear: the chain degenerates to the two endpoints
  if (hull.size() == 2 && hull[0] == hull[1]) hull.pop_back();
  return hull;
}

bool hull_contains(const std::vector<LatticePoint>& hull, const LatticePoint& p) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return hull.front() == p;
  if (hull.size() == 2) {
    const auto& a = hull[0];
    const auto& b = hull[1];
    return orientation(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (orientation(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  }
  return true;
}

HullResult convex_hull_vertices(const Modulus& modulus) {
  if (modulus.value() < 3) throw DomainError("convex_hull_vertices: needs q >= 3");
  HullResult result;
  result.hull = convex_hull(inverse_pairs(modulus).points);
  result.vertices = result.hull.size();
  return result;
}

}  // namespace lehmerlab
