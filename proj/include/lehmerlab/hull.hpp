#pragma once

#include <cstdint>
#include <vector>

#include "lehmerlab/modcore.hpp"

namespace lehmerlab {

struct LatticePoint {
  i64 x = 0;
  i64 y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Integer points with coordinates in [1, q).
struct LatticePointSet {
  u64 q = 0;
  std::vector<LatticePoint> points;
};

/// N(q) = {(n, inv(n)) : n in U_q}, ordered by n.
LatticePointSet inverse_pairs(const Modulus& modulus);

/// Cross product (b - a) x (c - a); positive for a counter-clockwise turn.
__int128 orientation(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c);

/// Strict convex hull, counter-clockwise from the lowest-leftmost point.
/// Collinear boundary points are dropped; one or two distinct points come back as-is.
std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> points);

/// Inside or on the boundary of a counter-clockwise strict hull.
bool hull_contains(const std::vector<LatticePoint>& hull, const LatticePoint& p);

struct HullResult {
  std::vector<LatticePoint> hull;
  std::size_t vertices = 0;
};

/// Hull of N(q) and its vertex count V(q). Requires q >= 3.
HullResult convex_hull_vertices(const Modulus& modulus);

}  // namespace lehmerlab
