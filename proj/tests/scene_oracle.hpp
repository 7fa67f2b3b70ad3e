#pragma once

// Exhaustive ray/plane intersection for box rooms, independent of the
// renderer's slab test.

#include <algorithm>

#include "pano/synthetic_world.hpp"

namespace pano::test {

inline constexpr double kNoHit = 1e300;

// Intersects the ray with one axis-aligned rectangle: the plane x[axis] =
// level, bounded by [lo, hi] on the other two axes.
inline double plane_hit(const Vec3& o, const Vec3& d, int axis, double level, const Vec3& lo, const Vec3& hi) {
  if (d[axis] == 0.0) return kNoHit;
  const double t = (level - o[axis]) / d[axis];
  if (t <= 0) return kNoHit;
  const Vec3 p = o + t * d;
  for (int k = 0; k < 3; ++k) {
    if (k == axis) continue;
    if (p[k] < lo[k] - 1e-12 || p[k] > hi[k] + 1e-12) return kNoHit;
  }
  return t;
}

// Closest hit over every wall and every obstacle face.
inline double plane_oracle(const SyntheticScene& s, const Vec3& o, const Vec3& d) {
  double best = kNoHit;
  const Vec3 r = s.room_half_extents;
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {-1.0, 1.0}) best = std::min(best, plane_hit(o, d, axis, sign * r[axis], -r, r));
  }
  for (const Box& b : s.obstacles) {
    const Vec3 lo = b.center - b.half_extents;
    const Vec3 hi = b.center + b.half_extents;
    for (int axis = 0; axis < 3; ++axis) {
      best = std::min(best, plane_hit(o, d, axis, lo[axis], lo, hi));
      best = std::min(best, plane_hit(o, d, axis, hi[axis], lo, hi));
    }
  }
  return best;
}

}  // namespace pano::test
