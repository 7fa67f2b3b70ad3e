#pragma once

// Shared fixtures and brute-force oracles for the unit tests. Oracles here
// deliberately avoid the library routine they are checking.

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano::test {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline PoseSE3 random_pose(Rng& rng, double max_angle, double max_trans) {
  PoseSE3 p;
  p.rotation = Rotation3::about_axis(random_unit(rng), uniform(rng, 0.0, max_angle));
  p.translation = random_unit(rng) * uniform(rng, 0.0, max_trans);
  return p;
}

inline Cubemap random_cubemap(Rng& rng, int w, int channels, double lo = 0.0, double hi = 1.0) {
  Cubemap c(w, channels);
  for (Face f : kFaces) {
    for (double& x : c.face(f).data()) x = uniform(rng, lo, hi);
  }
  return c;
}

/// Cubemap holding fn(unit ray) at every texel centre.
template <typename Fn>
Cubemap cubemap_from_function(int w, Fn&& fn) {
  Cubemap c(w, 1);
  for (Face f : kFaces) {
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) c.face(f).at(v, u) = fn(face_ray(f, w, u, v).normalized());
    }
  }
  return c;
}

/// Hand-written axis rotations, composed Rz * Ry * Rx.
inline Mat3 euler_oracle(double tx, double ty, double tz) {
  Mat3 rx, ry, rz;
  rx << 1, 0, 0, 0, std::cos(tx), -std::sin(tx), 0, std::sin(tx), std::cos(tx);
  ry << std::cos(ty), 0, std::sin(ty), 0, 1, 0, -std::sin(ty), 0, std::cos(ty);
  rz << std::cos(tz), -std::sin(tz), 0, std::sin(tz), std::cos(tz), 0, 0, 0, 1;
  return rz * ry * rx;
}

/// Outward axis of each face, canonical order.
inline Vec3 face_axis(Face f) {
  switch (f) {
    case Face::Back: return {0, 0, -1};
    case Face::Down: return {0, 1, 0};
    case Face::Front: return {0, 0, 1};
    case Face::Left: return {-1, 0, 0};
    case Face::Right: return {1, 0, 0};
    case Face::Up: return {0, -1, 0};
  }
  return {};
}

/// Unit ray through the centre of a panorama pixel, written out longhand.
inline Vec3 pixel_ray_oracle(int row, int col, int height) {
  const double lon = ((col + 0.5) / (2.0 * height) * 2.0 - 1.0) * kPi;
  const double lat = ((row + 0.5) / height * 2.0 - 1.0) * kPi / 2;
  return {std::cos(lat) * std::sin(lon), std::sin(lat), std::cos(lat) * std::cos(lon)};
}

/// Frustum test in each face's own camera frame; first hit in canonical
/// order wins.
inline Face frustum_face_oracle(const Vec3& d) {
  for (Face f : kFaces) {
    const Vec3 local = face_rotation(f).matrix().transpose() * d;
    if (local.z() > 0 && std::abs(local.x()) <= local.z() && std::abs(local.y()) <= local.z()) return f;
  }
  return Face::Front;  // unreachable for non-zero d
}

/// Texel of a cubemap face; used for fold results.
struct Texel {
  Face face;
  int u;
  int v;
};

// Folds a texel lying just beyond one edge of face f over that edge onto the
// neighbouring face, working on the unit cube in 3D.
inline Texel fold_oracle(Face f, int w, int u, int v) {
  const double a = (2.0 * u + 1) / w - 1;
  const double b = (2.0 * v + 1) / w - 1;
  Vec3 local;
  Vec3 out_axis;
  if (a < -1) {
    local = Vec3(-1, b, 1 - (-1 - a));
    out_axis = Vec3(-1, 0, 0);
  } else if (a > 1) {
    local = Vec3(1, b, 1 - (a - 1));
    out_axis = Vec3(1, 0, 0);
  } else if (b < -1) {
    local = Vec3(a, -1, 1 - (-1 - b));
    out_axis = Vec3(0, -1, 0);
  } else {
    local = Vec3(a, 1, 1 - (b - 1));
    out_axis = Vec3(0, 1, 0);
  }
  const Mat3& rf = face_rotation(f).matrix();
  const Vec3 p = rf * local;
  const Vec3 axis = rf * out_axis;
  for (Face n : kFaces) {
    if (face_axis(n) != axis) continue;
    const Vec3 ln = face_rotation(n).matrix().transpose() * p;
    return {n, static_cast<int>(std::lround((ln.x() + 1) * w / 2 - 0.5)),
            static_cast<int>(std::lround((ln.y() + 1) * w / 2 - 0.5))};
  }
  return {f, 0, 0};
}

}  // namespace pano::test
