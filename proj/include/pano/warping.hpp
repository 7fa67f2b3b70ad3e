#pragma once

// Depth lifting and spherical inverse warping.
//
// Depth samples are ray lengths: the Euclidean distance from the camera
// centre to the surface along the pixel's ray (not per-face z-depth).

#include <array>
#include <cstdint>
#include <vector>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

/// Per-face, per-pixel 3D points in the camera frame plus validity.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(int face_width);

  int face_width() const { return face_width_; }
  const Vec3& point(Face f, int u, int v) const { return points_[face_index(f)][index(u, v)]; }
  Vec3& point(Face f, int u, int v) { return points_[face_index(f)][index(u, v)]; }
  bool valid(Face f, int u, int v) const { return valid_[face_index(f)][index(u, v)] != 0; }
  void set_valid(Face f, int u, int v, bool value) { valid_[face_index(f)][index(u, v)] = value ? 1 : 0; }
  std::size_t valid_count() const;

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * face_width_ + u; }

  int face_width_ = 0;
  std::array<std::vector<Vec3>, kNumFaces> points_;
  std::array<std::vector<std::uint8_t>, kNumFaces> valid_;
};

/// q = depth * normalize(grid ray). Zero depth gives an invalid point;
/// negative or non-finite depth throws std::invalid_argument.
PointCloud depth_to_pointcloud(const CubemapDepth& depth);

/// q' = R q + T for every point; validity is kept.
PointCloud transform_pointcloud(const PointCloud& cloud, const PoseSE3& pose);

struct WarpResult {
  Cubemap warped;
  CubeMask valid;
};

/// Samples `target` at the spherical projection of every reference point.
/// The cloud must already be expressed in the target camera frame. Points
/// that are invalid, or coincide with the target centre, are masked out.
WarpResult warp_cubemap(const PointCloud& cloud, const Cubemap& target);

/// Lifts the reference depth, moves it into the target camera and warps.
/// `motion` is the target camera pose expressed in the reference frame
/// (inverse(pose_ref) * pose_tgt), so points move by its inverse.
WarpResult warp_with_motion(const CubemapDepth& ref_depth, const Cubemap& target, const PoseSE3& motion);

struct EquirectWarpResult {
  EquirectImage warped;
  std::vector<std::uint8_t> valid;  // row-major, one flag per pixel
};

/// Same warp carried out directly on panoramas: every reference pixel is
/// lifted with its ray-length depth, moved by inverse(motion) and sampled
/// from the target with longitude wrap.
EquirectWarpResult warp_equirect(const EquirectImage& ref_depth, const EquirectImage& target, const PoseSE3& motion);

}  // namespace pano
