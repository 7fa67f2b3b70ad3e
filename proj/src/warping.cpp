#include "pano/warping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pano/parallel.hpp"
#include "pano/projection.hpp"

namespace pano {

PointCloud::PointCloud(int face_width) : face_width_(face_width) {
  const auto n = static_cast<std::size_t>(face_width) * face_width;
  for (int f = 0; f < kNumFaces; ++f) {
    points_[f].assign(n, Vec3::Zero());
    valid_[f].assign(n, 0);
  }
}

std::size_t PointCloud::valid_count() const {
  std::size_t n = 0;
  for (const auto& v : valid_) n += static_cast<std::size_t>(std::count(v.begin(), v.end(), std::uint8_t{1}));
  return n;
}

PointCloud depth_to_pointcloud(const CubemapDepth& depth) {
  if (depth.channels() != 1) throw std::invalid_argument("depth cubemap must be single-channel");
  const int w = depth.face_width();
  for (Face f : kFaces) {
    for (double d : depth.face(f).data()) {
      if (!std::isfinite(d) || d < 0) throw std::invalid_argument("depth samples must be finite and non-negative");
    }
  }
  PointCloud cloud(w);
  parallel_for(0, kNumFaces, [&](int fi) {
    const Face f = kFaces[fi];
    const Image& face = depth.face(f);
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        const double d = face.at(v, u);
        if (d == 0.0) continue;
        cloud.point(f, u, v) = d * face_ray(f, w, u, v).normalized();
        cloud.set_valid(f, u, v, true);
      }
    }
  });
  return cloud;
}

PointCloud transform_pointcloud(const PointCloud& cloud, const PoseSE3& pose) {
  const int w = cloud.face_width();
  PointCloud out(w);
  const Mat3& r = pose.rotation.matrix();
  for (Face f : kFaces) {
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        out.point(f, u, v) = r * cloud.point(f, u, v) + pose.translation;
        out.set_valid(f, u, v, cloud.valid(f, u, v));
      }
    }
  }
  return out;
}

WarpResult warp_cubemap(const PointCloud& cloud, const Cubemap& target) {
  const int w = cloud.face_width();
  if (target.face_width() != w) throw std::invalid_argument("point cloud and target differ in face width");
  WarpResult res{Cubemap(w, target.channels()), CubeMask(w, false)};
  parallel_for(0, kNumFaces, [&](int fi) {
    const Face f = kFaces[fi];
    Image& out = res.warped.face(f);
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!cloud.valid(f, u, v)) continue;
        const Vec3& q = cloud.point(f, u, v);
        if (q.isZero(0.0)) continue;
        sample_cubemap(target, q, Resample::Color, out.pixel(v, u));
        res.valid.set(f, u, v, true);
      }
    }
  });
  return res;
}

// Single pass over the texels; the same arithmetic as building, moving and
// sampling the point cloud in turn.
WarpResult warp_with_motion(const CubemapDepth& ref_depth, const Cubemap& target, const PoseSE3& motion) {
  if (ref_depth.channels() != 1) throw std::invalid_argument("depth cubemap must be single-channel");
  const int w = ref_depth.face_width();
  if (target.face_width() != w) throw std::invalid_argument("point cloud and target differ in face width");
  for (Face f : kFaces) {
    for (double d : ref_depth.face(f).data()) {
      if (!std::isfinite(d) || d < 0) throw std::invalid_argument("depth samples must be finite and non-negative");
    }
  }
  const PoseSE3 to_target = motion.inverse();
  const Mat3& r = to_target.rotation.matrix();
  WarpResult res{Cubemap(w, target.channels()), CubeMask(w, false)};
  parallel_for(0, kNumFaces, [&](int fi) {
    const Face f = kFaces[fi];
    const Image& depth = ref_depth.face(f);
    Image& out = res.warped.face(f);
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        const double d = depth.at(v, u);
        if (d == 0.0) continue;
        const Vec3 q = r * (d * face_ray(f, w, u, v).normalized()) + to_target.translation;
        if (q.isZero(0.0)) continue;
        sample_cubemap(target, q, Resample::Color, out.pixel(v, u));
        res.valid.set(f, u, v, true);
      }
    }
  });
  return res;
}

EquirectWarpResult warp_equirect(const EquirectImage& ref_depth, const EquirectImage& target, const PoseSE3& motion) {
  if (ref_depth.channels() != 1) throw std::invalid_argument("depth panorama must be single-channel");
  if (ref_depth.height() != target.height()) throw std::invalid_argument("depth and target panoramas differ in size");
  const int h = ref_depth.height();
  const int w = ref_depth.width();
  const PoseSE3 to_target = motion.inverse();
  EquirectWarpResult res{EquirectImage(h, target.channels()), std::vector<std::uint8_t>(ref_depth.pixel_count(), 0)};
  parallel_for(0, h, [&](int r) {
    for (int c = 0; c < w; ++c) {
      const double d = ref_depth.at(r, c);
      if (!(d > 0) || !std::isfinite(d)) continue;
      const Vec3 q = to_target * (d * sphere_to_ray(pixel_to_sphere(r, c, h)));
      if (q.isZero(0.0)) continue;
      const PixelCoord px = sphere_to_pixel(ray_to_sphere(q), h);
      bilinear_sample(target, px.row, px.col, true, res.warped.pixel(r, c));
      res.valid[static_cast<std::size_t>(r) * w + c] = 1;
    }
  });
  return res;
}

}  // namespace pano
