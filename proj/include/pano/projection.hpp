#pragma once

// Pixel <-> sphere mapping and the equirectangular <-> cubemap converters.
//
// Normalised spherical coordinates:
//   X = atan2(x, z) / pi            longitude, in [-1, 1), wraps modulo 2
//   Y = asin(y / |p|) / (pi / 2)    latitude,  in [-1, 1], clamped
// Longitude 0 sits at the horizontal centre of the panorama and Y = +1 is the
// bottom row (camera +y points down).

#include <span>
#include <vector>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

struct SphereCoord {
  double x = 0.0;
  double y = 0.0;
};

struct PixelCoord {
  double row = 0.0;
  double col = 0.0;
};

/// How texels are blended. Depth treats 0 as invalid: any blend that gives
/// an invalid texel non-zero weight yields 0.
enum class Resample { Color, Depth };

SphereCoord ray_to_sphere(const Vec3& p);
/// Unit direction for a spherical coordinate.
Vec3 sphere_to_ray(SphereCoord s);

/// Panorama of the given height (width 2 * height). Column is wrapped into
/// [-0.5, width - 0.5); row is clamped to [0, height - 1].
PixelCoord sphere_to_pixel(SphereCoord s, int height);
SphereCoord pixel_to_sphere(double row, double col, int height);

/// Four-neighbour bilinear blend. Rows clamp; columns wrap when wrap_cols is
/// set and clamp otherwise. Writes one value per channel.
void bilinear_sample(const Image& img, double row, double col, bool wrap_cols, std::span<double> out);
double bilinear_sample(const Image& img, double row, double col, bool wrap_cols, int channel = 0);
/// Single-channel depth variant; returns 0 when an invalid texel is touched.
double bilinear_sample_depth(const Image& img, double row, double col, bool wrap_cols);

/// Samples the cubemap along `dir` (selected face, bilinear, edge clamp).
/// Returns false when a depth lookup is invalid.
bool sample_cubemap(const Cubemap& cube, const Vec3& dir, Resample mode, std::span<double> out);

/// Re-expresses a cubemap in a rotated camera frame: out(d) = src(R^T d).
/// For the 24 cube symmetries this is an exact texel permutation.
Cubemap rotate_cubemap(const Cubemap& src, const Rotation3& rotation, Resample mode = Resample::Color);

/// Precomputed source coordinates for equirect -> cubemap resampling at a
/// fixed geometry; reusable across frames.
class ToCubemapRemap {
 public:
  ToCubemapRemap(int equirect_height, int face_width);

  int equirect_height() const { return height_; }
  int face_width() const { return face_width_; }
  Cubemap apply(const EquirectImage& src, Resample mode = Resample::Color) const;

  /// Bilinear footprint of one output texel: top-left source pixel, how to
  /// reach the other three, and the fractional offsets.
  struct Tap {
    std::uint32_t base;
    std::uint32_t flags;  // kNextCol / kWrapCol / kNextRow, face index in bits 8..15
    double fr;
    double fc;
  };
  static constexpr std::uint32_t kNextCol = 1;
  static constexpr std::uint32_t kWrapCol = 2;
  static constexpr std::uint32_t kNextRow = 4;

 private:
  int height_;
  int face_width_;
  std::array<std::vector<Tap>, kNumFaces> taps_;
};

/// Precomputed cube lookups for cubemap -> equirect resampling.
class ToEquirectRemap {
 public:
  ToEquirectRemap(int face_width, int equirect_height);

  int equirect_height() const { return height_; }
  int face_width() const { return face_width_; }
  EquirectImage apply(const Cubemap& src, Resample mode = Resample::Color) const;

 private:
  int face_width_;
  int height_;
  std::vector<ToCubemapRemap::Tap> taps_;
};

/// Inverse-warps a panorama onto the six faces.
Cubemap equirect_to_cubemap(const EquirectImage& src, int face_width, Resample mode = Resample::Color);
/// Renders a panorama from a cubemap, sampling one face per ray.
EquirectImage cubemap_to_equirect(const Cubemap& src, int height, Resample mode = Resample::Color);

}  // namespace pano
