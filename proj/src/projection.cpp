#include "pano/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pano/parallel.hpp"

namespace pano {

namespace {

constexpr double kPi = std::numbers::pi;

struct Taps {
  int r0, r1, c0, c1;
  double w00, w01, w10, w11;
};

Taps bilinear_taps(int width, int height, double row, double col, bool wrap_cols) {
  const double rf = std::floor(row);
  const double cf = std::floor(col);
  const double fr = row - rf;
  const double fc = col - cf;
  int r0 = static_cast<int>(rf);
  int r1 = r0 + 1;
  int c0 = static_cast<int>(cf);
  int c1 = c0 + 1;
  r0 = std::clamp(r0, 0, height - 1);
  r1 = std::clamp(r1, 0, height - 1);
  if (wrap_cols) {
    c0 = ((c0 % width) + width) % width;
    c1 = ((c1 % width) + width) % width;
  } else {
    c0 = std::clamp(c0, 0, width - 1);
    c1 = std::clamp(c1, 0, width - 1);
  }
  return {r0, r1, c0, c1, (1 - fr) * (1 - fc), (1 - fr) * fc, fr * (1 - fc), fr * fc};
}

}  // namespace

SphereCoord ray_to_sphere(const Vec3& p) {
  const double n = p.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("ray_to_sphere needs a finite non-zero vector");
  }
  double x = std::atan2(p.x(), p.z()) / kPi;
  if (x >= 1.0) x -= 2.0;
  const double y = std::asin(std::clamp(p.y() / n, -1.0, 1.0)) / (0.5 * kPi);
  return {x, y};
}

Vec3 sphere_to_ray(SphereCoord s) {
  const double lon = s.x * kPi;
  const double lat = s.y * 0.5 * kPi;
  const double cl = std::cos(lat);
  return {cl * std::sin(lon), std::sin(lat), cl * std::cos(lon)};
}

PixelCoord sphere_to_pixel(SphereCoord s, int height) {
  const int width = 2 * height;
  const double x = s.x - 2.0 * std::floor((s.x + 1.0) / 2.0);
  const double col = (x + 1.0) / 2.0 * width - 0.5;
  const double row = std::clamp((s.y + 1.0) / 2.0 * height - 0.5, 0.0, static_cast<double>(height - 1));
  return {row, col};
}

SphereCoord pixel_to_sphere(double row, double col, int height) {
  const int width = 2 * height;
  return {(col + 0.5) / width * 2.0 - 1.0, (row + 0.5) / height * 2.0 - 1.0};
}

void bilinear_sample(const Image& img, double row, double col, bool wrap_cols, std::span<double> out) {
  const Taps t = bilinear_taps(img.width(), img.height(), row, col, wrap_cols);
  const auto p00 = img.pixel(t.r0, t.c0);
  const auto p01 = img.pixel(t.r0, t.c1);
  const auto p10 = img.pixel(t.r1, t.c0);
  const auto p11 = img.pixel(t.r1, t.c1);
  for (int c = 0; c < img.channels(); ++c) {
    out[c] = t.w00 * p00[c] + t.w01 * p01[c] + t.w10 * p10[c] + t.w11 * p11[c];
  }
}

double bilinear_sample(const Image& img, double row, double col, bool wrap_cols, int channel) {
  const Taps t = bilinear_taps(img.width(), img.height(), row, col, wrap_cols);
  return t.w00 * img.at(t.r0, t.c0, channel) + t.w01 * img.at(t.r0, t.c1, channel) +
         t.w10 * img.at(t.r1, t.c0, channel) + t.w11 * img.at(t.r1, t.c1, channel);
}

double bilinear_sample_depth(const Image& img, double row, double col, bool wrap_cols) {
  const Taps t = bilinear_taps(img.width(), img.height(), row, col, wrap_cols);
  const double d00 = img.at(t.r0, t.c0), d01 = img.at(t.r0, t.c1);
  const double d10 = img.at(t.r1, t.c0), d11 = img.at(t.r1, t.c1);
  if ((t.w00 > 0 && d00 == 0) || (t.w01 > 0 && d01 == 0) || (t.w10 > 0 && d10 == 0) ||
      (t.w11 > 0 && d11 == 0)) {
    return 0.0;
  }
  return t.w00 * d00 + t.w01 * d01 + t.w10 * d10 + t.w11 * d11;
}

bool sample_cubemap(const Cubemap& cube, const Vec3& dir, Resample mode, std::span<double> out) {
  const CubePoint cp = locate_on_cube(dir, cube.face_width());
  const Image& face = cube.face(cp.face);
  if (mode == Resample::Depth) {
    out[0] = bilinear_sample_depth(face, cp.v, cp.u, false);
    return out[0] != 0.0;
  }
  bilinear_sample(face, cp.v, cp.u, false, out);
  return true;
}

Cubemap rotate_cubemap(const Cubemap& src, const Rotation3& rotation, Resample mode) {
  const int w = src.face_width();
  Cubemap out(w, src.channels());
  const Mat3 rt = rotation.matrix().transpose();
  for (Face f : kFaces) {
    Image& face = out.face(f);
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) sample_cubemap(src, rt * face_ray(f, w, u, v), mode, face.pixel(v, u));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using Tap = ToCubemapRemap::Tap;

// Same clamping and wrapping as bilinear_taps, folded into flags.
Tap make_tap(int width, int height, double row, double col, bool wrap_cols, int face = 0) {
  const Taps t = bilinear_taps(width, height, row, col, wrap_cols);
  std::uint32_t flags = static_cast<std::uint32_t>(face) << 8;
  if (t.c1 == t.c0 + 1) {
    flags |= ToCubemapRemap::kNextCol;
  } else if (t.c1 != t.c0) {
    flags |= ToCubemapRemap::kWrapCol;
  }
  if (t.r1 != t.r0) flags |= ToCubemapRemap::kNextRow;
  return {static_cast<std::uint32_t>(t.r0 * width + t.c0), flags, row - std::floor(row), col - std::floor(col)};
}

// Same arithmetic as bilinear_sample / bilinear_sample_depth.
void apply_tap(const Tap& t, const double* src, int width, int channels, Resample mode, double* out) {
  const std::size_t i00 = t.base;
  const std::size_t i01 = (t.flags & ToCubemapRemap::kNextCol)   ? i00 + 1
                          : (t.flags & ToCubemapRemap::kWrapCol) ? i00 + 1 - width
                                                                 : i00;
  const std::size_t row_step = (t.flags & ToCubemapRemap::kNextRow) ? width : 0;
  const std::size_t i10 = i00 + row_step;
  const std::size_t i11 = i01 + row_step;
  const double w00 = (1 - t.fr) * (1 - t.fc), w01 = (1 - t.fr) * t.fc, w10 = t.fr * (1 - t.fc), w11 = t.fr * t.fc;
  if (mode == Resample::Depth) {
    const double d00 = src[i00], d01 = src[i01], d10 = src[i10], d11 = src[i11];
    if ((w00 > 0 && d00 == 0) || (w01 > 0 && d01 == 0) || (w10 > 0 && d10 == 0) || (w11 > 0 && d11 == 0)) {
      out[0] = 0.0;
      return;
    }
    out[0] = w00 * d00 + w01 * d01 + w10 * d10 + w11 * d11;
    return;
  }
  const double* p00 = src + i00 * channels;
  const double* p01 = src + i01 * channels;
  const double* p10 = src + i10 * channels;
  const double* p11 = src + i11 * channels;
  for (int c = 0; c < channels; ++c) out[c] = w00 * p00[c] + w01 * p01[c] + w10 * p10[c] + w11 * p11[c];
}

}  // namespace

ToCubemapRemap::ToCubemapRemap(int equirect_height, int face_width)
    : height_(equirect_height), face_width_(face_width) {
  if (equirect_height < 1) throw std::invalid_argument("equirect height must be positive");
  if (face_width < 2) throw std::invalid_argument("face width must be >= 2");
  for (Face f : kFaces) {
    auto& taps = taps_[face_index(f)];
    taps.reserve(static_cast<std::size_t>(face_width) * face_width);
    for (int v = 0; v < face_width; ++v) {
      for (int u = 0; u < face_width; ++u) {
        const PixelCoord pc = sphere_to_pixel(ray_to_sphere(face_ray(f, face_width, u, v)), equirect_height);
        taps.push_back(make_tap(2 * equirect_height, equirect_height, pc.row, pc.col, true));
      }
    }
  }
}

Cubemap ToCubemapRemap::apply(const EquirectImage& src, Resample mode) const {
  if (src.height() != height_) throw std::invalid_argument("panorama height does not match remap");
  if (mode == Resample::Depth && src.channels() != 1) throw std::invalid_argument("depth must be single-channel");
  const int channels = src.channels();
  Cubemap out(face_width_, channels);
  parallel_for(0, kNumFaces, [&](int fi) {
    double* dst = out.face(kFaces[fi]).data().data();
    const auto& taps = taps_[fi];
    for (std::size_t k = 0; k < taps.size(); ++k) {
      apply_tap(taps[k], src.data().data(), src.width(), channels, mode, dst + k * channels);
    }
  });
  return out;
}

ToEquirectRemap::ToEquirectRemap(int face_width, int equirect_height)
    : face_width_(face_width), height_(equirect_height) {
  if (equirect_height < 1) throw std::invalid_argument("equirect height must be positive");
  if (face_width < 2) throw std::invalid_argument("face width must be >= 2");
  const int width = 2 * equirect_height;
  taps_.reserve(static_cast<std::size_t>(width) * equirect_height);
  for (int r = 0; r < equirect_height; ++r) {
    for (int c = 0; c < width; ++c) {
      const CubePoint cp = locate_on_cube(sphere_to_ray(pixel_to_sphere(r, c, equirect_height)), face_width);
      taps_.push_back(make_tap(face_width, face_width, cp.v, cp.u, false, face_index(cp.face)));
    }
  }
}

EquirectImage ToEquirectRemap::apply(const Cubemap& src, Resample mode) const {
  if (src.face_width() != face_width_) throw std::invalid_argument("cubemap face width does not match remap");
  if (mode == Resample::Depth && src.channels() != 1) throw std::invalid_argument("depth must be single-channel");
  const int channels = src.channels();
  EquirectImage out(height_, channels);
  const int width = 2 * height_;
  parallel_for(0, height_, [&](int r) {
    double* dst = out.data().data();
    for (int c = 0; c < width; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * width + c;
      const Face f = kFaces[taps_[k].flags >> 8];
      apply_tap(taps_[k], src.face(f).data().data(), face_width_, channels, mode, dst + k * channels);
    }
  });
  return out;
}

Cubemap equirect_to_cubemap(const EquirectImage& src, int face_width, Resample mode) {
  if (src.empty() || src.width() != 2 * src.height()) {
    throw std::invalid_argument("source is not a valid equirectangular image");
  }
  return ToCubemapRemap(src.height(), face_width).apply(src, mode);
}

EquirectImage cubemap_to_equirect(const Cubemap& src, int height, Resample mode) {
  if (src.face_width() < 2) throw std::invalid_argument("source cubemap is empty");
  return ToEquirectRemap(src.face_width(), height).apply(src, mode);
}

}  // namespace pano
