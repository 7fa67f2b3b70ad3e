#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pano/geometry.hpp"

namespace pano {

/// Row-major, interleaved multi-channel raster of doubles.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  double& at(int row, int col, int ch = 0) { return data_[index(row, col, ch)]; }
  double at(int row, int col, int ch = 0) const { return data_[index(row, col, ch)]; }

  std::span<double> pixel(int row, int col) { return {&data_[index(row, col, 0)], static_cast<std::size_t>(channels_)}; }
  std::span<const double> pixel(int row, int col) const {
    return {&data_[index(row, col, 0)], static_cast<std::size_t>(channels_)};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Image& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Equirectangular panorama: width is exactly twice the height, longitude 0
/// at the horizontal centre, latitude increasing downwards.
class EquirectImage : public Image {
 public:
  EquirectImage() = default;
  EquirectImage(int height, int channels, double fill = 0.0);
  /// Validates the 2:1 aspect ratio.
  explicit EquirectImage(Image raster);
};

/// Six square faces with identical size and channel count.
class Cubemap {
 public:
  Cubemap() = default;
  Cubemap(int face_width, int channels, double fill = 0.0);

  int face_width() const { return face_width_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(kNumFaces) * face_width_ * face_width_; }

  Image& face(Face f) { return faces_[face_index(f)]; }
  const Image& face(Face f) const { return faces_[face_index(f)]; }

  bool same_shape(const Cubemap& o) const {
    return face_width_ == o.face_width_ && channels_ == o.channels_;
  }

  bool operator==(const Cubemap&) const = default;

 private:
  int face_width_ = 0;
  int channels_ = 0;
  std::array<Image, kNumFaces> faces_;
};

/// Single-channel cubemap of ray lengths in metres; 0 marks invalid texels.
using CubemapDepth = Cubemap;
/// Single-channel cubemap of per-pixel weights in [0, 1].
using MaskMap = Cubemap;

/// Per-pixel boolean mask over a cubemap.
class CubeMask {
 public:
  CubeMask() = default;
  CubeMask(int face_width, bool value);

  int face_width() const { return face_width_; }
  bool get(Face f, int u, int v) const { return bits_[face_index(f)][index(u, v)] != 0; }
  void set(Face f, int u, int v, bool value) { bits_[face_index(f)][index(u, v)] = value ? 1 : 0; }
  std::size_t count() const;
  std::size_t size() const { return static_cast<std::size_t>(kNumFaces) * face_width_ * face_width_; }

  CubeMask operator&(const CubeMask& o) const;
  bool operator==(const CubeMask&) const = default;

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * face_width_ + u; }

  int face_width_ = 0;
  std::array<std::vector<std::uint8_t>, kNumFaces> bits_;
};

}  // namespace pano
