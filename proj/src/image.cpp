#include "pano/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pano {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

EquirectImage::EquirectImage(int height, int channels, double fill)
    : Image(2 * height, height, channels, fill) {}

EquirectImage::EquirectImage(Image raster) : Image(std::move(raster)) {
  if (width() != 2 * height() || height() <= 0) {
    throw std::invalid_argument("equirectangular image must have width == 2 * height");
  }
  for (double s : data()) {
    if (!std::isfinite(s)) throw std::invalid_argument("equirectangular image has non-finite samples");
  }
}

Cubemap::Cubemap(int face_width, int channels, double fill)
    : face_width_(face_width), channels_(channels) {
  if (face_width < 2) throw std::invalid_argument("cubemap face width must be >= 2");
  for (auto& f : faces_) f = Image(face_width, face_width, channels, fill);
}

CubeMask::CubeMask(int face_width, bool value) : face_width_(face_width) {
  if (face_width < 1) throw std::invalid_argument("mask face width must be positive");
  for (auto& b : bits_) b.assign(static_cast<std::size_t>(face_width) * face_width, value ? 1 : 0);
}

std::size_t CubeMask::count() const {
  std::size_t n = 0;
  for (const auto& b : bits_) n += static_cast<std::size_t>(std::count(b.begin(), b.end(), std::uint8_t{1}));
  return n;
}

CubeMask CubeMask::operator&(const CubeMask& o) const {
  if (o.face_width_ != face_width_) throw std::invalid_argument("mask size mismatch");
  CubeMask out = *this;
  for (int f = 0; f < kNumFaces; ++f) {
    for (std::size_t i = 0; i < out.bits_[f].size(); ++i) out.bits_[f][i] &= o.bits_[f][i];
  }
  return out;
}

}  // namespace pano
