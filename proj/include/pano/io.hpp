#pragma once

// Raster and point-cloud files. All failures raise IoError with a message
// naming the file.
//
//   PNG  8- or 16-bit gray/RGB, samples mapped to [0, 1]
//   PFM  portable float map, written little-endian, bottom row first
//   cubemaps are six files <prefix>_B<ext> ... <prefix>_U<ext>

#include <filesystem>
#include <string>

#include "pano/image.hpp"
#include "pano/warping.hpp"

namespace pano {

Image read_png(const std::filesystem::path& path);
/// Samples are clamped to [0, 1] and quantized; bit_depth is 8 or 16.
void write_png(const std::filesystem::path& path, const Image& img, int bit_depth = 8);

Image read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const Image& img);

/// Dispatch on extension (.png / .pfm).
Image read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image& img, int png_bit_depth = 8);

std::filesystem::path cubemap_face_path(const std::filesystem::path& prefix, Face face, const std::string& ext);
Cubemap read_cubemap(const std::filesystem::path& prefix, const std::string& ext);
void write_cubemap(const std::filesystem::path& prefix, const std::string& ext, const Cubemap& cube,
                   int png_bit_depth = 8);

/// ASCII PLY of the valid points; colours (0..255) taken from `colors` when
/// it is a 3-channel cubemap of matching size.
void write_ply(const std::filesystem::path& path, const PointCloud& cloud, const Cubemap* colors = nullptr);

}  // namespace pano
