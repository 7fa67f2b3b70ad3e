#include "pano/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include <png.h>

#include "pano/errors.hpp"

namespace pano {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  return f;
}

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

// ---------------------------------------------------------------------------
// PNG

Image read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError("'" + path.string() + "' is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * height);
  rows.resize(height);
  for (int r = 0; r < height; ++r) rows[r] = buffer.data() + stride * r;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(width, height, channels);
  const double scale = depth == 16 ? 65535.0 : 255.0;
  for (int r = 0; r < height; ++r) {
    const png_byte* row = rows[r];
    for (int c = 0; c < width * channels; ++c) {
      const unsigned value = depth == 16 ? (static_cast<unsigned>(row[2 * c]) << 8) | row[2 * c + 1] : row[c];
      img.data()[static_cast<std::size_t>(r) * width * channels + c] = value / scale;
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const Image& img, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw std::invalid_argument("PNG bit depth must be 8 or 16");
  if (img.channels() != 1 && img.channels() != 3) throw std::invalid_argument("PNG export needs 1 or 3 channels");
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed");
  }
  const int width = img.width();
  const int height = img.height();
  const int samples = width * img.channels();
  const int bytes = bit_depth / 8;
  std::vector<png_byte> buffer(static_cast<std::size_t>(samples) * bytes * height);
  const double scale = bit_depth == 16 ? 65535.0 : 255.0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < samples; ++c) {
      const double s = std::clamp(img.data()[static_cast<std::size_t>(r) * samples + c], 0.0, 1.0);
      const auto q = static_cast<unsigned>(std::lround(s * scale));
      png_byte* dst = buffer.data() + (static_cast<std::size_t>(r) * samples + c) * bytes;
      if (bit_depth == 16) {
        dst[0] = static_cast<png_byte>(q >> 8);
        dst[1] = static_cast<png_byte>(q & 0xff);
      } else {
        dst[0] = static_cast<png_byte>(q);
      }
    }
  }
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) rows[r] = buffer.data() + static_cast<std::size_t>(r) * samples * bytes;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode PNG '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, bit_depth, img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// ---------------------------------------------------------------------------
// PFM

Image read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const auto fail = [&](const std::string& what) {
    return IoError("malformed PFM header in '" + path.string() + "': " + what);
  };
  std::string magic;
  int width = 0, height = 0;
  double scale = 0.0;
  if (!(in >> magic)) throw fail("missing magic");
  if (magic != "PF" && magic != "Pf") throw fail("bad magic '" + magic + "'");
  if (!(in >> width >> height) || width <= 0 || height <= 0) throw fail("bad dimensions");
  if (!(in >> scale) || scale == 0.0 || !std::isfinite(scale)) throw fail("bad scale");
  in.get();  // single whitespace before the raster
  const int channels = magic == "PF" ? 3 : 1;
  const bool little = scale < 0;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  std::vector<std::uint32_t> raw(count);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * 4))) {
    throw IoError("truncated PFM raster in '" + path.string() + "'");
  }
  const bool swap = little != (std::endian::native == std::endian::little);
  Image img(width, height, channels);
  for (int r = 0; r < height; ++r) {
    const int dst_row = height - 1 - r;  // PFM stores the bottom row first
    for (int c = 0; c < width * channels; ++c) {
      std::uint32_t bits = raw[static_cast<std::size_t>(r) * width * channels + c];
      if (swap) bits = __builtin_bswap32(bits);
      img.data()[static_cast<std::size_t>(dst_row) * width * channels + c] = std::bit_cast<float>(bits);
    }
  }
  return img;
}

void write_pfm(const std::filesystem::path& path, const Image& img) {
  if (img.channels() != 1 && img.channels() != 3) throw std::invalid_argument("PFM export needs 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << (img.channels() == 3 ? "PF" : "Pf") << "\n" << img.width() << " " << img.height() << "\n-1.0\n";
  const int samples = img.width() * img.channels();
  std::vector<float> row(samples);
  for (int r = img.height() - 1; r >= 0; --r) {
    for (int c = 0; c < samples; ++c) row[c] = static_cast<float>(img.data()[static_cast<std::size_t>(r) * samples + c]);
    if constexpr (std::endian::native != std::endian::little) {
      for (float& f : row) f = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(f)));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * 4));
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pfm") return read_pfm(path);
  throw IoError("unsupported image extension '" + ext + "' for '" + path.string() + "'");
}

void write_image(const std::filesystem::path& path, const Image& img, int png_bit_depth) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return write_png(path, img, png_bit_depth);
  if (ext == ".pfm") return write_pfm(path, img);
  throw IoError("unsupported image extension '" + ext + "' for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Cubemap file sets and point clouds

std::filesystem::path cubemap_face_path(const std::filesystem::path& prefix, Face face, const std::string& ext) {
  return prefix.string() + "_" + face_letter(face) + ext;
}

Cubemap read_cubemap(const std::filesystem::path& prefix, const std::string& ext) {
  std::array<Image, kNumFaces> faces;
  for (Face f : kFaces) faces[face_index(f)] = read_image(cubemap_face_path(prefix, f, ext));
  const Image& first = faces[0];
  if (first.width() != first.height()) throw IoError("cubemap faces must be square");
  Cubemap cube(first.width(), first.channels());
  for (Face f : kFaces) {
    if (!faces[face_index(f)].same_shape(first)) throw IoError("cubemap faces differ in shape");
    cube.face(f) = std::move(faces[face_index(f)]);
  }
  return cube;
}

void write_cubemap(const std::filesystem::path& prefix, const std::string& ext, const Cubemap& cube,
                   int png_bit_depth) {
  for (Face f : kFaces) write_image(cubemap_face_path(prefix, f, ext), cube.face(f), png_bit_depth);
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud, const Cubemap* colors) {
  const int w = cloud.face_width();
  const bool with_color = colors && colors->face_width() == w && colors->channels() == 3;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.valid_count() << "\n"
      << "property float x\nproperty float y\nproperty float z\n";
  if (with_color) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  out.precision(9);
  for (Face f : kFaces) {
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!cloud.valid(f, u, v)) continue;
        const Vec3& p = cloud.point(f, u, v);
        out << p.x() << " " << p.y() << " " << p.z();
        if (with_color) {
          for (int c = 0; c < 3; ++c) {
            out << " " << std::lround(std::clamp(colors->face(f).at(v, u, c), 0.0, 1.0) * 255.0);
          }
        }
        out << "\n";
      }
    }
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace pano
