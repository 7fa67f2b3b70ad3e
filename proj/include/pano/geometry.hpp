#pragma once

// Coordinate conventions used throughout the library:
//   camera frame  +x right, +y down, +z forward
//   face pixels   (u, v) = (column, row), sampled at pixel centers
//   rotations     column vectors, left multiplication

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pano {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Cube faces in canonical (serialization) order.
enum class Face : std::uint8_t { Back = 0, Down, Front, Left, Right, Up };

inline constexpr int kNumFaces = 6;
inline constexpr std::array<Face, kNumFaces> kFaces = {
    Face::Back, Face::Down, Face::Front, Face::Left, Face::Right, Face::Up};

constexpr int face_index(Face f) { return static_cast<int>(f); }
char face_letter(Face f);
Face face_from_letter(char c);

class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}

  /// Validates orthonormality and det = +1 within 1e-9.
  static Rotation3 from_matrix(const Mat3& m);
  static Rotation3 exp(const Vec3& axis_angle);
  static Rotation3 about_axis(const Vec3& axis, double angle);

  /// Axis-angle vector with angle in [0, pi].
  Vec3 log() const;
  double angle() const;

  const Mat3& matrix() const { return m_; }
  Rotation3 inverse() const { return Rotation3(m_.transpose()); }
  Rotation3 operator*(const Rotation3& o) const { return Rotation3(m_ * o.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  explicit Rotation3(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Rigid motion x -> R x + t.
struct PoseSE3 {
  Rotation3 rotation;
  Vec3 translation = Vec3::Zero();

  static PoseSE3 identity() { return {}; }
  /// (axis-angle, translation) 6-vector.
  static PoseSE3 from_vector(const Vec6& v);
  Vec6 to_vector() const;

  PoseSE3 inverse() const;
  PoseSE3 operator*(const PoseSE3& o) const;
  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }
};

/// R = Rz(theta_z) * Ry(theta_y) * Rx(theta_x). Throws std::invalid_argument
/// on non-finite angles.
Rotation3 euler_to_rotation(const Vec3& theta);

/// Orientation of each face relative to the front face. Entries are exactly
/// 0 or +-1.
const Rotation3& face_rotation(Face face);

/// Pinhole grid of one 90-degree face: pixel (u, v) maps to the unnormalized
/// ray face_rotation(face) * (u + 0.5 - w/2, v + 0.5 - w/2, w/2).
class FaceGrid {
 public:
  FaceGrid(Face face, int width);

  Face face() const { return face_; }
  int width() const { return width_; }
  const Vec3& ray(int u, int v) const { return rays_[static_cast<std::size_t>(v) * width_ + u]; }
  const std::vector<Vec3>& rays() const { return rays_; }

 private:
  Face face_;
  int width_;
  std::vector<Vec3> rays_;
};

FaceGrid make_face_grid(Face face, int width);

/// Unnormalized ray through the centre of (u, v); u, v may be fractional.
Vec3 face_ray(Face face, int width, double u, double v);

/// Face whose frustum contains `dir`; ties on cube edges go to the face that
/// comes first in canonical order. Throws on the zero vector.
Face select_face(const Vec3& dir);

struct CubePoint {
  Face face;
  double u;  // column, pixel-centre convention
  double v;  // row
};

/// Projects a direction onto the cube: selected face plus continuous pixel
/// coordinates in that face (inverse of face_ray).
CubePoint locate_on_cube(const Vec3& dir, int face_width);

}  // namespace pano
