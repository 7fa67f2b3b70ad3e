#include "pano/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace pano {

char face_letter(Face f) {
  static constexpr std::array<char, kNumFaces> kLetters = {'B', 'D', 'F', 'L', 'R', 'U'};
  return kLetters[face_index(f)];
}

Face face_from_letter(char c) {
  for (Face f : kFaces) {
    if (face_letter(f) == c) return f;
  }
  throw std::invalid_argument(std::string("unknown face letter '") + c + "'");
}

// ---------------------------------------------------------------------------
// Rotation3

Rotation3 Rotation3::from_matrix(const Mat3& m) {
  if (!m.allFinite()) throw std::invalid_argument("rotation matrix has non-finite entries");
  const Mat3 gram = m.transpose() * m;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("rotation matrix is not orthonormal");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-9) {
    throw std::invalid_argument("rotation matrix determinant is not +1");
  }
  return Rotation3(m);
}

Rotation3 Rotation3::exp(const Vec3& axis_angle) {
  const double angle = axis_angle.norm();
  if (angle == 0.0) return Rotation3();
  return Rotation3(Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix());
}

Rotation3 Rotation3::about_axis(const Vec3& axis, double angle) {
  return exp(axis.normalized() * angle);
}

Vec3 Rotation3::log() const {
  const Eigen::AngleAxisd aa(m_);
  return aa.axis() * aa.angle();
}

double Rotation3::angle() const { return Eigen::AngleAxisd(m_).angle(); }

// ---------------------------------------------------------------------------
// PoseSE3

PoseSE3 PoseSE3::from_vector(const Vec6& v) {
  return {Rotation3::exp(v.head<3>()), v.tail<3>()};
}

Vec6 PoseSE3::to_vector() const {
  Vec6 v;
  v << rotation.log(), translation;
  return v;
}

PoseSE3 PoseSE3::inverse() const {
  const Rotation3 rt = rotation.inverse();
  return {rt, -(rt * translation)};
}

PoseSE3 PoseSE3::operator*(const PoseSE3& o) const {
  return {rotation * o.rotation, rotation * o.translation + translation};
}

// ---------------------------------------------------------------------------
// Euler angles and the face table

Rotation3 euler_to_rotation(const Vec3& theta) {
  if (!theta.allFinite()) throw std::invalid_argument("euler angles must be finite");
  const double cx = std::cos(theta.x()), sx = std::sin(theta.x());
  const double cy = std::cos(theta.y()), sy = std::sin(theta.y());
  const double cz = std::cos(theta.z()), sz = std::sin(theta.z());
  Mat3 rx, ry, rz;
  rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
  return Rotation3::from_matrix(rz * ry * rx);
}

namespace {

std::array<Rotation3, kNumFaces> build_face_table() {
  constexpr double kPi = std::numbers::pi;
  const std::array<Vec3, kNumFaces> angles = {
      Vec3(0, kPi, 0),         // Back
      Vec3(-0.5 * kPi, 0, 0),  // Down
      Vec3(0, 0, 0),           // Front
      Vec3(0, -0.5 * kPi, 0),  // Left
      Vec3(0, 0.5 * kPi, 0),   // Right
      Vec3(0.5 * kPi, 0, 0),   // Up
  };
  std::array<Rotation3, kNumFaces> table;
  for (int i = 0; i < kNumFaces; ++i) {
    // Quarter-turn products carry ~1e-16 residue from cos(pi/2); the exact
    // matrices are signed permutations, which keeps face lookups exact.
    const Mat3 snapped = euler_to_rotation(angles[i]).matrix().array().round().matrix();
    table[i] = Rotation3::from_matrix(snapped);
  }
  return table;
}

}  // namespace

const Rotation3& face_rotation(Face face) {
  static const std::array<Rotation3, kNumFaces> table = build_face_table();
  return table[face_index(face)];
}

// ---------------------------------------------------------------------------
// Face grids

Vec3 face_ray(Face face, int width, double u, double v) {
  const double half = 0.5 * width;
  return face_rotation(face) * Vec3(u + 0.5 - half, v + 0.5 - half, half);
}

FaceGrid::FaceGrid(Face face, int width) : face_(face), width_(width) {
  if (width < 2) throw std::invalid_argument("face width must be >= 2");
  rays_.reserve(static_cast<std::size_t>(width) * width);
  for (int v = 0; v < width; ++v) {
    for (int u = 0; u < width; ++u) rays_.push_back(face_ray(face, width, u, v));
  }
}

FaceGrid make_face_grid(Face face, int width) { return FaceGrid(face, width); }

Face select_face(const Vec3& d) {
  const double m = d.cwiseAbs().maxCoeff();
  if (!(m > 0.0)) throw std::invalid_argument("cannot select a face for the zero vector");
  // Canonical order B, D, F, L, R, U with their outward axes.
  if (-d.z() == m) return Face::Back;
  if (d.y() == m) return Face::Down;
  if (d.z() == m) return Face::Front;
  if (-d.x() == m) return Face::Left;
  if (d.x() == m) return Face::Right;
  return Face::Up;
}

CubePoint locate_on_cube(const Vec3& dir, int face_width) {
  const Face f = select_face(dir);
  const Vec3 local = face_rotation(f).matrix().transpose() * dir;
  const double half = 0.5 * face_width;
  return {f, local.x() / local.z() * half + half - 0.5, local.y() / local.z() * half + half - 0.5};
}

}  // namespace pano
