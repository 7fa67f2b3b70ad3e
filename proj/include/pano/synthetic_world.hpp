#pragma once

// Analytic ground truth: ray-cast axis-aligned box rooms with smooth
// procedural textures. Poses are world-from-camera.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

enum class TextureKind { Checker, Gradient };

/// Checker: 0.5 + 0.5 sin(pi s / P) sin(pi t / P) blend, i.e. a band-limited
/// checkerboard with squares of side P. Gradient: raised cosine of period P
/// along the first in-plane axis.
struct Texture {
  TextureKind kind = TextureKind::Checker;
  double period_m = 0.5;
  Vec3 color_a = Vec3(0.2, 0.2, 0.2);
  Vec3 color_b = Vec3(0.8, 0.8, 0.8);

  /// Colour at in-plane coordinates (s, t), metres.
  Vec3 eval(double s, double t) const;
};

struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.25);
  Texture texture;
};

/// Wall order: x-, x+, y-, y+, z-, z+ (y- is the ceiling).
inline constexpr std::array<std::string_view, 6> kWallIds = {"x-", "x+", "y-", "y+", "z-", "z+"};

struct SyntheticScene {
  Vec3 room_half_extents = Vec3::Constant(2.0);  // room centred at the origin
  std::array<Texture, 6> wall_textures;
  std::vector<Box> obstacles;

  /// Strictly inside the room and outside every obstacle.
  bool is_free(const Vec3& p) const;
  SyntheticScene scaled(double s) const;
};

struct Trajectory {
  double fps = 10.0;
  std::vector<PoseSE3> poses;  // world-from-camera
};

struct RayHit {
  double distance;
  Vec3 color;
};

/// Nearest surface along a unit direction from a free-space origin.
RayHit cast_ray(const SyntheticScene& scene, const Vec3& origin, const Vec3& dir);

struct EquirectFrame {
  EquirectImage rgb;
  EquirectImage depth;  // ray length, metres
};

struct CubemapFrame {
  Cubemap rgb;
  CubemapDepth depth;
};

/// Throws std::invalid_argument if the camera is not in free space.
EquirectFrame render_equirect(const SyntheticScene& scene, const PoseSE3& pose, int height);
CubemapFrame render_cubemap(const SyntheticScene& scene, const PoseSE3& pose, int face_width);

struct RenderedSequence {
  std::vector<EquirectFrame> frames;
  /// relative[t] = inverse(pose_t) * pose_{t+1}.
  std::vector<PoseSE3> relative;
};

RenderedSequence render_sequence(const SyntheticScene& scene, const Trajectory& trajectory, int height);

/// 0 where the reference point is hidden from the target camera (the target
/// sees a surface more than 1e-3 m closer along that direction), else 1.
CubeMask occlusion_mask(const SyntheticScene& scene, const PoseSE3& pose_ref, const PoseSE3& pose_tgt,
                        const CubemapDepth& depth_ref);

struct SceneOptions {
  int obstacles = 0;
};

/// Reproducible random room.
SyntheticScene random_scene(std::uint64_t seed, const SceneOptions& options = {});

/// Random relative motion with rotation angle <= max_rotation_rad and
/// translation norm <= max_translation_m.
PoseSE3 random_motion(std::uint64_t seed, double max_rotation_rad, double max_translation_m);

/// Random-walk trajectory from the room centre; every pose lies in free space.
Trajectory random_trajectory(const SyntheticScene& scene, std::uint64_t seed, int frames,
                             double max_step_rotation_rad, double max_step_translation_m);

}  // namespace pano
