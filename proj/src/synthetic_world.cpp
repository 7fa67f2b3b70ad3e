#include "pano/synthetic_world.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pano/parallel.hpp"
#include "pano/projection.hpp"

namespace pano {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// In-plane texture coordinates for a surface whose normal is along `axis`.
std::pair<double, double> plane_coords(const Vec3& p, int axis) {
  switch (axis) {
    case 0: return {p.z(), p.y()};
    case 1: return {p.x(), p.z()};
    default: return {p.x(), p.y()};
  }
}

Vec3 unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

Texture random_texture(std::mt19937_64& rng, double min_period, double max_period) {
  std::uniform_real_distribution<double> period(min_period, max_period);
  std::uniform_real_distribution<double> dark(0.05, 0.4);
  std::uniform_real_distribution<double> light(0.6, 0.95);
  std::bernoulli_distribution gradient(0.2);
  Texture t;
  t.kind = gradient(rng) ? TextureKind::Gradient : TextureKind::Checker;
  t.period_m = period(rng);
  t.color_a = Vec3(dark(rng), dark(rng), dark(rng));
  t.color_b = Vec3(light(rng), light(rng), light(rng));
  return t;
}

}  // namespace

Vec3 Texture::eval(double s, double t) const {
  double blend = 0.0;
  if (kind == TextureKind::Checker) {
    blend = 0.5 + 0.5 * std::sin(kPi * s / period_m) * std::sin(kPi * t / period_m);
  } else {
    blend = 0.5 + 0.5 * std::cos(2.0 * kPi * s / period_m);
  }
  return color_a + blend * (color_b - color_a);
}

bool SyntheticScene::is_free(const Vec3& p) const {
  if (!p.allFinite()) return false;
  if ((p.cwiseAbs() - room_half_extents).maxCoeff() >= 0.0) return false;
  for (const Box& b : obstacles) {
    if (((p - b.center).cwiseAbs() - b.half_extents).maxCoeff() <= 0.0) return false;
  }
  return true;
}

SyntheticScene SyntheticScene::scaled(double s) const {
  SyntheticScene out = *this;
  out.room_half_extents *= s;
  for (Texture& t : out.wall_textures) t.period_m *= s;
  for (Box& b : out.obstacles) {
    b.center *= s;
    b.half_extents *= s;
    b.texture.period_m *= s;
  }
  return out;
}

RayHit cast_ray(const SyntheticScene& scene, const Vec3& origin, const Vec3& dir) {
  double best = kInf;
  int best_axis = -1;
  const Texture* tex = nullptr;

  // Walls: the origin is inside the room, so exactly one exit per axis.
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) continue;
    const double wall = dir[i] > 0 ? scene.room_half_extents[i] : -scene.room_half_extents[i];
    const double t = (wall - origin[i]) / dir[i];
    if (t > 0 && t < best) {
      best = t;
      best_axis = i;
      tex = &scene.wall_textures[2 * i + (dir[i] > 0 ? 1 : 0)];
    }
  }

  // Obstacles: slab test, entry distance only (origin is outside every box).
  for (const Box& b : scene.obstacles) {
    double t_near = -kInf;
    double t_far = kInf;
    int near_axis = -1;
    bool miss = false;
    for (int i = 0; i < 3; ++i) {
      const double lo = b.center[i] - b.half_extents[i];
      const double hi = b.center[i] + b.half_extents[i];
      if (dir[i] == 0.0) {
        if (origin[i] < lo || origin[i] > hi) {
          miss = true;
          break;
        }
        continue;
      }
      double t1 = (lo - origin[i]) / dir[i];
      double t2 = (hi - origin[i]) / dir[i];
      if (t1 > t2) std::swap(t1, t2);
      if (t1 > t_near) {
        t_near = t1;
        near_axis = i;
      }
      t_far = std::min(t_far, t2);
    }
    if (miss || near_axis < 0 || t_near > t_far || t_near <= 0) continue;
    if (t_near < best) {
      best = t_near;
      best_axis = near_axis;
      tex = &b.texture;
    }
  }

  if (tex == nullptr) throw std::invalid_argument("ray does not hit any surface; is the origin inside the room?");
  const Vec3 hit = origin + best * dir;
  const auto [s, t] = plane_coords(hit, best_axis);
  return {best, tex->eval(s, t)};
}

EquirectFrame render_equirect(const SyntheticScene& scene, const PoseSE3& pose, int height) {
  if (height < 1) throw std::invalid_argument("render height must be positive");
  if (!scene.is_free(pose.translation)) throw std::invalid_argument("camera position is not in free space");
  EquirectFrame frame{EquirectImage(height, 3), EquirectImage(height, 1)};
  const int width = 2 * height;
  parallel_for(0, height, [&](int r) {
    for (int c = 0; c < width; ++c) {
      const Vec3 dir = pose.rotation * sphere_to_ray(pixel_to_sphere(r, c, height));
      const RayHit hit = cast_ray(scene, pose.translation, dir.normalized());
      frame.depth.at(r, c) = hit.distance;
      for (int ch = 0; ch < 3; ++ch) frame.rgb.at(r, c, ch) = hit.color[ch];
    }
  });
  return frame;
}

CubemapFrame render_cubemap(const SyntheticScene& scene, const PoseSE3& pose, int face_width) {
  if (!scene.is_free(pose.translation)) throw std::invalid_argument("camera position is not in free space");
  CubemapFrame frame{Cubemap(face_width, 3), Cubemap(face_width, 1)};
  parallel_for(0, kNumFaces, [&](int fi) {
    const Face f = kFaces[fi];
    for (int v = 0; v < face_width; ++v) {
      for (int u = 0; u < face_width; ++u) {
        const Vec3 dir = (pose.rotation * face_ray(f, face_width, u, v)).normalized();
        const RayHit hit = cast_ray(scene, pose.translation, dir);
        frame.depth.face(f).at(v, u) = hit.distance;
        for (int ch = 0; ch < 3; ++ch) frame.rgb.face(f).at(v, u, ch) = hit.color[ch];
      }
    }
  });
  return frame;
}

RenderedSequence render_sequence(const SyntheticScene& scene, const Trajectory& trajectory, int height) {
  RenderedSequence seq;
  seq.frames.reserve(trajectory.poses.size());
  for (const PoseSE3& p : trajectory.poses) seq.frames.push_back(render_equirect(scene, p, height));
  for (std::size_t i = 1; i < trajectory.poses.size(); ++i) {
    seq.relative.push_back(trajectory.poses[i - 1].inverse() * trajectory.poses[i]);
  }
  return seq;
}

CubeMask occlusion_mask(const SyntheticScene& scene, const PoseSE3& pose_ref, const PoseSE3& pose_tgt,
                        const CubemapDepth& depth_ref) {
  const int w = depth_ref.face_width();
  CubeMask mask(w, true);
  const Vec3& center = pose_tgt.translation;
  for (Face f : kFaces) {
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        const double d = depth_ref.face(f).at(v, u);
        if (d <= 0) continue;
        const Vec3 world = pose_ref * (d * face_ray(f, w, u, v).normalized());
        const Vec3 ray = world - center;
        const double dist = ray.norm();
        if (dist == 0.0) continue;
        const RayHit hit = cast_ray(scene, center, ray / dist);
        if (hit.distance < dist - 1e-3) mask.set(f, u, v, false);
      }
    }
  }
  return mask;
}

SyntheticScene random_scene(std::uint64_t seed, const SceneOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> horizontal(1.6, 2.4);
  std::uniform_real_distribution<double> vertical(1.2, 1.6);
  SyntheticScene scene;
  scene.room_half_extents = Vec3(horizontal(rng), vertical(rng), horizontal(rng));
  for (Texture& t : scene.wall_textures) t = random_texture(rng, 0.35, 0.6);

  std::uniform_real_distribution<double> size(0.2, 0.4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < options.obstacles; ++i) {
    Box b;
    b.half_extents = Vec3(size(rng), size(rng), size(rng));
    // Keep clear of the room centre and of the walls.
    Vec3 c;
    do {
      c = Vec3(unit(rng), unit(rng), unit(rng)).cwiseProduct(scene.room_half_extents - b.half_extents -
                                                          Vec3::Constant(0.3));
    } while ((c.cwiseAbs() - b.half_extents).maxCoeff() < 0.45);
    b.center = c;
    b.texture = random_texture(rng, 0.15, 0.3);
    scene.obstacles.push_back(b);
  }
  return scene;
}

PoseSE3 random_motion(std::uint64_t seed, double max_rotation_rad, double max_translation_m) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 axis = unit_vector(rng);
  const double angle = max_rotation_rad * unit(rng);
  const Vec3 dir = unit_vector(rng);
  const double dist = max_translation_m * unit(rng);
  return {Rotation3::exp(axis * angle), dir * dist};
}

Trajectory random_trajectory(const SyntheticScene& scene, std::uint64_t seed, int frames,
                             double max_step_rotation_rad, double max_step_translation_m) {
  if (frames < 1) throw std::invalid_argument("trajectory needs at least one frame");
  if (!scene.is_free(Vec3::Zero())) throw std::invalid_argument("room centre is not free");
  std::mt19937_64 rng(seed);
  Trajectory traj;
  traj.poses.push_back(PoseSE3::identity());
  while (static_cast<int>(traj.poses.size()) < frames) {
    const PoseSE3 step = random_motion(rng(), max_step_rotation_rad, max_step_translation_m);
    const PoseSE3 next = traj.poses.back() * step;
    if (scene.is_free(next.translation)) traj.poses.push_back(next);
  }
  return traj;
}

}  // namespace pano
