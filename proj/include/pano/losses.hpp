#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

/// Weights of the combined objective; defaults are the published training
/// values.
struct LossWeights {
  double pose = 0.1;
  double smoothness = 0.04;
  double explainability = 0.3;

  /// Throws std::invalid_argument if any weight is negative or non-finite.
  void validate() const;
};

struct LossParts {
  double rec = 0.0;
  double pose = 0.0;
  double smoothness = 0.0;
  double explainability = 0.0;
};

/// Mean over valid pixels and channels of x(p) * |ref(p) - warped(p)|.
/// Returns 0 when no pixel is valid.
double photometric_loss(const Cubemap& ref, const Cubemap& warped, const CubeMask& valid, const MaskMap& x);
/// Raster form with x = 1; valid holds one flag per pixel.
double photometric_loss(const Image& ref, const Image& warped, std::span<const std::uint8_t> valid);

/// Re-expresses a motion estimated in a face's camera frame in the front
/// camera frame: (F R F^T, F T) with F = face_rotation(face).
PoseSE3 transform_pose_to_front(const PoseSE3& face_pose, Face face);
/// Inverse of transform_pose_to_front.
PoseSE3 transform_pose_from_front(const PoseSE3& front_pose, Face face);

struct PoseConsistency {
  double loss = 0.0;  // sqrt of the mean per-component population variance
  Vec6 mean = Vec6::Zero();
  Vec6 component_std = Vec6::Zero();
};

/// Per-face motions (indexed by canonical face order) are moved to the front
/// frame, encoded as (axis-angle, translation) 6-vectors and compared with
/// their componentwise mean.
PoseConsistency pose_consistency(const std::array<PoseSE3, kNumFaces>& face_poses);
double pose_consistency_loss(const std::array<PoseSE3, kNumFaces>& face_poses);

/// 5-point Laplacian of every texel; neighbours beyond a face edge come from
/// cube padding.
Cubemap laplacian_map(const CubemapDepth& depth);
/// Mean absolute Laplacian over all cubemap texels.
double smoothness_loss(const CubemapDepth& depth);

/// -mean(log x). Throws std::invalid_argument if any sample is <= 0.
double explainability_loss(const MaskMap& x);

double total_loss(const LossParts& parts, const LossWeights& weights);

}  // namespace pano
