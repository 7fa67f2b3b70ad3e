#pragma once

// Direct photometric pose estimation on cubemaps: damped Gauss-Newton
// (Levenberg-Marquardt) over a Huber-robustified intensity residual, with
// central-difference Jacobians and a coarse-to-fine cubemap pyramid.

#include <functional>
#include <vector>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

struct SolverConfig {
  int max_iterations = 40;        // per pyramid level, accepted or rejected
  double initial_damping = 1e-3;  // relative to diag(J^T W J)
  double damping_up = 10.0;
  double damping_down = 10.0;
  double max_damping = 1e8;
  double step_tolerance = 1e-7;  // on the 6-vector update norm
  double huber_threshold = 0.1;  // intensity units
  int pyramid_levels = 3;
  double fd_step = 1e-5;  // central-difference step per parameter

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

struct IterationRecord {
  int level;  // 0 = finest
  double loss;
  double damping;
  double step_norm;
  bool accepted;
};

struct PoseEstimate {
  /// Target camera pose in the reference frame, inverse(pose_ref) * pose_tgt.
  PoseSE3 motion;
  bool converged = false;
  int iterations = 0;
  double final_loss = 0.0;  // Huber loss at the finest level
  std::vector<IterationRecord> history;
};

/// Huber-robustified photometric objective of a candidate motion at one
/// resolution: mean over valid reference pixels and channels. Keeps a
/// reference to tgt, which must outlive the objective.
class PhotometricObjective {
 public:
  PhotometricObjective(const Cubemap& ref, const Cubemap& tgt, const CubemapDepth& depth_ref,
                       double huber_threshold);

  double operator()(const PoseSE3& motion) const;
  std::size_t residual_count() const { return ref_values_.size(); }

  /// Residuals (sampled target minus reference) for a warp pose, i.e. the
  /// transform that takes reference-frame points into the target frame.
  void residuals(const PoseSE3& warp, std::vector<double>& out) const;
  double huber_loss(const std::vector<double>& residuals) const;

 private:
  const Cubemap* tgt_;
  double huber_;
  int channels_;
  std::vector<Vec3> points_;
  std::vector<double> ref_values_;
};

/// Left-composed local update: exp(delta) * pose with delta = (axis-angle,
/// translation).
PoseSE3 apply_increment(const Vec6& delta, const PoseSE3& pose);

/// Central-difference gradient of a scalar objective with respect to the
/// six left-composed local motion parameters.
Vec6 pose_jacobian_fd(const std::function<double(const PoseSE3&)>& objective, const PoseSE3& pose, double step);

/// Throws PreconditionError if fewer than 10% of depth pixels are valid or
/// the face width cannot be halved pyramid_levels - 1 times.
PoseEstimate estimate_pose(const Cubemap& ref, const Cubemap& tgt, const CubemapDepth& depth_ref,
                           const PoseSE3& init, const SolverConfig& cfg = {});

/// Halves the face width with a [1 3 3 1] / 8 separable filter; the taps
/// beyond a face edge come from cube padding.
Cubemap downsample_cubemap(const Cubemap& src);
/// 2x2 mean of ray lengths; invalid if any input texel is invalid.
CubemapDepth downsample_depth(const CubemapDepth& src);

}  // namespace pano
