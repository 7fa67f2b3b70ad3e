#pragma once

#include <span>
#include <vector>

#include "pano/geometry.hpp"
#include "pano/image.hpp"

namespace pano {

struct DepthMetrics {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;  // fraction with max(p/g, g/p) < 1.25
  double delta2 = 0.0;  // ... < 1.25^2
  double delta3 = 0.0;  // ... < 1.25^3
  std::size_t count = 0;
  bool median_scaled = false;
  double scale = 1.0;  // factor applied to pred
};

struct DepthMetricOptions {
  /// Rescale pred by median(gt) / median(pred) over valid pixels first.
  bool median_scaling = false;
};

/// Flat form: samples with mask[i] == 0 are skipped. Throws
/// std::invalid_argument on size mismatch, an empty valid set, or a
/// non-positive pred/gt sample inside the valid set.
DepthMetrics depth_metrics(std::span<const double> pred, std::span<const double> gt,
                           std::span<const std::uint8_t> mask, const DepthMetricOptions& options = {});

/// Valid where gt > 0 and the mask (if given) is set.
DepthMetrics depth_metrics(const CubemapDepth& pred, const CubemapDepth& gt, const CubeMask* valid = nullptr,
                           const DepthMetricOptions& options = {});
DepthMetrics depth_metrics(const EquirectImage& pred, const EquirectImage& gt,
                           const DepthMetricOptions& options = {});

struct RpeMetrics {
  double rpe_r = 0.0;  // degrees
  double rpe_t = 0.0;  // scene units
};

/// Mean rotation angle and translation norm of inverse(gt_i) * pred_i over
/// paired relative motions.
RpeMetrics rpe(std::span<const PoseSE3> pred, std::span<const PoseSE3> gt);

}  // namespace pano
