#include "pano/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pano {

namespace {

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

DepthMetrics depth_metrics(std::span<const double> pred, std::span<const double> gt,
                           std::span<const std::uint8_t> mask, const DepthMetricOptions& options) {
  if (pred.size() != gt.size() || mask.size() != gt.size()) {
    throw std::invalid_argument("prediction, ground truth and mask sizes differ");
  }
  std::vector<double> p, g;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!mask[i]) continue;
    if (!(gt[i] > 0) || !(pred[i] > 0)) throw std::invalid_argument("depth samples must be positive inside the valid set");
    p.push_back(pred[i]);
    g.push_back(gt[i]);
  }
  if (g.empty()) throw std::invalid_argument("no valid pixels to evaluate");

  DepthMetrics m;
  if (options.median_scaling) {
    m.median_scaled = true;
    m.scale = median(g) / median(p);
    for (double& x : p) x *= m.scale;
  }

  const double t1 = 1.25, t2 = 1.25 * 1.25, t3 = 1.25 * 1.25 * 1.25;
  double abs_rel = 0, sq_rel = 0, sq = 0, sq_log = 0;
  std::size_t d1 = 0, d2 = 0, d3 = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double diff = p[i] - g[i];
    abs_rel += std::abs(diff) / g[i];
    sq_rel += diff * diff / g[i];
    sq += diff * diff;
    const double dl = std::log(p[i]) - std::log(g[i]);
    sq_log += dl * dl;
    const double ratio = std::max(p[i] / g[i], g[i] / p[i]);
    d1 += ratio < t1;
    d2 += ratio < t2;
    d3 += ratio < t3;
  }
  const double n = static_cast<double>(g.size());
  m.count = g.size();
  m.abs_rel = abs_rel / n;
  m.sq_rel = sq_rel / n;
  m.rmse = std::sqrt(sq / n);
  m.rmse_log = std::sqrt(sq_log / n);
  m.delta1 = static_cast<double>(d1) / n;
  m.delta2 = static_cast<double>(d2) / n;
  m.delta3 = static_cast<double>(d3) / n;
  return m;
}

DepthMetrics depth_metrics(const CubemapDepth& pred, const CubemapDepth& gt, const CubeMask* valid,
                           const DepthMetricOptions& options) {
  if (!pred.same_shape(gt) || gt.channels() != 1) throw std::invalid_argument("depth cubemaps differ in shape");
  if (valid && valid->face_width() != gt.face_width()) throw std::invalid_argument("mask size mismatch");
  const int w = gt.face_width();
  std::vector<double> p, g;
  std::vector<std::uint8_t> m;
  for (Face f : kFaces) {
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        p.push_back(pred.face(f).at(v, u));
        g.push_back(gt.face(f).at(v, u));
        m.push_back(g.back() > 0 && (!valid || valid->get(f, u, v)));
      }
    }
  }
  return depth_metrics(p, g, m, options);
}

DepthMetrics depth_metrics(const EquirectImage& pred, const EquirectImage& gt, const DepthMetricOptions& options) {
  if (!pred.same_shape(gt) || gt.channels() != 1) throw std::invalid_argument("depth panoramas differ in shape");
  std::vector<std::uint8_t> m;
  m.reserve(gt.pixel_count());
  for (double g : gt.data()) m.push_back(g > 0);
  return depth_metrics(pred.data(), gt.data(), m, options);
}

RpeMetrics rpe(std::span<const PoseSE3> pred, std::span<const PoseSE3> gt) {
  if (pred.size() != gt.size()) throw std::invalid_argument("pose sequences differ in length");
  if (gt.empty()) throw std::invalid_argument("pose sequences are empty");
  RpeMetrics out;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const PoseSE3 err = gt[i].inverse() * pred[i];
    out.rpe_r += err.rotation.angle() * 180.0 / std::numbers::pi;
    out.rpe_t += err.translation.norm();
  }
  const double n = static_cast<double>(gt.size());
  out.rpe_r /= n;
  out.rpe_t /= n;
  return out;
}

}  // namespace pano
