#include "pano/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "pano/cube_padding.hpp"

namespace pano {

void LossWeights::validate() const {
  for (double w : {pose, smoothness, explainability}) {
    if (!std::isfinite(w) || w < 0) throw std::invalid_argument("loss weights must be finite and non-negative");
  }
}

double photometric_loss(const Cubemap& ref, const Cubemap& warped, const CubeMask& valid, const MaskMap& x) {
  if (!ref.same_shape(warped)) throw std::invalid_argument("reference and warped cubemaps differ in shape");
  if (valid.face_width() != ref.face_width()) throw std::invalid_argument("validity mask has the wrong size");
  if (x.face_width() != ref.face_width() || x.channels() != 1) {
    throw std::invalid_argument("explainability mask must be single-channel and match the cubemap");
  }
  const int w = ref.face_width();
  const int channels = ref.channels();
  double sum = 0.0;
  std::size_t n = 0;
  for (Face f : kFaces) {
    const Image& a = ref.face(f);
    const Image& b = warped.face(f);
    const Image& m = x.face(f);
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!valid.get(f, u, v)) continue;
        const double weight = m.at(v, u);
        for (int c = 0; c < channels; ++c) sum += weight * std::abs(a.at(v, u, c) - b.at(v, u, c));
        ++n;
      }
    }
  }
  return n == 0 ? 0.0 : sum / (static_cast<double>(n) * channels);
}

double photometric_loss(const Image& ref, const Image& warped, std::span<const std::uint8_t> valid) {
  if (!ref.same_shape(warped)) throw std::invalid_argument("reference and warped rasters differ in shape");
  if (valid.size() != ref.pixel_count()) throw std::invalid_argument("validity mask has the wrong size");
  const int channels = ref.channels();
  const auto a = ref.data();
  const auto b = warped.data();
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (!valid[i]) continue;
    for (int c = 0; c < channels; ++c) sum += std::abs(a[i * channels + c] - b[i * channels + c]);
    ++n;
  }
  return n == 0 ? 0.0 : sum / (static_cast<double>(n) * channels);
}

PoseSE3 transform_pose_to_front(const PoseSE3& face_pose, Face face) {
  const Rotation3& r = face_rotation(face);
  return {r * face_pose.rotation * r.inverse(), r * face_pose.translation};
}

PoseSE3 transform_pose_from_front(const PoseSE3& front_pose, Face face) {
  const Rotation3 rt = face_rotation(face).inverse();
  return {rt * front_pose.rotation * rt.inverse(), rt * front_pose.translation};
}

PoseConsistency pose_consistency(const std::array<PoseSE3, kNumFaces>& face_poses) {
  std::array<Vec6, kNumFaces> encoded;
  PoseConsistency out;
  for (int i = 0; i < kNumFaces; ++i) {
    encoded[i] = transform_pose_to_front(face_poses[i], kFaces[i]).to_vector();
    out.mean += encoded[i];
  }
  out.mean /= kNumFaces;
  Vec6 var = Vec6::Zero();
  for (const Vec6& e : encoded) var += (e - out.mean).cwiseAbs2();
  var /= kNumFaces;
  out.component_std = var.cwiseSqrt();
  out.loss = std::sqrt(var.mean());
  return out;
}

double pose_consistency_loss(const std::array<PoseSE3, kNumFaces>& face_poses) {
  return pose_consistency(face_poses).loss;
}

Cubemap laplacian_map(const CubemapDepth& depth) {
  if (depth.channels() != 1) throw std::invalid_argument("depth cubemap must be single-channel");
  const int w = depth.face_width();
  const auto padded = cube_pad(depth, 1);
  Cubemap lap(w, 1);
  for (const PaddedFaceGrid& g : padded) {
    Image& out = lap.face(g.face);
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        out.at(v, u) = g.at(u + 1, v) + g.at(u - 1, v) + g.at(u, v + 1) + g.at(u, v - 1) - 4.0 * g.at(u, v);
      }
    }
  }
  return lap;
}

double smoothness_loss(const CubemapDepth& depth) {
  const Cubemap lap = laplacian_map(depth);
  double sum = 0.0;
  for (Face f : kFaces) {
    for (double s : lap.face(f).data()) sum += std::abs(s);
  }
  return sum / static_cast<double>(lap.pixel_count());
}

double explainability_loss(const MaskMap& x) {
  if (x.channels() != 1) throw std::invalid_argument("explainability mask must be single-channel");
  double sum = 0.0;
  for (Face f : kFaces) {
    for (double s : x.face(f).data()) {
      if (!(s > 0.0)) throw std::invalid_argument("explainability mask samples must be > 0");
      sum += std::log(s);
    }
  }
  return 0.0 - sum / static_cast<double>(x.pixel_count());
}

double total_loss(const LossParts& parts, const LossWeights& weights) {
  weights.validate();
  for (double p : {parts.rec, parts.pose, parts.smoothness, parts.explainability}) {
    if (!std::isfinite(p)) throw std::invalid_argument("loss terms must be finite");
  }
  return parts.rec + weights.pose * parts.pose + weights.smoothness * parts.smoothness +
         weights.explainability * parts.explainability;
}

}  // namespace pano
