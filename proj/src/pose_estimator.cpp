#include "pano/pose_estimator.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "pano/cube_padding.hpp"
#include "pano/errors.hpp"
#include "pano/projection.hpp"

namespace pano {

void SolverConfig::validate() const {
  const bool ok = max_iterations > 0 && initial_damping > 0 && damping_up > 0 && damping_down > 0 &&
                  max_damping > 0 && step_tolerance > 0 && huber_threshold > 0 && pyramid_levels >= 1 &&
                  fd_step > 0;
  if (!ok) throw std::invalid_argument("solver configuration values must be positive");
}

// ---------------------------------------------------------------------------

PhotometricObjective::PhotometricObjective(const Cubemap& ref, const Cubemap& tgt, const CubemapDepth& depth_ref,
                                           double huber_threshold)
    : tgt_(&tgt), huber_(huber_threshold), channels_(ref.channels()) {
  if (!ref.same_shape(tgt)) throw std::invalid_argument("reference and target cubemaps differ in shape");
  if (depth_ref.face_width() != ref.face_width() || depth_ref.channels() != 1) {
    throw std::invalid_argument("reference depth must be single-channel and match the images");
  }
  const int w = ref.face_width();
  for (Face f : kFaces) {
    for (int v = 0; v < w; ++v) {
      for (int u = 0; u < w; ++u) {
        const double d = depth_ref.face(f).at(v, u);
        if (!(d > 0)) continue;
        points_.push_back(d * face_ray(f, w, u, v).normalized());
        for (int c = 0; c < channels_; ++c) ref_values_.push_back(ref.face(f).at(v, u, c));
      }
    }
  }
}

void PhotometricObjective::residuals(const PoseSE3& warp, std::vector<double>& out) const {
  out.resize(ref_values_.size());
  const Mat3& r = warp.rotation.matrix();
  double sample[8];
  std::span<double> s(sample, static_cast<std::size_t>(channels_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Vec3 q = r * points_[i] + warp.translation;
    const std::size_t base = i * channels_;
    if (q.isZero(0.0)) {
      for (int c = 0; c < channels_; ++c) out[base + c] = 0.0;
      continue;
    }
    sample_cubemap(*tgt_, q, Resample::Color, s);
    for (int c = 0; c < channels_; ++c) out[base + c] = sample[c] - ref_values_[base + c];
  }
}

double PhotometricObjective::huber_loss(const std::vector<double>& res) const {
  if (res.empty()) return 0.0;
  double sum = 0.0;
  for (double r : res) {
    const double a = std::abs(r);
    sum += a <= huber_ ? 0.5 * r * r : huber_ * (a - 0.5 * huber_);
  }
  return sum / static_cast<double>(res.size());
}

double PhotometricObjective::operator()(const PoseSE3& motion) const {
  std::vector<double> res;
  residuals(motion.inverse(), res);
  return huber_loss(res);
}

// ---------------------------------------------------------------------------

PoseSE3 apply_increment(const Vec6& delta, const PoseSE3& pose) {
  return PoseSE3::from_vector(delta) * pose;
}

Vec6 pose_jacobian_fd(const std::function<double(const PoseSE3&)>& objective, const PoseSE3& pose, double step) {
  if (!(step > 0)) throw std::invalid_argument("finite-difference step must be positive");
  Vec6 grad;
  for (int j = 0; j < 6; ++j) {
    Vec6 e = Vec6::Zero();
    e[j] = step;
    const double fp = objective(apply_increment(e, pose));
    const double fm = objective(apply_increment(-e, pose));
    grad[j] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

// ---------------------------------------------------------------------------

Cubemap downsample_cubemap(const Cubemap& src) {
  const int w = src.face_width();
  if (w < 4 || w % 2 != 0) throw std::invalid_argument("face width must be even and >= 4 to downsample");
  const int h = w / 2;
  const int channels = src.channels();
  const auto padded = cube_pad(src, 1);
  static constexpr double kTaps[4] = {0.125, 0.375, 0.375, 0.125};
  Cubemap out(h, channels);
  for (const PaddedFaceGrid& g : padded) {
    Image& face = out.face(g.face);
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < h; ++u) {
        for (int c = 0; c < channels; ++c) {
          double acc = 0.0;
          for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) acc += kTaps[a] * kTaps[b] * g.at(2 * u - 1 + b, 2 * v - 1 + a, c);
          }
          face.at(v, u, c) = acc;
        }
      }
    }
  }
  return out;
}

CubemapDepth downsample_depth(const CubemapDepth& src) {
  const int w = src.face_width();
  if (w < 4 || w % 2 != 0) throw std::invalid_argument("face width must be even and >= 4 to downsample");
  const int h = w / 2;
  CubemapDepth out(h, 1);
  for (Face f : kFaces) {
    const Image& in = src.face(f);
    Image& face = out.face(f);
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < h; ++u) {
        const double d[4] = {in.at(2 * v, 2 * u), in.at(2 * v, 2 * u + 1), in.at(2 * v + 1, 2 * u),
                             in.at(2 * v + 1, 2 * u + 1)};
        const bool valid = d[0] > 0 && d[1] > 0 && d[2] > 0 && d[3] > 0;
        face.at(v, u) = valid ? 0.25 * (d[0] + d[1] + d[2] + d[3]) : 0.0;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using JacobianMatrix = Eigen::Matrix<double, Eigen::Dynamic, 6>;

struct LevelResult {
  PoseSE3 warp;
  bool converged;
  int iterations;
  double loss;
};

void numeric_jacobian(const PhotometricObjective& obj, const PoseSE3& warp, double step, JacobianMatrix& jac,
                      std::vector<double>& rp, std::vector<double>& rm) {
  jac.resize(static_cast<Eigen::Index>(obj.residual_count()), 6);
  for (int j = 0; j < 6; ++j) {
    Vec6 e = Vec6::Zero();
    e[j] = step;
    obj.residuals(apply_increment(e, warp), rp);
    obj.residuals(apply_increment(-e, warp), rm);
    for (std::size_t k = 0; k < rp.size(); ++k) jac(static_cast<Eigen::Index>(k), j) = (rp[k] - rm[k]) / (2.0 * step);
  }
}

LevelResult solve_level(const PhotometricObjective& obj, const PoseSE3& init, const SolverConfig& cfg, int level,
                        std::vector<IterationRecord>& history) {
  PoseSE3 warp = init;
  std::vector<double> res, trial_res, rp, rm;
  obj.residuals(warp, res);
  double loss = obj.huber_loss(res);
  double damping = cfg.initial_damping;
  JacobianMatrix jac;
  bool need_jacobian = true;
  Eigen::Matrix<double, 6, 6> hessian;
  Vec6 gradient;

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (need_jacobian) {
      numeric_jacobian(obj, warp, cfg.fd_step, jac, rp, rm);
      hessian.setZero();
      gradient.setZero();
      for (std::size_t k = 0; k < res.size(); ++k) {
        const double a = std::abs(res[k]);
        const double weight = a <= cfg.huber_threshold ? 1.0 : cfg.huber_threshold / a;
        const auto row = jac.row(static_cast<Eigen::Index>(k));
        hessian.noalias() += weight * row.transpose() * row;
        gradient.noalias() += weight * res[k] * row.transpose();
      }
      need_jacobian = false;
    }

    Eigen::Matrix<double, 6, 6> damped = hessian;
    for (int i = 0; i < 6; ++i) damped(i, i) += damping * (hessian(i, i) + 1e-12);
    const Vec6 delta = damped.ldlt().solve(-gradient);
    const double step_norm = delta.norm();

    if (!delta.allFinite() || step_norm < cfg.step_tolerance) {
      history.push_back({level, loss, damping, delta.allFinite() ? step_norm : 0.0, false});
      return {warp, delta.allFinite(), it + 1, loss};
    }

    const PoseSE3 candidate = apply_increment(delta, warp);
    obj.residuals(candidate, trial_res);
    const double trial_loss = obj.huber_loss(trial_res);
    if (trial_loss < loss) {
      warp = candidate;
      res.swap(trial_res);
      loss = trial_loss;
      damping = std::max(damping / cfg.damping_down, 1e-12);
      need_jacobian = true;
      history.push_back({level, loss, damping, step_norm, true});
    } else {
      damping *= cfg.damping_up;
      history.push_back({level, loss, damping, step_norm, false});
      if (damping > cfg.max_damping) return {warp, false, it + 1, loss};
    }
  }
  return {warp, false, it, loss};
}

}  // namespace

PoseEstimate estimate_pose(const Cubemap& ref, const Cubemap& tgt, const CubemapDepth& depth_ref,
                           const PoseSE3& init, const SolverConfig& cfg) {
  cfg.validate();
  if (!ref.same_shape(tgt)) throw std::invalid_argument("reference and target cubemaps differ in shape");
  if (depth_ref.face_width() != ref.face_width() || depth_ref.channels() != 1) {
    throw std::invalid_argument("reference depth must be single-channel and match the images");
  }
  if (ref.channels() > 8) throw std::invalid_argument("at most 8 channels are supported");

  std::size_t valid = 0;
  for (Face f : kFaces) {
    for (double d : depth_ref.face(f).data()) valid += d > 0 ? 1 : 0;
  }
  if (static_cast<double>(valid) < 0.1 * static_cast<double>(depth_ref.pixel_count())) {
    throw PreconditionError("reference depth is valid on fewer than 10% of pixels");
  }
  const int divisor = 1 << (cfg.pyramid_levels - 1);
  if (ref.face_width() % divisor != 0 || ref.face_width() / divisor < 2) {
    throw PreconditionError("face width is not divisible by 2^(pyramid_levels - 1)");
  }

  std::vector<Cubemap> refs{ref}, tgts{tgt};
  std::vector<CubemapDepth> depths{depth_ref};
  for (int l = 1; l < cfg.pyramid_levels; ++l) {
    refs.push_back(downsample_cubemap(refs.back()));
    tgts.push_back(downsample_cubemap(tgts.back()));
    depths.push_back(downsample_depth(depths.back()));
  }

  PoseEstimate est;
  PoseSE3 warp = init.inverse();
  for (int l = cfg.pyramid_levels - 1; l >= 0; --l) {
    const PhotometricObjective obj(refs[l], tgts[l], depths[l], cfg.huber_threshold);
    const LevelResult lr = solve_level(obj, warp, cfg, l, est.history);
    warp = lr.warp;
    est.iterations += lr.iterations;
    if (l == 0) {
      est.converged = lr.converged;
      est.final_loss = lr.loss;
    }
  }
  est.motion = warp.inverse();
  return est;
}

}  // namespace pano
