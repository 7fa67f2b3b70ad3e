#include <gtest/gtest.h>

#include <algorithm>

#include "pano/losses.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace pano;
using namespace pano::test;

TEST(PhotometricLoss, TrivialCases) {
  Rng rng(1);
  const Cubemap a = random_cubemap(rng, 8, 3);
  const Cubemap b = random_cubemap(rng, 8, 3);
  const CubeMask all(8, true);
  EXPECT_EQ(photometric_loss(a, a, all, MaskMap(8, 1, 1.0)), 0.0);
  EXPECT_EQ(photometric_loss(a, b, all, MaskMap(8, 1, 0.0)), 0.0);
  EXPECT_NEAR(photometric_loss(Cubemap(8, 3, 0.2), Cubemap(8, 3, 0.5), all, MaskMap(8, 1, 1.0)), 0.3, 1e-12);
  EXPECT_EQ(photometric_loss(a, b, CubeMask(8, false), MaskMap(8, 1, 1.0)), 0.0);
  EXPECT_THROW(photometric_loss(a, Cubemap(8, 1), all, MaskMap(8, 1, 1.0)), std::invalid_argument);
  EXPECT_THROW(photometric_loss(a, b, CubeMask(4, true), MaskMap(8, 1, 1.0)), std::invalid_argument);
  EXPECT_THROW(photometric_loss(a, b, all, MaskMap(8, 2, 1.0)), std::invalid_argument);
}

TEST(PhotometricLoss, MatchesBruteForceOracle) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const int w = 4 + static_cast<int>(rng() % 8);
    const int ch = 1 + static_cast<int>(rng() % 3);
    const Cubemap a = random_cubemap(rng, w, ch);
    const Cubemap b = random_cubemap(rng, w, ch);
    const MaskMap x = random_cubemap(rng, w, 1);
    CubeMask valid(w, false);
    double sum = 0.0;
    int n = 0;
    for (Face f : kFaces) {
      for (int v = 0; v < w; ++v) {
        for (int u = 0; u < w; ++u) {
          if (uniform(rng, 0, 1) < 0.3) continue;
          valid.set(f, u, v, true);
          ++n;
          for (int c = 0; c < ch; ++c) sum += x.face(f).at(v, u) * std::abs(a.face(f).at(v, u, c) - b.face(f).at(v, u, c));
        }
      }
    }
    const double loss = photometric_loss(a, b, valid, x);
    EXPECT_NEAR(loss, sum / (n * ch), 1e-9);
    EXPECT_GE(loss, 0.0);
  }
}

TEST(PhotometricLoss, RasterFormMatchesOracle) {
  Rng rng(3);
  Image a(10, 5, 2), b(10, 5, 2);
  for (double& x : a.data()) x = uniform(rng, 0, 1);
  for (double& x : b.data()) x = uniform(rng, 0, 1);
  std::vector<std::uint8_t> valid(50);
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < 50; ++i) {
    valid[i] = uniform(rng, 0, 1) < 0.7;
    if (!valid[i]) continue;
    ++n;
    for (int c = 0; c < 2; ++c) sum += std::abs(a.data()[2 * i + c] - b.data()[2 * i + c]);
  }
  EXPECT_NEAR(photometric_loss(a, b, valid), sum / (2 * n), 1e-12);
}

TEST(TransformPoseToFront, TrivialCases) {
  Rng rng(4);
  const PoseSE3 p = random_pose(rng, 1.0, 1.0);
  const PoseSE3 same = transform_pose_to_front(p, Face::Front);
  EXPECT_EQ(same.rotation.matrix(), p.rotation.matrix());
  EXPECT_EQ(same.translation, p.translation);
  for (Face f : kFaces) {
    const PoseSE3 id = transform_pose_to_front(PoseSE3::identity(), f);
    EXPECT_LE((id.rotation.matrix() - Mat3::Identity()).norm(), 1e-12);
    EXPECT_LE(id.translation.norm(), 1e-12);
  }
}

TEST(TransformPoseToFront, RecoversFrontMotionFromEveryFace) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const PoseSE3 m = random_pose(rng, 0.5, 0.5);
    for (Face f : kFaces) {
      const PoseSE3 face_motion = motion_in_face_frame(m, f);
      const PoseSE3 back = transform_pose_to_front(face_motion, f);
      EXPECT_LE((back.rotation.matrix() - m.rotation.matrix()).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LE((back.translation - m.translation).norm(), 1e-9);
      const PoseSE3 there = transform_pose_from_front(m, f);
      EXPECT_LE((there.rotation.matrix() - face_motion.rotation.matrix()).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LE((there.translation - face_motion.translation).norm(), 1e-9);
    }
  }
}

TEST(TransformPoseToFront, MovesPointsLikeTheFrontMotion) {
  // A point seen by the face camera and moved by the face-frame motion lands
  // where the front-frame motion puts the same physical point.
  Rng rng(6);
  const PoseSE3 m = random_pose(rng, 0.4, 0.4);
  for (Face f : kFaces) {
    const PoseSE3 face_motion = motion_in_face_frame(m, f);
    const Vec3 p_face = random_unit(rng) * 2.0;
    const Vec3 p_front = face_rotation(f) * p_face;
    EXPECT_LE((face_rotation(f) * (face_motion * p_face) - m * p_front).norm(), 1e-12);
  }
}

TEST(PoseConsistency, NullSpace) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const PoseSE3 m = random_pose(rng, 0.3, 0.3);
    std::array<PoseSE3, kNumFaces> poses;
    for (Face f : kFaces) poses[face_index(f)] = motion_in_face_frame(m, f);
    EXPECT_LE(pose_consistency_loss(poses), 1e-9);
  }
  std::array<PoseSE3, kNumFaces> ids;
  EXPECT_EQ(pose_consistency_loss(ids), 0.0);
}

TEST(PoseConsistency, AlternatingTranslations) {
  const double eps = 0.06;
  std::array<PoseSE3, kNumFaces> poses;
  std::array<Vec6, kNumFaces> rows;
  for (int i = 0; i < kNumFaces; ++i) {
    PoseSE3 front;
    front.translation = Vec3(0, 0, i % 2 == 0 ? eps : -eps);
    poses[i] = motion_in_face_frame(front, kFaces[i]);
    rows[i] << 0, 0, 0, 0, 0, front.translation.z();
  }
  EXPECT_NEAR(pose_consistency_loss(poses), pose_std_oracle(rows), 1e-12);
  EXPECT_NEAR(pose_consistency_loss(poses), std::sqrt(eps * eps / 6.0), 1e-12);
  const PoseConsistency pc = pose_consistency(poses);
  EXPECT_NEAR(pc.component_std[5], eps, 1e-12);
  EXPECT_NEAR(pc.mean[5], 0.0, 1e-12);
}

TEST(PoseConsistency, MatchesOracleOnRandomPoses) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    std::array<PoseSE3, kNumFaces> poses;
    std::array<Vec6, kNumFaces> rows;
    for (Face f : kFaces) {
      const PoseSE3 front = random_pose(rng, 0.4, 0.3);
      poses[face_index(f)] = motion_in_face_frame(front, f);
      rows[face_index(f)] = front.to_vector();
    }
    EXPECT_NEAR(pose_consistency_loss(poses), pose_std_oracle(rows), 1e-9);
  }
}

TEST(PoseConsistency, SensitiveToOneFace) {
  Rng rng(9);
  const PoseSE3 m = random_pose(rng, 0.2, 0.2);
  for (Face bad : kFaces) {
    std::array<PoseSE3, kNumFaces> poses;
    for (Face f : kFaces) poses[face_index(f)] = motion_in_face_frame(m, f);
    poses[face_index(bad)].rotation = Rotation3::about_axis(random_unit(rng), 1.5e-3) * poses[face_index(bad)].rotation;
    EXPECT_GT(pose_consistency_loss(poses), 1e-5);
  }
}

TEST(PoseConsistency, OrderInvariant) {
  Rng rng(10);
  std::array<PoseSE3, kNumFaces> fronts;
  for (auto& p : fronts) p = random_pose(rng, 0.3, 0.3);
  std::array<PoseSE3, kNumFaces> a, b;
  std::array<int, kNumFaces> perm = {3, 0, 5, 1, 4, 2};
  for (int i = 0; i < kNumFaces; ++i) {
    a[i] = motion_in_face_frame(fronts[i], kFaces[i]);
    b[i] = motion_in_face_frame(fronts[perm[i]], kFaces[i]);
  }
  EXPECT_NEAR(pose_consistency_loss(a), pose_consistency_loss(b), 1e-12);
}

TEST(Smoothness, ConstantAndAffine) {
  EXPECT_EQ(smoothness_loss(Cubemap(8, 1, 3.0)), 0.0);
  const int w = 10;
  CubemapDepth ramp(w, 1);
  for (int v = 0; v < w; ++v) {
    for (int u = 0; u < w; ++u) ramp.face(Face::Left).at(v, u) = 1.0 + 0.1 * u + 0.05 * v;
  }
  const Cubemap lap = laplacian_map(ramp);
  for (int v = 1; v < w - 1; ++v) {
    for (int u = 1; u < w - 1; ++u) EXPECT_NEAR(lap.face(Face::Left).at(v, u), 0.0, 1e-12);
  }
}

TEST(Smoothness, MatchesFoldOracle) {
  Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    const Cubemap d = random_cubemap(rng, 4 + 2 * static_cast<int>(rng() % 5), 1, 0.5, 5.0);
    EXPECT_NEAR(smoothness_loss(d), smoothness_oracle(d), 1e-9);
  }
}

TEST(Smoothness, ShiftInvariantAndHomogeneous) {
  Rng rng(12);
  const Cubemap d = random_cubemap(rng, 12, 1, 1.0, 3.0);
  Cubemap shifted = d, doubled = d;
  for (Face f : kFaces) {
    for (double& x : shifted.face(f).data()) x += 2.5;
    for (double& x : doubled.face(f).data()) x *= 2.0;
  }
  EXPECT_NEAR(smoothness_loss(shifted), smoothness_loss(d), 1e-9);
  EXPECT_NEAR(smoothness_loss(doubled), 2.0 * smoothness_loss(d), 1e-9);
}

TEST(Explainability, KnownValuesAndErrors) {
  EXPECT_EQ(explainability_loss(MaskMap(6, 1, 1.0)), 0.0);
  EXPECT_NEAR(explainability_loss(MaskMap(6, 1, std::exp(-1.0))), 1.0, 1e-15);
  MaskMap bad(6, 1, 0.5);
  bad.face(Face::Right).at(2, 3) = 0.0;
  EXPECT_THROW(explainability_loss(bad), std::invalid_argument);
  bad.face(Face::Right).at(2, 3) = -0.1;
  EXPECT_THROW(explainability_loss(bad), std::invalid_argument);
}

TEST(Explainability, MatchesOracleAndIsMonotone) {
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    MaskMap x = random_cubemap(rng, 7, 1, 1e-3, 1.0);
    double sum = 0.0;
    for (Face f : kFaces) {
      for (double v : x.face(f).data()) sum += std::log(v);
    }
    const double loss = explainability_loss(x);
    EXPECT_NEAR(loss, -sum / (6 * 49), 1e-9);
    x.face(Face::Down).at(3, 3) = std::min(1.0, x.face(Face::Down).at(3, 3) * 1.5);
    EXPECT_LE(explainability_loss(x), loss);
  }
}

TEST(TotalLoss, WeightedSum) {
  const LossWeights w;
  EXPECT_EQ(total_loss(LossParts{}, w), 0.0);
  EXPECT_NEAR(total_loss(LossParts{1, 1, 1, 1}, w), 1.44, 1e-15);
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const LossParts p{uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2)};
    const LossWeights lw{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
    EXPECT_NEAR(total_loss(p, lw), p.rec + lw.pose * p.pose + lw.smoothness * p.smoothness + lw.explainability * p.explainability,
                1e-12);
  }
  EXPECT_THROW((LossWeights{-0.1, 0.04, 0.3}.validate()), std::invalid_argument);
  EXPECT_NO_THROW(w.validate());
}
