#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bench.hpp"
#include "cli.hpp"
#include "pano/io.hpp"
#include "pano/json_io.hpp"
#include "pano/projection.hpp"
#include "pano/synthetic_world.hpp"
#include "scene_oracle.hpp"
#include "support.hpp"

using namespace pano;
using namespace pano::test;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pano_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::vector<std::string>& args) const { return cli::run(args); }

  std::string run_stdout(const std::vector<std::string>& args, int expected = 0) const {
    ::testing::internal::CaptureStdout();
    const int code = cli::run(args);
    const std::string out = ::testing::internal::GetCapturedStdout();
    EXPECT_EQ(code, expected);
    return out;
  }

  // Reference and target panoramas of a generated room, written as PFM.
  void write_pair(const PoseSE3& motion, int height = 128) const {
    const SyntheticScene scene = random_scene(1);
    const EquirectFrame ref = render_equirect(scene, PoseSE3::identity(), height);
    const EquirectFrame tgt = render_equirect(scene, motion, height);
    write_pfm(path("ref.pfm"), ref.rgb);
    write_pfm(path("tgt.pfm"), tgt.rgb);
    write_pfm(path("depth.pfm"), ref.depth);
    write_json(path("gt.json"), json(motion));
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_ext(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

const PoseSE3 kMotion = PoseSE3::from_vector((Vec6() << 0.02, 0.06, -0.01, 0.08, -0.02, 0.05).finished());

}  // namespace

TEST_F(CliTest, RenderFileCountsAndDeterminism) {
  ASSERT_EQ(run({"render", "--seed", "4", "--frames", "2", "--height", "32", "-o", path("a"), "--save-scene",
                 path("scene.json")}),
            0);
  EXPECT_EQ(count_ext(path("a"), ".png"), 2u);
  EXPECT_EQ(count_ext(path("a"), ".pfm"), 2u);
  EXPECT_EQ(count_ext(path("a"), ".json"), 1u);
  const json poses = read_json(path("a/poses.json"));
  EXPECT_EQ(poses["poses"].size(), 2u);
  EXPECT_EQ(poses["relative"].size(), 1u);

  ASSERT_EQ(run({"render", "--seed", "4", "--frames", "2", "--height", "32", "-o", path("b")}), 0);
  for (const char* f : {"frame_0000.png", "frame_0001.png", "depth_0000.pfm", "depth_0001.pfm", "poses.json"}) {
    EXPECT_EQ(slurp(path("a") + "/" + f), slurp(path("b") + "/" + f)) << f;
  }
}

TEST_F(CliTest, RenderFromSceneAndTrajectoryFiles) {
  const SyntheticScene scene = random_scene(5, SceneOptions{2});
  write_json(path("scene.json"), json(scene));
  Trajectory traj;
  PoseSE3 p;
  p.translation = Vec3(0.1, 0.05, -0.1);
  traj.poses = {PoseSE3::identity(), p};
  write_json(path("traj.json"), json(traj));
  ASSERT_EQ(run({"render", "--scene", path("scene.json"), "--trajectory", path("traj.json"), "--height", "64", "-o",
                 path("out")}),
            0);
  // Spot check 1000 depth pixels of the second frame against the plane oracle.
  const SyntheticScene loaded = read_json(path("scene.json")).get<SyntheticScene>();
  const Image depth = read_pfm(path("out/depth_0001.pfm"));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const int r = static_cast<int>(rng() % 64);
    const int c = static_cast<int>(rng() % 128);
    const double expect = plane_oracle(loaded, p.translation, pixel_ray_oracle(r, c, 64));
    EXPECT_NEAR(depth.at(r, c), expect, 1e-6 * expect);
  }
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"convert", "-i", path("missing.png"), "-d", "equi2cube", "-s", "8", "-o", path("c")}), 2);
  {
    std::ofstream bad(path("bad.pfm"), std::ios::binary);
    bad << "PX\n2 2\n-1.0\n";
  }
  ::testing::internal::CaptureStderr();
  EXPECT_EQ(run({"convert", "-i", path("bad.pfm"), "-d", "equi2cube", "-s", "8", "-o", path("c")}), 2);
  const std::string diag = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(diag.find("bad.pfm"), std::string::npos);
  EXPECT_NE(diag.find("magic"), std::string::npos);

  EXPECT_EQ(run({"convert", "-i", path("x"), "-d", "sideways", "-s", "8", "-o", path("c")}), 2);
  EXPECT_EQ(run({"render", "--bogus-flag", "-o", path("r")}), 2);
  EXPECT_EQ(run({}), 2);
  ::testing::internal::CaptureStdout();
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(::testing::internal::GetCapturedStdout().find("estimate-pose"), std::string::npos);
  EXPECT_EQ(run({"bench", "--heights", "50", "--iters", "1", "-o", path("b.json")}), 1);
  EXPECT_EQ(run({"metrics", "-o", path("m.json")}), 1);
  write_pair(kMotion, 32);
  EXPECT_EQ(run({"losses", "--ref", path("ref.pfm"), "--tgt", path("tgt.pfm"), "--depth", path("depth.pfm"), "--pose",
                 path("gt.json"), "--lambda-sm", "-1"}),
            1);
  write_json(path("broken.json"), json{{"rotation_axis_angle", {1, 2}}});
  EXPECT_EQ(run({"losses", "--ref", path("ref.pfm"), "--tgt", path("tgt.pfm"), "--depth", path("depth.pfm"), "--pose",
                 path("broken.json")}),
            2);
}

TEST_F(CliTest, ConvertRoundTrips) {
  const SyntheticScene scene = random_scene(2);
  const EquirectFrame f = render_equirect(scene, PoseSE3::identity(), 128);
  write_pfm(path("pano.pfm"), f.rgb);
  ASSERT_EQ(run({"convert", "-i", path("pano.pfm"), "-d", "equi2cube", "-s", "64", "-o", path("cube")}), 0);
  for (Face face : kFaces) EXPECT_TRUE(fs::exists(cubemap_face_path(path("cube"), face, ".pfm")));
  ASSERT_EQ(run({"convert", "-i", path("cube"), "-d", "cube2equi", "-s", "128", "-o", path("back.pfm")}), 0);
  const Image back = read_pfm(path("back.pfm"));
  double sum = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < 128; ++r) {
    const double lat = ((r + 0.5) / 128 * 2 - 1) * 90.0;
    if (std::abs(lat) > 60.0) continue;
    for (int c = 0; c < 256; ++c) {
      for (int ch = 0; ch < 3; ++ch) sum += std::abs(back.at(r, c, ch) - f.rgb.at(r, c, ch));
      n += 3;
    }
  }
  EXPECT_LT(sum / n, 3e-2);

  write_png(path("flat.png"), Image(64, 32, 3, 0.4), 8);
  ASSERT_EQ(run({"convert", "-i", path("flat.png"), "-d", "equi2cube", "-s", "16", "-o", path("flat")}), 0);
  ASSERT_EQ(run({"convert", "-i", path("flat"), "-d", "cube2equi", "-s", "32", "-o", path("flat_back.png")}), 0);
  EXPECT_EQ(slurp(path("flat.png")), slurp(path("flat_back.png")));

  // Missing output directories are created.
  ASSERT_EQ(run({"convert", "-i", path("flat.png"), "-d", "equi2cube", "-s", "16", "-o", path("nested/a/cube")}), 0);
  EXPECT_TRUE(fs::exists(cubemap_face_path(path("nested/a/cube"), Face::Up, ".png")));
}

TEST_F(CliTest, LossesOnGroundTruthAndPerturbedPoses) {
  write_pair(kMotion);
  const std::vector<std::string> common = {"losses", "--ref", path("ref.pfm"), "--tgt", path("tgt.pfm"),
                                           "--depth", path("depth.pfm")};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = common;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  ASSERT_EQ(run(with({"--pose", path("gt.json"), "-o", path("gt_loss.json")})), 0);
  const json gt = read_json(path("gt_loss.json"));
  EXPECT_LT(gt["total"].get<double>(), 0.03);
  EXPECT_NEAR(gt["weights"]["pose"].get<double>(), 0.1, 1e-12);
  EXPECT_NEAR(gt["weights"]["sm"].get<double>(), 0.04, 1e-12);
  EXPECT_NEAR(gt["weights"]["exp"].get<double>(), 0.3, 1e-12);

  PoseSE3 off = kMotion;
  off.rotation = Rotation3::about_axis(Vec3(0, 1, 0), 5 * kDeg) * off.rotation;
  write_json(path("off.json"), json(off));
  const json bad = json::parse(run_stdout(with({"--pose", path("off.json")})));
  EXPECT_GT(bad["rec"].get<double>(), gt["rec"].get<double>());

  write_json(path("id.json"), json(PoseSE3::identity()));
  const json same =
      json::parse(run_stdout({"losses", "--ref", path("ref.pfm"), "--tgt", path("ref.pfm"), "--depth", path("depth.pfm"),
                              "--pose", path("id.json")}));
  EXPECT_NEAR(same["rec"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(same["pose"].get<double>(), 0.0);
}

TEST_F(CliTest, EstimatePoseAndMetrics) {
  PoseSE3 gt;
  gt.rotation = Rotation3::about_axis(Vec3(0, 1, 0), 2 * kDeg);
  write_pair(gt);
  ASSERT_EQ(run({"estimate-pose", "--ref", path("ref.pfm"), "--tgt", path("tgt.pfm"), "--depth", path("depth.pfm"), "-o",
                 path("est.json")}),
            0);
  const json est = read_json(path("est.json"));
  EXPECT_TRUE(est["final"]["converged"].get<bool>());
  EXPECT_FALSE(est["iterations"].empty());
  ASSERT_EQ(run({"metrics", "--pred-poses", path("est.json"), "--gt-poses", path("gt.json"), "--pred-depth",
                 path("depth.pfm"), "--gt-depth", path("depth.pfm"), "-o", path("m.json")}),
            0);
  const json m = read_json(path("m.json"));
  EXPECT_LT(m["pose"]["RPE-R"].get<double>(), 0.1);
  EXPECT_LT(m["pose"]["RPE-T"].get<double>(), 5e-3);
  EXPECT_EQ(m["depth"]["abs_rel"].get<double>(), 0.0);
  EXPECT_EQ(m["depth"]["delta<1.25"].get<double>(), 1.0);
  EXPECT_FALSE(m["depth"]["metadata"]["median_scaling"].get<bool>());

  write_json(path("solver.json"), json(SolverConfig{}));
  const json capped = json::parse(run_stdout({"estimate-pose", "--ref", path("ref.pfm"), "--tgt", path("tgt.pfm"),
                                              "--depth", path("depth.pfm"), "--solver", path("solver.json"),
                                              "--max-iterations", "1", "--levels", "1"}));
  EXPECT_EQ(capped["iterations"].size(), 1u);
}

TEST_F(CliTest, WarpWritesFaces) {
  write_pair(kMotion, 32);
  ASSERT_EQ(run({"warp", "--ref-depth", path("depth.pfm"), "--target", path("tgt.pfm"), "--pose", path("gt.json"), "-o",
                 path("w"), "--ext", ".pfm", "--equirect-output", path("w_pano.pfm"), "--ply", path("w.ply")}),
            0);
  for (Face f : kFaces) {
    EXPECT_TRUE(fs::exists(cubemap_face_path(path("w"), f, ".pfm")));
    EXPECT_TRUE(fs::exists(cubemap_face_path(path("w_mask"), f, ".png")));
  }
  EXPECT_EQ(read_pfm(path("w_pano.pfm")).height(), 32);
  EXPECT_EQ(slurp(path("w.ply")).rfind("ply\n", 0), 0u);
}

TEST_F(CliTest, BenchReport) {
  ASSERT_EQ(run({"bench", "--heights", "64,128", "--iters", "1", "-o", path("b.json")}), 0);
  const json b = read_json(path("b.json"));
  EXPECT_EQ(b["pixel_ratio"].get<double>(), 0.75);
  ASSERT_EQ(b["rows"].size(), 2u);
  for (const json& r : b["rows"]) {
    EXPECT_EQ(r["pixel_ratio"].get<double>(), 0.75);
    EXPECT_NEAR(r["speedup"].get<double>(), r["equi_ms"].get<double>() / r["cube_ms"].get<double>(), 1e-6);
  }
  EXPECT_TRUE(b.contains("speedup_nondecreasing"));
  EXPECT_TRUE(b.contains("speedup_above_one_at_top"));
}

TEST(Bench, MediansAreStable) {
  const cli::BenchReport one = cli::run_bench({128}, 1);
  const cli::BenchReport nine = cli::run_bench({128}, 9);
  const auto within = [](double a, double b) { return a <= 3 * b && b <= 3 * a; };
  EXPECT_TRUE(within(one.rows[0].equi_ms, nine.rows[0].equi_ms));
  EXPECT_TRUE(within(one.rows[0].cube_ms, nine.rows[0].cube_ms));
  EXPECT_THROW(cli::run_bench({128}, 0), std::invalid_argument);
  EXPECT_THROW(cli::run_bench({130, 32}, 1), std::invalid_argument);
}

TEST_F(CliTest, ConfigPrecedence) {
  {
    std::ofstream cfg(path("c.toml"));
    cfg << "[bench]\niters = 2\nheights = [64, 128]\n";
  }
  const std::string defaults = run_stdout({"bench", "--dump-config"});
  EXPECT_NE(defaults.find("iters=5"), std::string::npos);
  const std::string from_file = run_stdout({"--config", path("c.toml"), "bench", "--dump-config"});
  EXPECT_NE(from_file.find("iters=2"), std::string::npos);
  EXPECT_NE(from_file.find("heights=[64, 128]"), std::string::npos);
  const std::string flag = run_stdout({"--config", path("c.toml"), "bench", "--iters", "3", "--dump-config"});
  EXPECT_NE(flag.find("iters=3"), std::string::npos);

  // A dump is itself a valid config file.
  {
    std::ofstream out(path("dump.toml"));
    out << flag;
  }
  EXPECT_EQ(run_stdout({"--config", path("dump.toml"), "bench", "--dump-config"}), flag);
}
