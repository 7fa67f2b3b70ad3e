#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "bench.hpp"
#include "pano/errors.hpp"
#include "pano/io.hpp"
#include "pano/json_io.hpp"
#include "pano/losses.hpp"
#include "pano/metrics.hpp"
#include "pano/pose_estimator.hpp"
#include "pano/projection.hpp"
#include "pano/synthetic_world.hpp"
#include "pano/warping.hpp"

namespace fs = std::filesystem;

namespace pano::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// ---------------------------------------------------------------------------
// Input helpers

// A path naming an existing file is read as a panorama and projected onto a
// cubemap; otherwise it is taken as the prefix of six face files.
Cubemap load_cube(const std::string& path, int& face_width, Resample mode) {
  if (fs::is_regular_file(path)) {
    const EquirectImage pano(read_image(path));
    if (face_width == 0) face_width = pano.height() / 2;
    return equirect_to_cubemap(pano, face_width, mode);
  }
  for (const char* ext : {".png", ".pfm"}) {
    if (!fs::is_regular_file(cubemap_face_path(path, Face::Back, ext))) continue;
    Cubemap cube = read_cubemap(path, ext);
    if (face_width == 0) face_width = cube.face_width();
    if (cube.face_width() != face_width) {
      throw std::invalid_argument("cubemap '" + path + "' has face width " + std::to_string(cube.face_width()) +
                                  ", expected " + std::to_string(face_width));
    }
    return cube;
  }
  throw IoError("cannot open '" + path + "' as an image or a cubemap prefix");
}

Cubemap load_single_channel(const std::string& path, int& face_width, Resample mode, const char* what) {
  Cubemap cube = load_cube(path, face_width, mode);
  if (cube.channels() != 1) throw std::invalid_argument(std::string(what) + " must have a single channel");
  return cube;
}

PoseSE3 read_pose(const std::string& path) {
  const json j = read_json(path);
  if (j.contains("final")) return j["final"].at("pose").get<PoseSE3>();
  return j.get<PoseSE3>();
}

// Relative motions from a list of poses, a rendered poses file ("relative"),
// an absolute trajectory ("poses") or a pose estimate report ("final").
std::vector<PoseSE3> read_motions(const std::string& path) {
  const json j = read_json(path);
  if (j.is_array()) return j.get<std::vector<PoseSE3>>();
  if (j.contains("rotation_axis_angle")) return {j.get<PoseSE3>()};
  if (j.contains("relative")) return j["relative"].get<std::vector<PoseSE3>>();
  if (j.contains("final")) return {j["final"].at("pose").get<PoseSE3>()};
  if (j.contains("poses")) {
    const auto poses = j["poses"].get<std::vector<PoseSE3>>();
    std::vector<PoseSE3> out;
    for (std::size_t i = 0; i + 1 < poses.size(); ++i) out.push_back(poses[i].inverse() * poses[i + 1]);
    return out;
  }
  throw IoError("'" + path + "' holds no poses");
}

// Creates the directory an output file or cubemap prefix will land in.
const std::string& output_path(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  return path;
}

void emit(const json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json(output_path(output), j);
  }
}

std::string extension_of(const std::string& path) { return fs::path(path).extension().string(); }

// ---------------------------------------------------------------------------
// Subcommands

struct ConvertArgs {
  std::string input;
  std::string direction;
  int size = 0;
  std::string output;
  bool depth = false;
  std::string ext;
  int bit_depth = 8;
};

void cmd_convert(const ConvertArgs& a) {
  const Resample mode = a.depth ? Resample::Depth : Resample::Color;
  if (a.direction == "equi2cube") {
    const EquirectImage pano(read_image(a.input));
    const std::string ext = a.ext.empty() ? extension_of(a.input) : a.ext;
    write_cubemap(output_path(a.output), ext, equirect_to_cubemap(pano, a.size, mode), a.bit_depth);
  } else {
    int fw = 0;
    const Cubemap cube = load_cube(a.input, fw, mode);
    write_image(output_path(a.output), cubemap_to_equirect(cube, a.size, mode), a.bit_depth);
  }
}

struct RenderArgs {
  std::string scene;
  std::string trajectory;
  std::uint64_t seed = 0;
  int obstacles = 0;
  int frames = 2;
  double max_rotation_deg = 3.0;
  double max_translation = 0.05;
  int height = 128;
  std::string outdir;
  int bit_depth = 8;
  std::string save_scene;
};

void cmd_render(const RenderArgs& a) {
  const SyntheticScene scene =
      a.scene.empty() ? random_scene(a.seed, SceneOptions{a.obstacles}) : read_json(a.scene).get<SyntheticScene>();
  const Trajectory traj =
      a.trajectory.empty()
          ? random_trajectory(scene, a.seed, a.frames, a.max_rotation_deg * kDeg, a.max_translation)
          : read_json(a.trajectory).get<Trajectory>();
  if (traj.poses.empty()) throw std::invalid_argument("trajectory has no poses");
  const RenderedSequence seq = render_sequence(scene, traj, a.height);

  fs::create_directories(a.outdir);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu", i);
    write_png(fs::path(a.outdir) / ("frame_" + std::string(name) + ".png"), seq.frames[i].rgb, a.bit_depth);
    write_pfm(fs::path(a.outdir) / ("depth_" + std::string(name) + ".pfm"), seq.frames[i].depth);
  }
  write_json(fs::path(a.outdir) / "poses.json", json{{"fps", round_sig9(traj.fps)},
                                                     {"poses", traj.poses},
                                                     {"relative", seq.relative}});
  if (!a.save_scene.empty()) write_json(output_path(a.save_scene), scene);
}

struct WarpArgs {
  std::string ref_depth;
  std::string target;
  std::string pose;
  int face_width = 0;
  std::string output;
  std::string ext = ".png";
  std::string equirect_output;
  std::string ply;
  int bit_depth = 8;
};

void cmd_warp(const WarpArgs& a) {
  int fw = a.face_width;
  const CubemapDepth depth = load_single_channel(a.ref_depth, fw, Resample::Depth, "reference depth");
  const Cubemap target = load_cube(a.target, fw, Resample::Color);
  const PoseSE3 motion = read_pose(a.pose);
  const WarpResult res = warp_with_motion(depth, target, motion);

  Cubemap mask(fw, 1);
  for (Face f : kFaces) {
    for (int v = 0; v < fw; ++v) {
      for (int u = 0; u < fw; ++u) mask.face(f).at(v, u) = res.valid.get(f, u, v) ? 1.0 : 0.0;
    }
  }
  write_cubemap(output_path(a.output), a.ext, res.warped, a.bit_depth);
  write_cubemap(a.output + "_mask", ".png", mask);
  if (!a.equirect_output.empty()) write_image(output_path(a.equirect_output), cubemap_to_equirect(res.warped, 2 * fw), a.bit_depth);
  if (!a.ply.empty()) write_ply(output_path(a.ply), depth_to_pointcloud(depth), &res.warped);
}

struct LossArgs {
  std::string ref;
  std::string tgt;
  std::string depth;
  std::string pose;
  int face_width = 0;
  std::string valid_mask;
  std::string explainability;
  std::string face_poses;
  double lambda_pose = LossWeights{}.pose;
  double lambda_sm = LossWeights{}.smoothness;
  double lambda_exp = LossWeights{}.explainability;
  std::string output;
};

void cmd_losses(const LossArgs& a) {
  const LossWeights weights{a.lambda_pose, a.lambda_sm, a.lambda_exp};
  weights.validate();
  int fw = a.face_width;
  const Cubemap ref = load_cube(a.ref, fw, Resample::Color);
  const Cubemap tgt = load_cube(a.tgt, fw, Resample::Color);
  const CubemapDepth depth = load_single_channel(a.depth, fw, Resample::Depth, "depth");
  if (!ref.same_shape(tgt)) throw std::invalid_argument("reference and target differ in shape");
  const PoseSE3 motion = read_pose(a.pose);

  WarpResult warp = warp_with_motion(depth, tgt, motion);
  CubeMask valid = warp.valid;
  if (!a.valid_mask.empty()) {
    const Cubemap m = load_single_channel(a.valid_mask, fw, Resample::Color, "validity mask");
    for (Face f : kFaces) {
      for (int v = 0; v < fw; ++v) {
        for (int u = 0; u < fw; ++u) {
          if (m.face(f).at(v, u) < 0.5) valid.set(f, u, v, false);
        }
      }
    }
  }
  const MaskMap x = a.explainability.empty()
                        ? MaskMap(fw, 1, 1.0)
                        : load_single_channel(a.explainability, fw, Resample::Color, "explainability mask");

  std::array<PoseSE3, kNumFaces> per_face;
  if (a.face_poses.empty()) {
    for (Face f : kFaces) per_face[face_index(f)] = transform_pose_from_front(motion, f);
  } else {
    const auto poses = read_json(a.face_poses).get<std::vector<PoseSE3>>();
    if (poses.size() != kNumFaces) throw std::invalid_argument("face poses file must hold six poses (B, D, F, L, R, U)");
    std::copy(poses.begin(), poses.end(), per_face.begin());
  }

  LossParts parts;
  parts.rec = photometric_loss(ref, warp.warped, valid, x);
  parts.pose = pose_consistency_loss(per_face);
  parts.smoothness = smoothness_loss(depth);
  parts.explainability = explainability_loss(x);
  json report = loss_report(parts, weights);
  report["valid_pixels"] = valid.count();
  emit(report, a.output);
}

struct EstimateArgs {
  std::string ref;
  std::string tgt;
  std::string depth;
  std::string init;
  std::string solver;
  int face_width = 0;
  SolverConfig cfg;
  std::string output;
};

void cmd_estimate(const EstimateArgs& a, const std::function<void(SolverConfig&)>& apply_flags) {
  SolverConfig cfg;
  if (!a.solver.empty()) cfg = read_json(a.solver).get<SolverConfig>();
  apply_flags(cfg);
  cfg.validate();
  int fw = a.face_width;
  const Cubemap ref = load_cube(a.ref, fw, Resample::Color);
  const Cubemap tgt = load_cube(a.tgt, fw, Resample::Color);
  const CubemapDepth depth = load_single_channel(a.depth, fw, Resample::Depth, "depth");
  const PoseSE3 init = a.init.empty() ? PoseSE3::identity() : read_pose(a.init);
  emit(pose_estimate_report(estimate_pose(ref, tgt, depth, init, cfg)), a.output);
}

struct MetricsArgs {
  std::string pred_depth;
  std::string gt_depth;
  bool median_scaling = false;
  std::string pred_poses;
  std::string gt_poses;
  std::string output;
};

void cmd_metrics(const MetricsArgs& a) {
  json report = json::object();
  if (!a.pred_depth.empty() || !a.gt_depth.empty()) {
    if (a.pred_depth.empty() || a.gt_depth.empty()) throw std::invalid_argument("depth metrics need --pred-depth and --gt-depth");
    const DepthMetricOptions opts{a.median_scaling};
    const bool pano_pred = fs::is_regular_file(a.pred_depth);
    const bool pano_gt = fs::is_regular_file(a.gt_depth);
    if (pano_pred != pano_gt) throw std::invalid_argument("prediction and ground truth must both be panoramas or both cubemaps");
    if (pano_pred) {
      report["depth"] = depth_metrics_report(
          depth_metrics(EquirectImage(read_image(a.pred_depth)), EquirectImage(read_image(a.gt_depth)), opts));
    } else {
      int fw = 0;
      const CubemapDepth pred = load_single_channel(a.pred_depth, fw, Resample::Depth, "predicted depth");
      const CubemapDepth gt = load_single_channel(a.gt_depth, fw, Resample::Depth, "ground-truth depth");
      report["depth"] = depth_metrics_report(depth_metrics(pred, gt, nullptr, opts));
    }
  }
  if (!a.pred_poses.empty() || !a.gt_poses.empty()) {
    if (a.pred_poses.empty() || a.gt_poses.empty()) throw std::invalid_argument("pose metrics need --pred-poses and --gt-poses");
    const auto pred = read_motions(a.pred_poses);
    const auto gt = read_motions(a.gt_poses);
    report["pose"] = rpe_report(rpe(pred, gt));
  }
  if (report.empty()) throw std::invalid_argument("nothing to evaluate: pass depth and/or pose inputs");
  emit(report, a.output);
}

struct BenchArgs {
  std::vector<int> heights = {128, 256, 512, 1024};
  int iters = 5;
  std::string output;
};

void cmd_bench(const BenchArgs& a) {
  const BenchReport report = run_bench(a.heights, a.iters);
  for (const BenchRow& r : report.rows) {
    std::fprintf(stderr, "h=%5d  equi %9.2f ms  cube %9.2f ms  speedup %.3f\n", r.height, r.equi_ms, r.cube_ms,
                 r.speedup);
  }
  emit(bench_report_json(report), a.output);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Spherical geometry toolkit for 360-degree panoramas and cubemaps"};
  app.name("pano");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "TOML/INI file of option values (flags take precedence)");
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "Print the effective configuration and exit");
  std::function<void()> action;

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Convert between equirectangular panoramas and cubemaps");
  convert->add_option("-i,--input", conv.input, "Panorama file, or cubemap prefix for cube2equi")->required();
  convert->add_option("-d,--direction", conv.direction, "equi2cube or cube2equi")
      ->required()
      ->check(CLI::IsMember({"equi2cube", "cube2equi"}));
  convert->add_option("-s,--size", conv.size, "Face width (equi2cube) or panorama height (cube2equi)")
      ->required()
      ->check(CLI::PositiveNumber);
  convert->add_option("-o,--output", conv.output, "Cubemap prefix (equi2cube) or panorama file (cube2equi)")->required();
  convert->add_flag("--depth", conv.depth, "Resample as depth: zero marks invalid texels");
  convert->add_option("--ext", conv.ext, "Face file extension for equi2cube output (default: input's)");
  convert->add_option("--bit-depth", conv.bit_depth, "PNG bit depth")->check(CLI::IsMember({8, 16}));
  convert->callback([&] { action = [&] { cmd_convert(conv); }; });

  RenderArgs rend;
  auto* render = app.add_subcommand("render", "Ray-cast panoramas of a synthetic box room");
  render->add_option("--scene", rend.scene, "Scene JSON (default: random scene from --seed)");
  render->add_option("--trajectory", rend.trajectory, "Trajectory JSON (default: random walk from --seed)");
  render->add_option("--seed", rend.seed, "Seed of the scene and trajectory generators");
  render->add_option("--obstacles", rend.obstacles, "Interior boxes in a generated scene")->check(CLI::NonNegativeNumber);
  render->add_option("--frames", rend.frames, "Frames of a generated trajectory")->check(CLI::PositiveNumber);
  render->add_option("--max-rotation-deg", rend.max_rotation_deg, "Largest per-frame rotation of a generated trajectory");
  render->add_option("--max-translation", rend.max_translation, "Largest per-frame translation of a generated trajectory");
  render->add_option("--height", rend.height, "Panorama height (width is twice this)")->check(CLI::PositiveNumber);
  render->add_option("-o,--outdir", rend.outdir, "Output directory")->required();
  render->add_option("--bit-depth", rend.bit_depth, "PNG bit depth")->check(CLI::IsMember({8, 16}));
  render->add_option("--save-scene", rend.save_scene, "Also write the scene JSON here");
  render->callback([&] { action = [&] { cmd_render(rend); }; });

  WarpArgs wa;
  auto* warp = app.add_subcommand("warp", "Warp a target frame into the reference view");
  warp->add_option("--ref-depth", wa.ref_depth, "Reference depth (panorama file or cubemap prefix)")->required();
  warp->add_option("--target", wa.target, "Target image (panorama file or cubemap prefix)")->required();
  warp->add_option("--pose", wa.pose, "Target camera pose in the reference frame (JSON)")->required();
  warp->add_option("--face-width", wa.face_width, "Cubemap face width (default: panorama height / 2)");
  warp->add_option("-o,--output", wa.output, "Prefix of the warped cubemap; the mask goes to <prefix>_mask")->required();
  warp->add_option("--ext", wa.ext, "Extension of the warped face files");
  warp->add_option("--equirect-output", wa.equirect_output, "Also write the warped view as a panorama");
  warp->add_option("--ply", wa.ply, "Also write the reference point cloud as ASCII PLY");
  warp->add_option("--bit-depth", wa.bit_depth, "PNG bit depth")->check(CLI::IsMember({8, 16}));
  warp->callback([&] { action = [&] { cmd_warp(wa); }; });

  LossArgs la;
  auto* losses = app.add_subcommand("losses", "Evaluate the training objectives for a frame pair");
  losses->add_option("--ref", la.ref, "Reference image")->required();
  losses->add_option("--tgt", la.tgt, "Target image")->required();
  losses->add_option("--depth", la.depth, "Reference depth")->required();
  losses->add_option("--pose", la.pose, "Target camera pose in the reference frame (JSON)")->required();
  losses->add_option("--face-width", la.face_width, "Cubemap face width (default: panorama height / 2)");
  losses->add_option("--valid-mask", la.valid_mask, "Extra validity mask; texels below 0.5 are excluded");
  losses->add_option("--explainability", la.explainability, "Per-pixel weights in (0, 1] (default: all ones)");
  losses->add_option("--face-poses", la.face_poses, "Six per-face motions, B D F L R U (default: replicated --pose)");
  losses->add_option("--lambda-pose", la.lambda_pose, "Pose consistency weight");
  losses->add_option("--lambda-sm", la.lambda_sm, "Smoothness weight");
  losses->add_option("--lambda-exp", la.lambda_exp, "Explainability weight");
  losses->add_option("-o,--output", la.output, "Report path (default: stdout)");
  losses->callback([&] { action = [&] { cmd_losses(la); }; });

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate-pose", "Direct photometric relative pose estimation");
  estimate->add_option("--ref", ea.ref, "Reference image")->required();
  estimate->add_option("--tgt", ea.tgt, "Target image")->required();
  estimate->add_option("--depth", ea.depth, "Reference depth")->required();
  estimate->add_option("--init", ea.init, "Initial pose (JSON, default identity)");
  estimate->add_option("--solver", ea.solver, "Solver configuration JSON (flags take precedence)");
  estimate->add_option("--face-width", ea.face_width, "Cubemap face width (default: panorama height / 2)");
  auto* o_iters = estimate->add_option("--max-iterations", ea.cfg.max_iterations, "Iterations per pyramid level");
  auto* o_levels = estimate->add_option("--levels", ea.cfg.pyramid_levels, "Pyramid levels");
  auto* o_huber = estimate->add_option("--huber", ea.cfg.huber_threshold, "Huber threshold (intensity units)");
  auto* o_damp = estimate->add_option("--initial-damping", ea.cfg.initial_damping, "Initial damping");
  auto* o_tol = estimate->add_option("--step-tolerance", ea.cfg.step_tolerance, "Convergence tolerance on the step norm");
  auto* o_fd = estimate->add_option("--fd-step", ea.cfg.fd_step, "Central-difference step");
  estimate->add_option("-o,--output", ea.output, "Report path (default: stdout)");
  const auto apply_flags = [&](SolverConfig& cfg) {
    if (o_iters->count()) cfg.max_iterations = ea.cfg.max_iterations;
    if (o_levels->count()) cfg.pyramid_levels = ea.cfg.pyramid_levels;
    if (o_huber->count()) cfg.huber_threshold = ea.cfg.huber_threshold;
    if (o_damp->count()) cfg.initial_damping = ea.cfg.initial_damping;
    if (o_tol->count()) cfg.step_tolerance = ea.cfg.step_tolerance;
    if (o_fd->count()) cfg.fd_step = ea.cfg.fd_step;
  };
  estimate->callback([&] { action = [&] { cmd_estimate(ea, apply_flags); }; });

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("metrics", "Depth error statistics and relative pose error");
  metrics->add_option("--pred-depth", ma.pred_depth, "Predicted depth (panorama file or cubemap prefix)");
  metrics->add_option("--gt-depth", ma.gt_depth, "Ground-truth depth, same representation");
  metrics->add_flag("--median-scaling", ma.median_scaling, "Rescale predictions by the ratio of medians");
  metrics->add_option("--pred-poses", ma.pred_poses, "Predicted relative motions (JSON)");
  metrics->add_option("--gt-poses", ma.gt_poses, "Ground-truth relative motions (JSON)");
  metrics->add_option("-o,--output", ma.output, "Report path (default: stdout)");
  metrics->callback([&] { action = [&] { cmd_metrics(ma); }; });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Panorama versus cubemap warp throughput");
  bench->add_option("--heights", ba.heights, "Panorama heights")->delimiter(',');
  bench->add_option("--iters", ba.iters, "Timed repetitions per height")->check(CLI::PositiveNumber);
  bench->add_option("-o,--output", ba.output, "Report path (default: stdout)");
  bench->callback([&] { action = [&] { cmd_bench(ba); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (dump_config) {
    const CLI::App* sub = app.get_subcommands().front();
    std::cout << "[" << sub->get_name() << "]\n" << sub->config_to_str(true, false);
    return 0;
  }

  try {
    action();
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"pano"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace pano::cli
