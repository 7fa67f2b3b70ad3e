#include "bench.hpp"

#include <algorithm>
#include <chrono>

#include "pano/errors.hpp"
#include "pano/json_io.hpp"
#include "pano/losses.hpp"
#include "pano/projection.hpp"
#include "pano/synthetic_world.hpp"
#include "pano/warping.hpp"

namespace pano::cli {

namespace {

template <typename Fn>
double median_ms(int iters, Fn&& fn) {
  std::vector<double> times;
  for (int i = 0; i < iters; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  return times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}

// Keeps the optimiser from discarding a timed computation.
volatile double g_sink = 0.0;

}  // namespace

BenchReport run_bench(const std::vector<int>& heights, int iters) {
  if (iters < 1) throw PreconditionError("bench needs at least one iteration");
  if (heights.empty()) throw PreconditionError("bench needs at least one height");
  for (int h : heights) {
    if (h < 64 || h % 2 != 0) throw PreconditionError("bench heights must be even and at least 64");
  }

  const SyntheticScene scene = random_scene(2024);
  const PoseSE3 pose_ref;
  const PoseSE3 motion = PoseSE3::from_vector((Vec6() << 0.01, 0.03, 0.0, 0.05, 0.0, 0.08).finished());
  const PoseSE3 pose_tgt = pose_ref * motion;

  BenchReport report;
  report.iters = iters;
  for (int h : heights) {
    const int fw = h / 2;
    const EquirectFrame ref = render_equirect(scene, pose_ref, h);
    const EquirectFrame tgt = render_equirect(scene, pose_tgt, h);

    // Fixed per-geometry tables and the cubemap depth a network would emit
    // are prepared once, outside the timed region.
    const ToCubemapRemap to_cube(h, fw);
    const ToEquirectRemap to_equi(fw, h);
    const CubemapDepth cube_depth = to_cube.apply(ref.depth, Resample::Depth);
    const MaskMap ones(fw, 1, 1.0);

    BenchRow row;
    row.height = h;
    row.pixel_ratio = static_cast<double>(kNumFaces) * fw * fw / (2.0 * h * h);
    row.equi_ms = median_ms(iters, [&] {
      const EquirectWarpResult w = warp_equirect(ref.depth, tgt.rgb, motion);
      g_sink = g_sink + photometric_loss(ref.rgb, w.warped, w.valid);
    });
    row.cube_ms = median_ms(iters, [&] {
      const Cubemap cube_ref = to_cube.apply(ref.rgb);
      const Cubemap cube_tgt = to_cube.apply(tgt.rgb);
      const WarpResult w = warp_with_motion(cube_depth, cube_tgt, motion);
      g_sink = g_sink + photometric_loss(cube_ref, w.warped, w.valid, ones);
      const EquirectImage depth_back = to_equi.apply(cube_depth, Resample::Depth);
      g_sink = g_sink + depth_back.at(0, 0);
    });
    row.fps_equi = 1000.0 / row.equi_ms;
    row.fps_cube = 1000.0 / row.cube_ms;
    row.speedup = row.equi_ms / row.cube_ms;
    report.rows.push_back(row);
  }

  report.speedup_nondecreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].speedup < report.rows[i - 1].speedup) report.speedup_nondecreasing = false;
  }
  report.speedup_above_one_at_top = report.rows.back().speedup > 1.0;
  return report;
}

nlohmann::json bench_report_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({{"height", r.height},
                    {"equi_ms", round_sig9(r.equi_ms)},
                    {"cube_ms", round_sig9(r.cube_ms)},
                    {"fps_equi", round_sig9(r.fps_equi)},
                    {"fps_cube", round_sig9(r.fps_cube)},
                    {"speedup", round_sig9(r.speedup)},
                    {"pixel_ratio", round_sig9(r.pixel_ratio)}});
  }
  const double ratio = report.rows.empty() ? 0.0 : report.rows.front().pixel_ratio;
  return {{"iters", report.iters},
          {"pixel_ratio", round_sig9(ratio)},
          {"rows", rows},
          {"speedup_nondecreasing", report.speedup_nondecreasing},
          {"speedup_above_one_at_top", report.speedup_above_one_at_top}};
}

}  // namespace pano::cli
