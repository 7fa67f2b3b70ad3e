#pragma once

// Throughput comparison of the photometric warp evaluated directly on
// panoramas versus the cubemap pipeline including both conversions.

#include <vector>

#include <json.hpp>

namespace pano::cli {

struct BenchRow {
  int height = 0;
  double equi_ms = 0.0;
  double cube_ms = 0.0;
  double fps_equi = 0.0;
  double fps_cube = 0.0;
  double speedup = 0.0;      // equi_ms / cube_ms
  double pixel_ratio = 0.0;  // cubemap texels / panorama pixels
};

struct BenchReport {
  int iters = 0;
  std::vector<BenchRow> rows;
  bool speedup_nondecreasing = false;
  bool speedup_above_one_at_top = false;
};

/// Heights must be even and >= 64; iters >= 1. Timings are medians.
BenchReport run_bench(const std::vector<int>& heights, int iters);

nlohmann::json bench_report_json(const BenchReport& report);

}  // namespace pano::cli
