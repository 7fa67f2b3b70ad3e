#pragma once

// JSON encodings of poses, scenes, trajectories and reports. Reals are
// rounded to 9 significant digits on output.

#include <filesystem>

#include <json.hpp>

#include "pano/losses.hpp"
#include "pano/metrics.hpp"
#include "pano/pose_estimator.hpp"
#include "pano/synthetic_world.hpp"

namespace pano {

using json = nlohmann::json;

double round_sig9(double x);

void to_json(json& j, const PoseSE3& p);
void from_json(const json& j, PoseSE3& p);

void to_json(json& j, const Texture& t);
void from_json(const json& j, Texture& t);

/// {room: {half_extents}, obstacles: [{center, half_extents, texture}],
///  textures: {wall_id | "default": texture}}
void to_json(json& j, const SyntheticScene& s);
void from_json(const json& j, SyntheticScene& s);

/// {fps, poses: [{rotation_axis_angle, translation}]}
void to_json(json& j, const Trajectory& t);
void from_json(const json& j, Trajectory& t);

void to_json(json& j, const SolverConfig& c);
void from_json(const json& j, SolverConfig& c);

json loss_report(const LossParts& parts, const LossWeights& weights);
json depth_metrics_report(const DepthMetrics& m);
json rpe_report(const RpeMetrics& m);
json pose_estimate_report(const PoseEstimate& e);

/// Throws IoError on missing files or JSON syntax errors.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace pano
