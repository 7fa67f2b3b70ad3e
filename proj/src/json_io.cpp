#include "pano/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pano/errors.hpp"

namespace pano {

namespace {

json vec_json(const Vec3& v) { return json::array({round_sig9(v.x()), round_sig9(v.y()), round_sig9(v.z())}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw IoError(std::string("expected a 3-vector for '") + what + "'");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

double round_sig9(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

void to_json(json& j, const PoseSE3& p) {
  j = json{{"rotation_axis_angle", vec_json(p.rotation.log())}, {"translation", vec_json(p.translation)}};
}

void from_json(const json& j, PoseSE3& p) {
  p.rotation = Rotation3::exp(vec_from(j.at("rotation_axis_angle"), "rotation_axis_angle"));
  p.translation = vec_from(j.at("translation"), "translation");
}

void to_json(json& j, const Texture& t) {
  j = json{{"type", t.kind == TextureKind::Checker ? "checker" : "gradient"},
           {"period_m", round_sig9(t.period_m)},
           {"color_a", vec_json(t.color_a)},
           {"color_b", vec_json(t.color_b)}};
}

void from_json(const json& j, Texture& t) {
  const std::string type = j.value("type", std::string("checker"));
  if (type == "checker") {
    t.kind = TextureKind::Checker;
  } else if (type == "gradient") {
    t.kind = TextureKind::Gradient;
  } else {
    throw IoError("unknown texture type '" + type + "'");
  }
  t.period_m = j.value("period_m", 0.5);
  if (!(t.period_m > 0)) throw IoError("texture period_m must be positive");
  if (j.contains("color_a")) t.color_a = vec_from(j["color_a"], "color_a");
  if (j.contains("color_b")) t.color_b = vec_from(j["color_b"], "color_b");
}

void to_json(json& j, const SyntheticScene& s) {
  json textures = json::object();
  for (std::size_t i = 0; i < kWallIds.size(); ++i) textures[std::string(kWallIds[i])] = s.wall_textures[i];
  json obstacles = json::array();
  for (const Box& b : s.obstacles) {
    obstacles.push_back({{"center", vec_json(b.center)}, {"half_extents", vec_json(b.half_extents)}, {"texture", b.texture}});
  }
  j = json{{"room", {{"half_extents", vec_json(s.room_half_extents)}}}, {"obstacles", obstacles}, {"textures", textures}};
}

void from_json(const json& j, SyntheticScene& s) {
  s = SyntheticScene{};
  s.room_half_extents = vec_from(j.at("room").at("half_extents"), "room.half_extents");
  if (!(s.room_half_extents.minCoeff() > 0)) throw IoError("room half extents must be positive");
  if (j.contains("textures")) {
    const json& tex = j["textures"];
    if (tex.contains("default")) s.wall_textures.fill(tex["default"].get<Texture>());
    for (std::size_t i = 0; i < kWallIds.size(); ++i) {
      const std::string id(kWallIds[i]);
      if (tex.contains(id)) s.wall_textures[i] = tex[id].get<Texture>();
    }
  }
  if (j.contains("obstacles")) {
    for (const json& o : j["obstacles"]) {
      Box b;
      b.center = vec_from(o.at("center"), "obstacle.center");
      b.half_extents = vec_from(o.at("half_extents"), "obstacle.half_extents");
      if (o.contains("texture")) b.texture = o["texture"].get<Texture>();
      s.obstacles.push_back(b);
    }
  }
}

void to_json(json& j, const Trajectory& t) {
  j = json{{"fps", round_sig9(t.fps)}, {"poses", t.poses}};
}

void from_json(const json& j, Trajectory& t) {
  t.fps = j.value("fps", 10.0);
  t.poses = j.at("poses").get<std::vector<PoseSE3>>();
}

void to_json(json& j, const SolverConfig& c) {
  j = json{{"max_iterations", c.max_iterations}, {"initial_damping", c.initial_damping},
           {"damping_up", c.damping_up},         {"damping_down", c.damping_down},
           {"max_damping", c.max_damping},       {"step_tolerance", c.step_tolerance},
           {"huber_threshold", c.huber_threshold}, {"pyramid_levels", c.pyramid_levels},
           {"fd_step", c.fd_step}};
}

void from_json(const json& j, SolverConfig& c) {
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  c.initial_damping = j.value("initial_damping", c.initial_damping);
  c.damping_up = j.value("damping_up", c.damping_up);
  c.damping_down = j.value("damping_down", c.damping_down);
  c.max_damping = j.value("max_damping", c.max_damping);
  c.step_tolerance = j.value("step_tolerance", c.step_tolerance);
  c.huber_threshold = j.value("huber_threshold", c.huber_threshold);
  c.pyramid_levels = j.value("pyramid_levels", c.pyramid_levels);
  c.fd_step = j.value("fd_step", c.fd_step);
}

json loss_report(const LossParts& parts, const LossWeights& weights) {
  return json{{"rec", round_sig9(parts.rec)},
              {"pose", round_sig9(parts.pose)},
              {"sm", round_sig9(parts.smoothness)},
              {"exp", round_sig9(parts.explainability)},
              {"total", round_sig9(total_loss(parts, weights))},
              {"weights",
               {{"pose", round_sig9(weights.pose)},
                {"sm", round_sig9(weights.smoothness)},
                {"exp", round_sig9(weights.explainability)}}}};
}

json depth_metrics_report(const DepthMetrics& m) {
  return json{{"abs_rel", round_sig9(m.abs_rel)},
              {"sq_rel", round_sig9(m.sq_rel)},
              {"rmse", round_sig9(m.rmse)},
              {"rmse_log", round_sig9(m.rmse_log)},
              {"delta<1.25", round_sig9(m.delta1)},
              {"delta<1.25^2", round_sig9(m.delta2)},
              {"delta<1.25^3", round_sig9(m.delta3)},
              {"metadata", {{"pixels", m.count}, {"median_scaling", m.median_scaled}, {"scale", round_sig9(m.scale)}}}};
}

json rpe_report(const RpeMetrics& m) {
  return json{{"RPE-R", round_sig9(m.rpe_r)},
              {"RPE-T", round_sig9(m.rpe_t)},
              {"units", {{"RPE-R", "degrees"}, {"RPE-T", "scene units (metres for synthetic scenes)"}}}};
}

json pose_estimate_report(const PoseEstimate& e) {
  json iterations = json::array();
  for (const IterationRecord& r : e.history) {
    iterations.push_back({{"level", r.level},
                          {"loss", round_sig9(r.loss)},
                          {"damping", round_sig9(r.damping)},
                          {"step_norm", round_sig9(r.step_norm)},
                          {"accepted", r.accepted}});
  }
  return json{{"iterations", iterations},
              {"final",
               {{"pose", e.motion},
                {"converged", e.converged},
                {"iterations", e.iterations},
                {"loss", round_sig9(e.final_loss)}}}};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace pano
