#include "deixis/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace deixis {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

Quat quat_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4)
    throw ConfigError(where + ": quaternion_wxyz must be [w,x,y,z]");
  return Quat{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
              j[3].get<double>()};
}

Vec3 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(where + ": expected [x,y,z]");
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

RigidTransform transform_from(const json& j, const std::string& where,
                              std::string from, std::string to) {
  RigidTransform t;
  try {
    t.rotation = rotation_from_quaternion(
        quat_from(j.at("quaternion_wxyz"), where));
  } catch (const NonUnitQuaternion& e) {
    throw ConfigError(where + ": " + e.what());
  }
  t.translation = vec_from(j.at("translation_mm"), where);
  t.from_frame = std::move(from);
  t.to_frame = std::move(to);
  return t;
}

json transform_to(const RigidTransform& t) {
  // Rotation matrix -> quaternion (Shepperd's method).
  const auto& m = t.rotation.m;
  const double trace = m[0][0] + m[1][1] + m[2][2];
  Quat q;
  if (trace > 0.0) {
    const double s = std::sqrt(trace + 1.0) * 2.0;
    q = {0.25 * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s,
         (m[1][0] - m[0][1]) / s};
  } else if (m[0][0] > m[1][1] && m[0][0] > m[2][2]) {
    const double s = std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2.0;
    q = {(m[2][1] - m[1][2]) / s, 0.25 * s, (m[0][1] + m[1][0]) / s,
         (m[0][2] + m[2][0]) / s};
  } else if (m[1][1] > m[2][2]) {
    const double s = std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]) * 2.0;
    q = {(m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, 0.25 * s,
         (m[1][2] + m[2][1]) / s};
  } else {
    const double s = std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]) * 2.0;
    q = {(m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s,
         (m[1][2] + m[2][1]) / s, 0.25 * s};
  }
  return {{"quaternion_wxyz", {q.w, q.x, q.y, q.z}},
          {"translation_mm", {t.translation.x, t.translation.y, t.translation.z}}};
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).template get<T>();
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.board = make_default_board(1910.0, 1290.0, 1000.0);
  // Sensor centered 1300 mm above the board's top edge, axes flipped
  // half a turn about the vertical.
  cfg.sensor_to_world.rotation = rotation_from_quaternion(Quat{0, 0, 0, 1});
  cfg.sensor_to_world.translation =
      Vec3{0.0, cfg.board.bottom_edge_above_ground_mm + cfg.board.height_mm +
                    1300.0, 0.0};
  cfg.sensor_to_world.from_frame = "sensor";
  cfg.sensor_to_world.to_frame = "world";
  return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(source + ": config must be an object");
  if (j.contains("schema") && j["schema"].get<int>() != kSchemaVersion)
    throw ConfigError(source + ": unsupported schema version");

  RunConfig cfg = default_config();
  try {
    if (j.contains("board")) {
      const json& b = j["board"];
      double w = cfg.board.width_mm, h = cfg.board.height_mm,
             bottom = cfg.board.bottom_edge_above_ground_mm;
      maybe(b, "width_mm", w);
      maybe(b, "height_mm", h);
      maybe(b, "bottom_edge_above_ground_mm", bottom);
      cfg.board = make_default_board(w, h, bottom);
    }
    if (j.contains("frames")) {
      const json& f = j["frames"];
      if (f.contains("sensor_to_world"))
        cfg.sensor_to_world = transform_from(f["sensor_to_world"],
                                             source + ": sensor_to_world",
                                             "sensor", "world");
      if (f.contains("board_pose"))
        cfg.board.pose = transform_from(f["board_pose"],
                                        source + ": board_pose", "board",
                                        "world");
    }
    if (j.contains("grid")) {
      maybe(j["grid"], "rows", cfg.grid_rows);
      maybe(j["grid"], "cols", cfg.grid_cols);
      if (cfg.grid_rows < 1 || cfg.grid_cols < 1)
        throw ConfigError(source + ": grid rows/cols must be >= 1");
    }
    if (j.contains("engine")) {
      const json& e = j["engine"];
      if (e.contains("arm"))
        cfg.engine.arm = arm_mode_from_string(e["arm"].get<std::string>());
      maybe(e, "confidence_min", cfg.engine.confidence_min);
      maybe(e, "window_s", cfg.engine.window_s);
      maybe(e, "stable_drdt_max_mm_s", cfg.engine.stable_drdt_max);
      maybe(e, "stable_radius_max_mm", cfg.engine.stable_radius_max_mm);
      maybe(e, "stable_dwell_s", cfg.engine.stable_dwell_s);
      maybe(e, "expected_settle_s", cfg.engine.expected_settle_s);
      maybe(e, "hold_timeout_s", cfg.engine.hold_timeout_s);
      maybe(e, "min_forearm_mm", cfg.engine.min_forearm_mm);
      maybe(e, "joint_gap_reset_s", cfg.engine.joint_gap_reset_s);
      if (cfg.engine.confidence_min < 0.0 || cfg.engine.confidence_min > 1.0)
        throw ConfigError(source + ": confidence_min outside [0,1]");
      for (double v : {cfg.engine.window_s, cfg.engine.stable_drdt_max,
                       cfg.engine.stable_radius_max_mm,
                       cfg.engine.stable_dwell_s, cfg.engine.hold_timeout_s,
                       cfg.engine.min_forearm_mm})
        if (v <= 0.0)
          throw ConfigError(source + ": engine durations/limits must be > 0");
    }
    if (j.contains("noise")) {
      const json& n = j["noise"];
      maybe(n, "jitter_sigma_mm", cfg.noise.jitter_sigma_mm);
      maybe(n, "settle_time_s", cfg.noise.settle_time_s);
      maybe(n, "left_arm_length_bias_mm", cfg.noise.left_arm_length_bias_mm);
      maybe(n, "right_arm_angular_bias_rad",
            cfg.noise.right_arm_angular_bias_rad);
      maybe(n, "motor_noise", cfg.noise.motor_noise);
      maybe(n, "white_fraction", cfg.noise.white_fraction);
      maybe(n, "arrival_margin_s", cfg.noise.arrival_margin_s);
      maybe(n, "seed", cfg.noise.seed);
      cfg.noise.validate();
    }
    if (j.contains("participant")) {
      const json& p = j["participant"];
      maybe(p, "height_mm", cfg.participant.height_mm);
      maybe(p, "arm_length_mm", cfg.participant.arm_length_mm);
      maybe(p, "shoulder_height_mm", cfg.participant.shoulder_height_mm);
      maybe(p, "shoulder_height_factor", cfg.participant.shoulder_height_factor);
      maybe(p, "shoulder_width_factor", cfg.participant.shoulder_width_factor);
      maybe(p, "upper_arm_fraction", cfg.participant.upper_arm_fraction);
      maybe(p, "stand_distance_mm", cfg.participant.stand_distance_mm);
      if (p.contains("handedness"))
        cfg.participant.handedness =
            arm_from_string(p["handedness"].get<std::string>());
      cfg.participant.validate();
    }
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }

  if (cfg.sensor_to_world.from_frame != "sensor" ||
      cfg.sensor_to_world.to_frame != "world" ||
      cfg.board.pose.from_frame != "board" ||
      cfg.board.pose.to_frame != "world")
    throw ConfigError(source + ": frames must chain sensor->world->board");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  json j = {
      {"schema", kSchemaVersion},
      {"frames",
       {{"sensor_to_world", transform_to(cfg.sensor_to_world)},
        {"board_pose", transform_to(cfg.board.pose)}}},
      {"board",
       {{"width_mm", cfg.board.width_mm},
        {"height_mm", cfg.board.height_mm},
        {"bottom_edge_above_ground_mm",
         cfg.board.bottom_edge_above_ground_mm}}},
      {"grid", {{"rows", cfg.grid_rows}, {"cols", cfg.grid_cols}}},
      {"engine",
       {{"arm", to_string(cfg.engine.arm)},
        {"confidence_min", cfg.engine.confidence_min},
        {"window_s", cfg.engine.window_s},
        {"stable_drdt_max_mm_s", cfg.engine.stable_drdt_max},
        {"stable_radius_max_mm", cfg.engine.stable_radius_max_mm},
        {"stable_dwell_s", cfg.engine.stable_dwell_s},
        {"expected_settle_s", cfg.engine.expected_settle_s},
        {"hold_timeout_s", cfg.engine.hold_timeout_s},
        {"min_forearm_mm", cfg.engine.min_forearm_mm},
        {"joint_gap_reset_s", cfg.engine.joint_gap_reset_s}}},
      {"noise",
       {{"jitter_sigma_mm", cfg.noise.jitter_sigma_mm},
        {"settle_time_s", cfg.noise.settle_time_s},
        {"left_arm_length_bias_mm", cfg.noise.left_arm_length_bias_mm},
        {"right_arm_angular_bias_rad", cfg.noise.right_arm_angular_bias_rad},
        {"motor_noise", cfg.noise.motor_noise},
        {"white_fraction", cfg.noise.white_fraction},
        {"arrival_margin_s", cfg.noise.arrival_margin_s},
        {"seed", cfg.noise.seed}}},
      {"participant",
       {{"height_mm", cfg.participant.height_mm},
        {"arm_length_mm", cfg.participant.arm_length_mm},
        {"shoulder_height_mm", cfg.participant.shoulder_height_mm},
        {"shoulder_height_factor", cfg.participant.shoulder_height_factor},
        {"shoulder_width_factor", cfg.participant.shoulder_width_factor},
        {"upper_arm_fraction", cfg.participant.upper_arm_fraction},
        {"handedness", to_string(cfg.participant.handedness)},
        {"stand_distance_mm", cfg.participant.stand_distance_mm}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace deixis
