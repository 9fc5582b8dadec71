#include "deixis/engine.hpp"

#include <cmath>

#include "deixis/enclosing_circle.hpp"

namespace deixis {

const char* to_string(ArmMode m) {
  switch (m) {
    case ArmMode::Left: return "left";
    case ArmMode::Right: return "right";
    case ArmMode::Auto: return "auto";
  }
  return "?";
}

ArmMode arm_mode_from_string(const std::string& s) {
  if (s == "left") return ArmMode::Left;
  if (s == "right") return ArmMode::Right;
  if (s == "auto") return ArmMode::Auto;
  throw ConfigError("unknown arm mode '" + s + "'");
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "idle";
    case Phase::Tracking: return "tracking";
    case Phase::Stable: return "stable";
    case Phase::Destabilized: return "destabilized";
  }
  return "?";
}

Point2 StabilityState::centroid() const {
  Point2 c{0.0, 0.0};
  if (window.empty()) return c;
  for (const WindowSample& s : window) {
    c.u += s.u;
    c.v += s.v;
  }
  c.u /= static_cast<double>(window.size());
  c.v /= static_cast<double>(window.size());
  return c;
}

StabilityState update_stability(StabilityState s, double t, double u, double v,
                                const EngineConfig& cfg) {
  if (s.last_t && t < *s.last_t)
    throw NonMonotoneTime("stability sample at t=" + std::to_string(t) +
                          " after t=" + std::to_string(*s.last_t));

  s.window.push_back({t, u, v});
  while (!s.window.empty() && s.window.front().t < t - cfg.window_s)
    s.window.pop_front();

  std::vector<Point2> pts;
  pts.reserve(s.window.size());
  for (const WindowSample& w : s.window) pts.push_back({w.u, w.v});
  const Circle circle = min_enclosing_circle(pts);
  const double diameter = 2.0 * circle.radius;

  if (s.prev_diameter && s.last_t && t > *s.last_t) {
    const double raw = (diameter - *s.prev_diameter) / (t - *s.last_t);
    // Low-pass: keep alpha = 0.3 of the previous estimate.
    s.drdt_mm_s = 0.7 * raw + 0.3 * s.drdt_mm_s;
  }
  s.radius_mm = circle.radius;
  s.prev_diameter = diameter;
  s.last_t = t;

  if (s.phase == Phase::Idle || s.phase == Phase::Destabilized)
    s.phase = Phase::Tracking;

  const bool calm = std::abs(s.drdt_mm_s) <= cfg.stable_drdt_max &&
                    s.radius_mm <= cfg.stable_radius_max_mm;
  switch (s.phase) {
    case Phase::Tracking:
      if (calm) {
        if (!s.calm_since) s.calm_since = t;
        if (t - *s.calm_since >= cfg.stable_dwell_s) {
          s.phase = Phase::Stable;
          // The dwell criterion was crossed between samples; record the
          // crossing instant, not the detection frame.
          s.stable_since = *s.calm_since + cfg.stable_dwell_s;
        }
      } else {
        s.calm_since.reset();
      }
      break;
    case Phase::Stable:
      if (!calm || (s.stable_since && t - *s.stable_since > cfg.hold_timeout_s)) {
        s.phase = Phase::Destabilized;
        s.stable_since.reset();
        s.calm_since.reset();
      }
      break;
    default:
      break;
  }
  return s;
}

namespace {

bool arm_joints(const std::map<JointId, JointObs>& joints, Arm arm,
                const EngineConfig& cfg, PointingRay& ray) {
  const JointId elbow_id =
      arm == Arm::Left ? JointId::ElbowLeft : JointId::ElbowRight;
  const JointId hand_id =
      arm == Arm::Left ? JointId::HandLeft : JointId::HandRight;
  auto e = joints.find(elbow_id);
  auto h = joints.find(hand_id);
  if (e == joints.end() || h == joints.end()) return false;
  if (e->second.confidence < cfg.confidence_min ||
      h->second.confidence < cfg.confidence_min)
    return false;
  ray = PointingRay{e->second.position, h->second.position};
  return ray.direction().norm() >= cfg.min_forearm_mm;
}

}  // namespace

std::optional<ArmSelection> select_arm(
    const std::map<JointId, JointObs>& world_joints, const EngineConfig& cfg,
    const RigidTransform& world_to_board) {
  PointingRay left, right;
  const bool has_left = arm_joints(world_joints, Arm::Left, cfg, left);
  const bool has_right = arm_joints(world_joints, Arm::Right, cfg, right);

  switch (cfg.arm) {
    case ArmMode::Left:
      if (has_left) return ArmSelection{Arm::Left, left};
      return std::nullopt;
    case ArmMode::Right:
      if (has_right) return ArmSelection{Arm::Right, right};
      return std::nullopt;
    case ArmMode::Auto:
      break;
  }

  if (!has_left && !has_right) return std::nullopt;
  if (has_left != has_right)
    return has_left ? ArmSelection{Arm::Left, left}
                    : ArmSelection{Arm::Right, right};

  auto sl = world_joints.find(JointId::ShoulderLeft);
  auto sr = world_joints.find(JointId::ShoulderRight);
  if (sl == world_joints.end() || sr == world_joints.end() ||
      sl->second.confidence < cfg.confidence_min ||
      sr->second.confidence < cfg.confidence_min)
    return ArmSelection{Arm::Right, right};

  const double mid_u = (apply(world_to_board, sl->second.position).x +
                        apply(world_to_board, sr->second.position).x) /
                       2.0;
  const double dist_l =
      std::abs(apply(world_to_board, left.hand).x - mid_u);
  const double dist_r =
      std::abs(apply(world_to_board, right.hand).x - mid_u);
  if (dist_l > dist_r) return ArmSelection{Arm::Left, left};
  return ArmSelection{Arm::Right, right};
}

PointingEngine::PointingEngine(EngineSetup setup) : setup_(std::move(setup)) {
  world_to_board_ = invert(setup_.board.pose);
  board_plane_ = make_plane(Point3{0, 0, 0}, Vec3{0, 0, 1});
}

void PointingEngine::reset() {
  stability_ = StabilityState{};
  last_frame_t_.reset();
  last_valid_t_.reset();
}

std::vector<PointingEvent> PointingEngine::step(const JointFrame& frame) {
  if (last_frame_t_ && frame.t < *last_frame_t_)
    throw NonMonotoneTime("frame at t=" + std::to_string(frame.t) +
                          " after t=" + std::to_string(*last_frame_t_));
  last_frame_t_ = frame.t;

  std::map<JointId, JointObs> world_joints;
  if (frame.frame == "sensor") {
    for (const auto& [id, obs] : frame.joints)
      world_joints[id] = {apply(setup_.sensor_to_world, obs.position),
                          obs.confidence};
  } else {
    world_joints = frame.joints;
  }

  auto selection = select_arm(world_joints, setup_.config, world_to_board_);
  if (!selection) {
    if (last_valid_t_ &&
        frame.t - *last_valid_t_ > setup_.config.joint_gap_reset_s) {
      stability_ = StabilityState{};
      last_valid_t_.reset();
    }
    return {};
  }
  last_valid_t_ = frame.t;

  const PointingRay board_ray = apply(world_to_board_, selection->ray);
  const RayPlaneHit hit = intersect_ray_plane(board_ray, board_plane_);
  if (!hit.ok()) {
    ++dropped_samples_;
    stability_ = StabilityState{};
    return {};
  }

  const Point2 p{hit.point.x, hit.point.y};
  const CellResult cell = classify(p, setup_.grid);

  const Phase before = stability_.phase;
  stability_ = update_stability(stability_, frame.t, p.u, p.v, setup_.config);
  if (trace_)
    trace_(frame.t, stability_.radius_mm, stability_.drdt_mm_s,
           stability_.phase);

  std::vector<PointingEvent> events;
  if (before != Phase::Stable && stability_.phase == Phase::Stable) {
    const Point2 c = stability_.centroid();
    const CellResult stable_cell = classify(c, setup_.grid);
    PointingEvent ev;
    ev.t = stability_.stable_since.value_or(frame.t);
    ev.arm = selection->arm;
    ev.u = c.u;
    ev.v = c.v;
    ev.cell = stable_cell.cell;
    ev.stable = true;
    ev.grazing = hit.grazing;
    events.push_back(ev);
  }

  PointingEvent mon;
  mon.t = frame.t;
  mon.arm = selection->arm;
  mon.u = p.u;
  mon.v = p.v;
  mon.cell = cell.cell;
  mon.stable = false;
  mon.grazing = hit.grazing;
  events.push_back(mon);
  return events;
}

}  // namespace deixis
