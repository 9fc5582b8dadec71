#include "deixis/simulator.hpp"

#include <cmath>
#include <fstream>
#include <random>

namespace deixis {

void Participant::validate() const {
  if (height_mm <= 0.0 || arm_length_mm <= 0.0 || stand_distance_mm <= 0.0)
    throw ConfigError("participant dimensions must be positive");
  if (arm_length_mm >= height_mm)
    throw ConfigError("arm length must be smaller than height");
}

void NoiseModel::validate() const {
  if (jitter_sigma_mm < 0.0) throw ConfigError("jitter sigma must be >= 0");
  if (settle_time_s <= 0.0) throw ConfigError("settle time must be > 0");
  if (white_fraction < 0.0 || white_fraction > 1.0)
    throw ConfigError("white fraction must be in [0,1]");
  if (arrival_margin_s < 0.0 || arrival_margin_s >= settle_time_s)
    throw ConfigError("arrival margin must be in [0, settle time)");
}

namespace {

Point3 shoulder_position(const Participant& p, Arm arm) {
  // World: x rightward (seen from the user facing the board), y up,
  // z from the board toward the user. The user stands centered.
  const double side = arm == Arm::Right ? 1.0 : -1.0;
  return {side * p.shoulder_half_width(), p.shoulder_height(),
          p.stand_distance_mm};
}

ArmPose rest_pose(const Participant& p, Arm arm) {
  const double side = arm == Arm::Right ? 1.0 : -1.0;
  ArmPose pose;
  pose.shoulder = shoulder_position(p, arm);
  pose.elbow = pose.shoulder + Vec3{0.0, -p.upper_arm_mm(), 0.0};
  // Hand rests near the thigh, slightly inward of the shoulder.
  const Vec3 dir = Vec3{-0.25 * side, -0.95, 0.15}.normalized();
  pose.hand = pose.elbow + p.forearm_mm() * dir;
  return pose;
}

double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

}  // namespace

ArmPose arm_pose_for_target(const Participant& participant,
                            const Point3& target_world, Arm arm) {
  ArmPose pose;
  pose.shoulder = shoulder_position(participant, arm);
  const Vec3 d = (target_world - pose.shoulder).normalized();
  const double cos_fwd = d.dot(Vec3{0.0, 0.0, -1.0});
  if (cos_fwd < std::cos(100.0 * M_PI / 180.0))
    throw UnreachableTarget("target requires pointing more than 100 degrees "
                            "away from the board");
  pose.elbow = pose.shoulder + participant.upper_arm_mm() * d;
  pose.hand = pose.elbow + participant.forearm_mm() * d;
  return pose;
}

SimResult simulate_session(const Participant& participant,
                           const SessionScript& script, const NoiseModel& noise,
                           const BoardModel& board, const GridSpec& grid) {
  participant.validate();
  noise.validate();
  if (script.target_cells.empty())
    throw ConfigError("session script has no targets");
  for (int cell : script.target_cells)
    if (cell < 1 || cell > grid.cell_count())
      throw ConfigError("script cell " + std::to_string(cell) +
                        " outside grid");
  if (script.hold_s <= 0.0) throw ConfigError("hold duration must be > 0");

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sigma = noise.jitter_sigma_mm;
  const double sigma_white = sigma * noise.white_fraction;
  const double sigma_frozen =
      std::sqrt(std::max(0.0, sigma * sigma - sigma_white * sigma_white));

  static constexpr JointId kJointOrder[] = {
      JointId::ShoulderLeft, JointId::ShoulderRight, JointId::ElbowLeft,
      JointId::ElbowRight,   JointId::HandLeft,      JointId::HandRight,
      JointId::Head};

  const double seg_s = noise.settle_time_s + script.hold_s;
  const double reach_s = noise.settle_time_s - noise.arrival_margin_s;
  const auto total_frames = static_cast<long>(
      std::lround(seg_s * static_cast<double>(script.target_cells.size()) *
                  kFrameRateHz));

  SimResult out;
  out.frames.reserve(static_cast<size_t>(total_frames));
  for (size_t i = 0; i < script.target_cells.size(); ++i) {
    const double start = static_cast<double>(i) * seg_s;
    out.truth.push_back({script.target_cells[i], start + noise.settle_time_s,
                         start + seg_s});
  }

  Point2 aim_prev{board.width_mm / 2.0, board.height_mm / 2.0};
  int segment = -1;
  Point2 aim_target = aim_prev;
  std::map<JointId, Vec3> frozen;

  const ArmPose rest = rest_pose(
      participant, script.arm == Arm::Right ? Arm::Left : Arm::Right);
  const Point3 head{0.0, 0.93 * participant.height_mm,
                    participant.stand_distance_mm};

  for (long k = 0; k < total_frames; ++k) {
    const double t = static_cast<double>(k) / kFrameRateHz;
    const int seg = std::min(static_cast<int>(t / seg_s),
                             static_cast<int>(script.target_cells.size()) - 1);
    if (seg != segment) {
      if (segment >= 0) aim_prev = aim_target;
      segment = seg;
      aim_target = grid.cell_center(script.target_cells[seg]);
      frozen.clear();
      if (sigma_frozen > 0.0)
        for (JointId id : kJointOrder)
          frozen[id] = Vec3{gauss(rng), gauss(rng), gauss(rng)} * sigma_frozen;
    }

    const double tau = t - seg * seg_s;
    Point2 aim = aim_target;
    if (tau < reach_s) {
      const double s = smoothstep(tau / reach_s);
      aim = {aim_prev.u + (aim_target.u - aim_prev.u) * s,
             aim_prev.v + (aim_target.v - aim_prev.v) * s};
    }
    const Point3 aim_world = apply(board.pose, Point3{aim.u, aim.v, 0.0});

    ArmPose point = arm_pose_for_target(participant, aim_world, script.arm);
    Vec3 d = (point.hand - point.elbow).normalized();
    if (script.arm == Arm::Right && noise.right_arm_angular_bias_rad != 0.0) {
      // Systematic yaw tilt of the measured right forearm.
      const double a = noise.right_arm_angular_bias_rad;
      const Vec3 rotated{d.x * std::cos(a) + d.z * std::sin(a), d.y,
                         -d.x * std::sin(a) + d.z * std::cos(a)};
      d = rotated;
    }
    double forearm = participant.forearm_mm();
    if (script.arm == Arm::Left) forearm += noise.left_arm_length_bias_mm;
    point.hand = point.elbow + forearm * d;

    if (noise.motor_noise && sigma > 0.0) {
      // Aim-direction tremor sized to displace the hand by ~sigma.
      Vec3 n = Vec3{gauss(rng), gauss(rng), gauss(rng)} * sigma;
      n = n - d * n.dot(d);
      point.hand =
          point.elbow +
          forearm * (d + n * (1.0 / participant.forearm_mm())).normalized();
    }

    std::map<JointId, Point3> raw;
    raw[JointId::ShoulderLeft] = shoulder_position(participant, Arm::Left);
    raw[JointId::ShoulderRight] = shoulder_position(participant, Arm::Right);
    raw[JointId::Head] = head;
    if (script.arm == Arm::Left) {
      raw[JointId::ElbowLeft] = point.elbow;
      raw[JointId::HandLeft] = point.hand;
      raw[JointId::ElbowRight] = rest.elbow;
      raw[JointId::HandRight] = rest.hand;
    } else {
      raw[JointId::ElbowRight] = point.elbow;
      raw[JointId::HandRight] = point.hand;
      raw[JointId::ElbowLeft] = rest.elbow;
      raw[JointId::HandLeft] = rest.hand;
    }

    JointFrame frame;
    frame.t = t;
    frame.frame = "world";
    for (JointId id : kJointOrder) {
      Point3 pos = raw[id];
      if (!noise.motor_noise) {
        if (sigma_frozen > 0.0) pos = pos + frozen[id];
        if (sigma_white > 0.0)
          pos = pos + Vec3{gauss(rng), gauss(rng), gauss(rng)} * sigma_white;
      }
      frame.joints[id] = {pos, 0.95};
    }
    out.frames.push_back(std::move(frame));
  }
  return out;
}

void write_frames_file(const std::string& path,
                       const std::vector<JointFrame>& frames) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const JointFrame& f : frames) out << serialize_frame(f) << '\n';
}

void write_truth_file(const std::string& path,
                      const std::vector<TruthInterval>& truth) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const TruthInterval& iv : truth) out << serialize_truth(iv) << '\n';
}

}  // namespace deixis
