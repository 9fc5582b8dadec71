#pragma once

#include <cstdint>
#include <vector>

#include "deixis/board.hpp"
#include "deixis/frames.hpp"

namespace deixis {

inline constexpr double kFrameRateHz = 30.0;

struct Participant {
  double height_mm = 1750.0;
  double arm_length_mm = 600.0;
  double shoulder_height_mm = 0.0;  // 0 -> shoulder_height_factor * height
  double shoulder_height_factor = 0.82;
  double shoulder_width_factor = 0.25;
  double upper_arm_fraction = 0.45;
  Arm handedness = Arm::Right;
  double stand_distance_mm = 1500.0;

  double shoulder_height() const {
    return shoulder_height_mm > 0.0 ? shoulder_height_mm
                                    : shoulder_height_factor * height_mm;
  }
  double shoulder_half_width() const {
    return shoulder_width_factor * height_mm / 2.0;
  }
  double upper_arm_mm() const { return upper_arm_fraction * arm_length_mm; }
  double forearm_mm() const {
    return (1.0 - upper_arm_fraction) * arm_length_mm;
  }

  void validate() const;
};

/// Synthetic measurement-noise model. jitter_sigma_mm is the stationary
/// per-joint Gaussian sigma; it decomposes into a systematic offset frozen
/// for the duration of each target segment (slowly varying skeleton-fit
/// bias, the dominant term) plus an iid per-frame component sized by
/// white_fraction. The per-frame marginal stays N(0, sigma^2) per axis.
struct NoiseModel {
  double jitter_sigma_mm = 15.0;
  double settle_time_s = 2.5;           // transition duration per target
  double left_arm_length_bias_mm = 0.0;  // added along the left forearm ray
  double right_arm_angular_bias_rad = 0.0;  // yaw tilt of the right forearm
  bool motor_noise = false;  // perturb aim direction instead of joints
  double white_fraction = 0.01;
  double arrival_margin_s = 0.5;  // reach completes this early; keep equal to
                                  // the engine window for exact settle timing
  std::uint64_t seed = 1;

  void validate() const;
};

struct SessionScript {
  std::vector<int> target_cells;
  double hold_s = 2.0;  // per-target hold after the transition
  Arm arm = Arm::Right;
};

struct ArmPose {
  Point3 shoulder;
  Point3 elbow;
  Point3 hand;
};

/// Straight-arm pose aiming the forearm ray exactly through `target`:
/// elbow = shoulder + upper_arm * d, hand = elbow + forearm * d with
/// d = unit(target - shoulder). Throws UnreachableTarget when the required
/// direction is more than 100 degrees away from facing the board.
ArmPose arm_pose_for_target(const Participant& participant,
                            const Point3& target_world, Arm arm);

struct SimResult {
  std::vector<JointFrame> frames;       // world frame, kFrameRateHz
  std::vector<TruthInterval> truth;     // one hold interval per target
};

/// Generates one session: for each scripted target, a smoothstep transition
/// of settle_time_s (motion completes arrival_margin_s early) followed by a
/// hold of hold_s. Ground truth records the hold intervals. Deterministic
/// given noise.seed.
SimResult simulate_session(const Participant& participant,
                           const SessionScript& script, const NoiseModel& noise,
                           const BoardModel& board, const GridSpec& grid);

void write_frames_file(const std::string& path,
                       const std::vector<JointFrame>& frames);
void write_truth_file(const std::string& path,
                      const std::vector<TruthInterval>& truth);

}  // namespace deixis
