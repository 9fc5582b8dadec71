#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "deixis/board.hpp"
#include "deixis/frames.hpp"
#include "deixis/geometry.hpp"

namespace deixis {

enum class ArmMode { Left, Right, Auto };

const char* to_string(ArmMode m);
ArmMode arm_mode_from_string(const std::string& s);

struct EngineConfig {
  ArmMode arm = ArmMode::Auto;
  double confidence_min = 0.5;
  double window_s = 0.5;           // dispersion window
  double stable_drdt_max = 20.0;   // mm/s
  double stable_radius_max_mm = 50.0;  // dispersion floor: a window spread
                                       // wider than this is never stable
  double stable_dwell_s = 0.75;    // sub-threshold time before Stable
  double expected_settle_s = 3.25; // reporting reference only
  double hold_timeout_s = 5.0;     // Stable re-destabilizes after this long
  double min_forearm_mm = 100.0;
  double joint_gap_reset_s = 0.2;  // missing-joint gap that resets to Idle
};

enum class Phase { Idle, Tracking, Stable, Destabilized };

const char* to_string(Phase p);

struct WindowSample {
  double t, u, v;
};

/// Sliding-window dispersion state. The gesture is considered stable once the
/// rate of change of the window's enclosing-circle diameter (dr/dt, low-pass
/// filtered) stays within stable_drdt_max for stable_dwell_s.
struct StabilityState {
  std::deque<WindowSample> window;
  double radius_mm = 0.0;
  double drdt_mm_s = 0.0;  // smoothed d(diameter)/dt
  Phase phase = Phase::Idle;
  std::optional<double> stable_since;

  std::optional<double> calm_since;     // start of the current sub-threshold run
  std::optional<double> last_t;
  std::optional<double> prev_diameter;

  Point2 centroid() const;
};

/// Feeds one (t,u,v) sample through the stability state machine. Time must be
/// non-decreasing (NonMonotoneTime otherwise). On the Tracking -> Stable
/// transition stable_since is set to calm_since + stable_dwell_s, the instant
/// the dwell criterion was crossed.
StabilityState update_stability(StabilityState state, double t, double u,
                                double v, const EngineConfig& cfg);

struct ArmSelection {
  Arm arm;
  PointingRay ray;  // world frame
};

/// Picks the pointing forearm from a world-frame joint map. The configured
/// arm is used when both its joints pass the confidence gate and the forearm
/// is at least min_forearm_mm long. Auto mode picks the hand laterally
/// farther from the shoulder midline (measured along the board's u axis so
/// the choice is invariant under rigid remapping of the scene); ties go to
/// the right arm.
std::optional<ArmSelection> select_arm(
    const std::map<JointId, JointObs>& world_joints, const EngineConfig& cfg,
    const RigidTransform& world_to_board);

struct EngineSetup {
  RigidTransform sensor_to_world;
  BoardModel board;
  GridSpec grid;
  EngineConfig config;
};

/// Per-stream pipeline: joint frame -> world -> board-plane intersection ->
/// cell classification -> stability tracking -> events. Single-threaded per
/// instance; run one instance per stream.
class PointingEngine {
 public:
  explicit PointingEngine(EngineSetup setup);

  /// Processes one frame (non-decreasing t) and returns emitted events:
  /// a stable=false monitoring event per valid sample, plus one stable=true
  /// event on each Tracking -> Stable transition.
  std::vector<PointingEvent> step(const JointFrame& frame);

  void reset();

  const StabilityState& stability() const { return stability_; }
  const EngineSetup& setup() const { return setup_; }

  /// Samples dropped because the ray missed the plane (parallel or backward).
  long dropped_samples() const { return dropped_samples_; }

  using TraceFn =
      std::function<void(double t, double r, double drdt, Phase phase)>;
  void set_trace(TraceFn fn) { trace_ = std::move(fn); }

 private:
  EngineSetup setup_;
  RigidTransform world_to_board_;
  Plane board_plane_;  // board frame: z = 0
  StabilityState stability_;
  std::optional<double> last_frame_t_;
  std::optional<double> last_valid_t_;
  long dropped_samples_ = 0;
  TraceFn trace_;
};

}  // namespace deixis
