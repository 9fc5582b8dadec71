#pragma once

#include <map>
#include <optional>
#include <string>

#include "deixis/geometry.hpp"

namespace deixis {

enum class Arm { Left, Right };

const char* to_string(Arm arm);
Arm arm_from_string(const std::string& s);

enum class JointId {
  ElbowLeft,
  HandLeft,
  ElbowRight,
  HandRight,
  ShoulderLeft,
  ShoulderRight,
  Head,
};

const char* to_string(JointId id);
std::optional<JointId> joint_from_string(const std::string& s);

struct JointObs {
  Point3 position;
  double confidence = 1.0;
};

/// One timestamped skeleton snapshot. `frame` names the reference frame the
/// joints are expressed in ("sensor" or "world"). Absent joints are simply
/// missing from the map.
struct JointFrame {
  double t = 0.0;
  std::string frame = "world";
  std::map<JointId, JointObs> joints;
};

/// Parses one newline-delimited JSON frame line:
///   {"t": <s>, "frame": "sensor"|"world",
///    "joints": {"<joint>": {"p": [x,y,z], "c": <0..1>}, ...}}
/// Unknown joint names are ignored. Throws MalformedFrame on schema or value
/// violations; `line_no` (when >= 0) is included in the message.
JointFrame parse_frame(const std::string& line, int line_no = -1);

std::string serialize_frame(const JointFrame& frame);

/// Emitted result sample. Monitoring samples carry stable=false; exactly one
/// stable=true event is emitted per stabilization, carrying the dispersion
/// window's centroid. `cell` is empty for intersections outside the board.
struct PointingEvent {
  double t = 0.0;
  Arm arm = Arm::Right;
  double u = 0.0;
  double v = 0.0;
  std::optional<int> cell;
  bool stable = false;
  bool grazing = false;
};

/// One line: {"t":..,"arm":"left"|"right","u":..,"v":..,
///            "cell":<int|null>,"stable":..,"grazing":..}
std::string serialize_event(const PointingEvent& ev);

PointingEvent parse_event(const std::string& line, int line_no = -1);

/// Ground-truth hold interval, one line: {"cell": <int>, "t_start": <s>,
/// "t_end": <s>}.
struct TruthInterval {
  int cell = 0;
  double t_start = 0.0;
  double t_end = 0.0;
};

std::string serialize_truth(const TruthInterval& iv);
TruthInterval parse_truth(const std::string& line, int line_no = -1);

bool operator==(const JointFrame& a, const JointFrame& b);

}  // namespace deixis
