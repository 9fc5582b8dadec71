#include "deixis/frames.hpp"

#include <cmath>

#include <json.hpp>

namespace deixis {

using nlohmann::json;

const char* to_string(Arm arm) { return arm == Arm::Left ? "left" : "right"; }

Arm arm_from_string(const std::string& s) {
  if (s == "left") return Arm::Left;
  if (s == "right") return Arm::Right;
  throw Error("unknown arm '" + s + "'");
}

const char* to_string(JointId id) {
  switch (id) {
    case JointId::ElbowLeft: return "elbow_left";
    case JointId::HandLeft: return "hand_left";
    case JointId::ElbowRight: return "elbow_right";
    case JointId::HandRight: return "hand_right";
    case JointId::ShoulderLeft: return "shoulder_left";
    case JointId::ShoulderRight: return "shoulder_right";
    case JointId::Head: return "head";
  }
  return "?";
}

std::optional<JointId> joint_from_string(const std::string& s) {
  static const std::map<std::string, JointId> table = {
      {"elbow_left", JointId::ElbowLeft},
      {"hand_left", JointId::HandLeft},
      {"elbow_right", JointId::ElbowRight},
      {"hand_right", JointId::HandRight},
      {"shoulder_left", JointId::ShoulderLeft},
      {"shoulder_right", JointId::ShoulderRight},
      {"head", JointId::Head},
  };
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

[[noreturn]] void malformed(const std::string& what, int line_no) {
  std::string msg = "malformed frame";
  if (line_no >= 0) msg += " at line " + std::to_string(line_no);
  throw MalformedFrame(msg + ": " + what);
}

}  // namespace

JointFrame parse_frame(const std::string& line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    malformed(e.what(), line_no);
  }
  if (!j.is_object()) malformed("not a JSON object", line_no);
  if (!j.contains("t") || !j["t"].is_number()) malformed("missing \"t\"", line_no);

  JointFrame f;
  f.t = j["t"].get<double>();
  if (!std::isfinite(f.t)) malformed("non-finite \"t\"", line_no);

  if (!j.contains("frame") || !j["frame"].is_string())
    malformed("missing \"frame\"", line_no);
  f.frame = j["frame"].get<std::string>();
  if (f.frame != "sensor" && f.frame != "world")
    malformed("frame must be \"sensor\" or \"world\"", line_no);

  if (j.contains("joints")) {
    if (!j["joints"].is_object()) malformed("\"joints\" must be an object", line_no);
    for (auto& [name, obs] : j["joints"].items()) {
      auto id = joint_from_string(name);
      if (!id) continue;  // unknown joint ids are tolerated
      if (!obs.is_object() || !obs.contains("p") || !obs["p"].is_array() ||
          obs["p"].size() != 3)
        malformed("joint \"" + name + "\" needs \"p\": [x,y,z]", line_no);
      JointObs o;
      o.position = {obs["p"][0].get<double>(), obs["p"][1].get<double>(),
                    obs["p"][2].get<double>()};
      if (!o.position.finite())
        malformed("joint \"" + name + "\" has non-finite coordinates", line_no);
      if (obs.contains("c")) {
        if (!obs["c"].is_number())
          malformed("joint \"" + name + "\" confidence must be a number", line_no);
        o.confidence = obs["c"].get<double>();
        if (!(o.confidence >= 0.0 && o.confidence <= 1.0))
          malformed("joint \"" + name + "\" confidence outside [0,1]", line_no);
      }
      f.joints[*id] = o;
    }
  }
  return f;
}

std::string serialize_frame(const JointFrame& frame) {
  json joints = json::object();
  for (const auto& [id, obs] : frame.joints) {
    joints[to_string(id)] = {
        {"p", {obs.position.x, obs.position.y, obs.position.z}},
        {"c", obs.confidence}};
  }
  json j = {{"t", frame.t}, {"frame", frame.frame}, {"joints", joints}};
  return j.dump();
}

std::string serialize_event(const PointingEvent& ev) {
  json j = {{"t", ev.t},         {"arm", to_string(ev.arm)},
            {"u", ev.u},         {"v", ev.v},
            {"stable", ev.stable}, {"grazing", ev.grazing}};
  if (ev.cell)
    j["cell"] = *ev.cell;
  else
    j["cell"] = nullptr;
  return j.dump();
}

PointingEvent parse_event(const std::string& line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    malformed(e.what(), line_no);
  }
  PointingEvent ev;
  try {
    ev.t = j.at("t").get<double>();
    ev.arm = arm_from_string(j.at("arm").get<std::string>());
    ev.u = j.at("u").get<double>();
    ev.v = j.at("v").get<double>();
    if (!j.at("cell").is_null()) ev.cell = j["cell"].get<int>();
    ev.stable = j.at("stable").get<bool>();
    ev.grazing = j.at("grazing").get<bool>();
  } catch (const json::exception& e) {
    malformed(e.what(), line_no);
  }
  return ev;
}

std::string serialize_truth(const TruthInterval& iv) {
  json j = {{"cell", iv.cell}, {"t_start", iv.t_start}, {"t_end", iv.t_end}};
  return j.dump();
}

TruthInterval parse_truth(const std::string& line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    malformed(e.what(), line_no);
  }
  TruthInterval iv;
  try {
    iv.cell = j.at("cell").get<int>();
    iv.t_start = j.at("t_start").get<double>();
    iv.t_end = j.at("t_end").get<double>();
  } catch (const json::exception& e) {
    malformed(e.what(), line_no);
  }
  return iv;
}

bool operator==(const JointFrame& a, const JointFrame& b) {
  if (a.t != b.t || a.frame != b.frame || a.joints.size() != b.joints.size())
    return false;
  for (const auto& [id, obs] : a.joints) {
    auto it = b.joints.find(id);
    if (it == b.joints.end()) return false;
    const JointObs& o = it->second;
    if (obs.position.x != o.position.x || obs.position.y != o.position.y ||
        obs.position.z != o.position.z || obs.confidence != o.confidence)
      return false;
  }
  return true;
}

}  // namespace deixis
