#include "deixis/replay.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

#include "deixis/engine.hpp"

namespace deixis {

ReplayStats replay(const std::string& path, double speed,
                   const std::function<void(const JointFrame&)>& sink,
                   std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);

  ReplayStats stats;
  std::string line;
  int line_no = 0;
  bool have_last = false;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    JointFrame frame;
    try {
      frame = parse_frame(line, line_no);
    } catch (const MalformedFrame& e) {
      ++stats.malformed;
      if (warnings) *warnings << "warning: " << path << ": " << e.what() << "\n";
      continue;
    }
    if (have_last && frame.t < last_t) {
      ++stats.dropped_out_of_order;
      if (warnings)
        *warnings << "warning: " << path << " line " << line_no
                  << ": timestamp went backwards, frame dropped\n";
      continue;
    }
    if (speed > 0.0 && have_last && frame.t > last_t) {
      const auto gap =
          std::chrono::duration<double>((frame.t - last_t) / speed);
      std::this_thread::sleep_for(gap);
    }
    last_t = frame.t;
    have_last = true;
    ++stats.frames;
    sink(frame);
  }
  return stats;
}

RunReplayResult run_replay(const RunConfig& cfg, const std::string& input_path,
                           double speed, std::ostream& events_out,
                           std::ostream* trace_csv, std::ostream* warnings) {
  PointingEngine engine(cfg.engine_setup());
  if (trace_csv) {
    *trace_csv << "t,r,drdt,phase\n";
    engine.set_trace([trace_csv](double t, double r, double drdt, Phase p) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%s\n", t, r, drdt,
                    to_string(p));
      *trace_csv << buf;
    });
  }

  RunReplayResult result;
  result.stats = replay(
      input_path, speed,
      [&](const JointFrame& frame) {
        for (const PointingEvent& ev : engine.step(frame)) {
          events_out << serialize_event(ev) << '\n';
          ++result.events;
          if (ev.stable) ++result.stable_events;
        }
      },
      warnings);
  return result;
}

}  // namespace deixis
