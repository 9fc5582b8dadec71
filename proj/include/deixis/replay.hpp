#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "deixis/config.hpp"

namespace deixis {

struct ReplayStats {
  long frames = 0;
  long dropped_out_of_order = 0;
  long malformed = 0;
};

/// Streams a newline-delimited frame file into `sink` in file order.
/// speed 0 delivers as fast as possible (deterministic batch mode); any
/// other factor paces inter-frame gaps by wall clock (gap / speed).
/// Malformed lines and backward timestamps are reported on `warnings` and
/// skipped; neither ends the stream.
ReplayStats replay(const std::string& path, double speed,
                   const std::function<void(const JointFrame&)>& sink,
                   std::ostream* warnings = nullptr);

struct RunReplayResult {
  ReplayStats stats;
  long events = 0;
  long stable_events = 0;
};

/// Full batch pipeline: file -> engine -> event lines on `events_out`.
/// When `trace_csv` is non-null a per-sample CSV (t, r, drdt, phase) is
/// written to it.
RunReplayResult run_replay(const RunConfig& cfg, const std::string& input_path,
                           double speed, std::ostream& events_out,
                           std::ostream* trace_csv = nullptr,
                           std::ostream* warnings = nullptr);

}  // namespace deixis
