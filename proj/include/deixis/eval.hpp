#pragma once

#include <string>
#include <vector>

#include "deixis/frames.hpp"

namespace deixis {

enum class Detection { Cell, OutOfBoard, None };

struct TrialRecord {
  int intended_cell = 0;
  Detection detection = Detection::None;
  int detected_cell = 0;  // valid when detection == Detection::Cell

  bool correct() const {
    return detection == Detection::Cell && detected_cell == intended_cell;
  }
};

/// Pairs ground-truth hold intervals with engine output: the detected cell of
/// an interval is that of the last stable event inside it (the settled
/// reading); None when no stable event fell inside. Events must be
/// time-ordered; overlapping truth intervals are rejected.
std::vector<TrialRecord> match_trials(const std::vector<PointingEvent>& events,
                                      const std::vector<TruthInterval>& truth);

/// 100 * correct / total. None and out-of-board detections count as
/// incorrect. Throws EmptyInput on an empty record set.
double accuracy(const std::vector<TrialRecord>& records);

/// rows = intended cells 1..n; columns = detected cells 1..n, then
/// out-of-board, then none.
struct ConfusionMatrix {
  int cells = 0;
  std::vector<long> counts;  // (cells) x (cells + 2), row-major

  long& at(int intended, int column);
  long at(int intended, int column) const;
  int columns() const { return cells + 2; }
  long row_total(int intended) const;
};

ConfusionMatrix build_confusion(const std::vector<TrialRecord>& records,
                                int cells);

struct Report {
  std::string text;
  std::string csv;
  double accuracy_pct = 0.0;
  long trials = 0;
};

/// Renders the row-normalized percentage matrix, per-row trial counts and the
/// overall accuracy. Pure function of its inputs; identical inputs produce
/// byte-identical output.
Report render_report(const ConfusionMatrix& matrix,
                     const std::vector<TrialRecord>& records);

std::vector<PointingEvent> read_events_file(const std::string& path);
std::vector<TruthInterval> read_truth_file(const std::string& path);

}  // namespace deixis
