#include "deixis/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace deixis {

std::vector<TrialRecord> match_trials(const std::vector<PointingEvent>& events,
                                      const std::vector<TruthInterval>& truth) {
  std::vector<TruthInterval> sorted = truth;
  std::sort(sorted.begin(), sorted.end(),
            [](const TruthInterval& a, const TruthInterval& b) {
              return a.t_start < b.t_start;
            });
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].t_start < sorted[i - 1].t_end - 1e-9)
      throw OverlappingIntervals(
          "truth intervals overlap near t=" + std::to_string(sorted[i].t_start));

  std::vector<TrialRecord> records;
  records.reserve(sorted.size());
  for (const TruthInterval& iv : sorted) {
    TrialRecord rec;
    rec.intended_cell = iv.cell;
    rec.detection = Detection::None;
    for (const PointingEvent& ev : events) {
      if (!ev.stable) continue;
      if (ev.t < iv.t_start || ev.t > iv.t_end) continue;
      if (ev.cell) {
        rec.detection = Detection::Cell;
        rec.detected_cell = *ev.cell;
      } else {
        rec.detection = Detection::OutOfBoard;
        rec.detected_cell = 0;
      }
    }
    records.push_back(rec);
  }
  return records;
}

double accuracy(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw EmptyInput("no trial records");
  long correct = 0;
  for (const TrialRecord& r : records)
    if (r.correct()) ++correct;
  return 100.0 * static_cast<double>(correct) /
         static_cast<double>(records.size());
}

long& ConfusionMatrix::at(int intended, int column) {
  return counts[static_cast<size_t>(intended - 1) * columns() + column];
}

long ConfusionMatrix::at(int intended, int column) const {
  return counts[static_cast<size_t>(intended - 1) * columns() + column];
}

long ConfusionMatrix::row_total(int intended) const {
  long total = 0;
  for (int c = 0; c < columns(); ++c) total += at(intended, c);
  return total;
}

ConfusionMatrix build_confusion(const std::vector<TrialRecord>& records,
                                int cells) {
  ConfusionMatrix m;
  m.cells = cells;
  m.counts.assign(static_cast<size_t>(cells) * (cells + 2), 0);
  for (const TrialRecord& r : records) {
    if (r.intended_cell < 1 || r.intended_cell > cells)
      throw Error("record intends cell " + std::to_string(r.intended_cell) +
                  " outside the grid");
    int column;
    switch (r.detection) {
      case Detection::Cell:
        if (r.detected_cell < 1 || r.detected_cell > cells)
          throw Error("detected cell outside the grid");
        column = r.detected_cell - 1;
        break;
      case Detection::OutOfBoard: column = cells; break;
      default: column = cells + 1; break;
    }
    ++m.at(r.intended_cell, column);
  }
  return m;
}

namespace {

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::string column_label(const ConfusionMatrix& m, int column) {
  if (column < m.cells) return std::to_string(column + 1);
  return column == m.cells ? "out" : "none";
}

}  // namespace

Report render_report(const ConfusionMatrix& matrix,
                     const std::vector<TrialRecord>& records) {
  Report rep;
  rep.accuracy_pct = accuracy(records);
  rep.trials = static_cast<long>(records.size());

  std::string text;
  text += "intended |";
  for (int c = 0; c < matrix.columns(); ++c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, " %7s", column_label(matrix, c).c_str());
    text += buf;
  }
  text += " | trials\n";
  for (int r = 1; r <= matrix.cells; ++r) {
    char head[16];
    std::snprintf(head, sizeof head, "%8d |", r);
    text += head;
    const long total = matrix.row_total(r);
    for (int c = 0; c < matrix.columns(); ++c) {
      const double pct =
          total > 0 ? 100.0 * static_cast<double>(matrix.at(r, c)) /
                          static_cast<double>(total)
                    : 0.0;
      text += fmt(" %7.2f", pct);
    }
    char tail[24];
    std::snprintf(tail, sizeof tail, " | %6ld\n", total);
    text += tail;
  }
  text += "row percentages; accuracy " + fmt("%.2f", rep.accuracy_pct) +
          " % over " + std::to_string(rep.trials) + " trials\n";
  rep.text = text;

  std::string csv = "intended,detected,count,row_pct\n";
  for (int r = 1; r <= matrix.cells; ++r) {
    const long total = matrix.row_total(r);
    for (int c = 0; c < matrix.columns(); ++c) {
      const double pct =
          total > 0 ? 100.0 * static_cast<double>(matrix.at(r, c)) /
                          static_cast<double>(total)
                    : 0.0;
      csv += std::to_string(r) + "," + column_label(matrix, c) + "," +
             std::to_string(matrix.at(r, c)) + "," + fmt("%.4f", pct) + "\n";
    }
  }
  rep.csv = csv;
  return rep;
}

std::vector<PointingEvent> read_events_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<PointingEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    events.push_back(parse_event(line, line_no));
  }
  return events;
}

std::vector<TruthInterval> read_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<TruthInterval> truth;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    truth.push_back(parse_truth(line, line_no));
  }
  return truth;
}

}  // namespace deixis
