#pragma once

#include <string>
#include <vector>

#include "deixis/trials.hpp"

namespace deixis {

struct StudyOptions {
  std::uint64_t seed = 7;
  int trials_per_condition = 500;
  double sigma_mm = 15.0;
  double right_arm_angular_bias_rad = 0.05;  // sensor asymmetry
  bool parallel = true;
};

struct ConditionResult {
  int rows = 0, cols = 0;
  Arm arm = Arm::Right;
  std::vector<TrialRecord> records;
  Report report;

  std::string grid_name() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }
  std::string name() const { return grid_name() + "_" + to_string(arm); }
};

struct StudyResult {
  std::vector<ConditionResult> conditions;  // 2x3 L, 2x3 R, 3x4 L, 3x4 R
  std::string summary_text;
  std::string summary_csv;

  double accuracy(int rows, int cols, Arm arm) const;
};

/// Runs the four study conditions {left,right} x {2x3, 3x4} with the given
/// noise level; condition c uses seed + c * 1e6 as its trial seed base.
StudyResult run_study(const RunConfig& base, const StudyOptions& opts);

/// Writes summary.txt, summary.csv and one report_<grid>_<arm>.{txt,csv} per
/// condition into `dir` (created if missing).
void write_study_files(const StudyResult& result, const std::string& dir);

}  // namespace deixis
