#include "deixis/study.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace deixis {

double StudyResult::accuracy(int rows, int cols, Arm arm) const {
  for (const ConditionResult& c : conditions)
    if (c.rows == rows && c.cols == cols && c.arm == arm)
      return c.report.accuracy_pct;
  throw Error("no such study condition");
}

StudyResult run_study(const RunConfig& base, const StudyOptions& opts) {
  if (opts.trials_per_condition < 1)
    throw ConfigError("study needs at least one trial per condition");

  const std::pair<int, int> grids[] = {{2, 3}, {3, 4}};
  const Arm arms[] = {Arm::Left, Arm::Right};

  StudyResult result;
  int condition_index = 0;
  for (auto [rows, cols] : grids) {
    for (Arm arm : arms) {
      TrialPlan plan;
      plan.config = base;
      plan.config.grid_rows = rows;
      plan.config.grid_cols = cols;
      plan.config.noise.jitter_sigma_mm = opts.sigma_mm;
      plan.config.noise.right_arm_angular_bias_rad =
          opts.right_arm_angular_bias_rad;
      plan.config.noise.seed =
          opts.seed + static_cast<std::uint64_t>(condition_index) * 1000000u;
      plan.arm = arm;
      plan.trials = opts.trials_per_condition;

      ConditionResult cond;
      cond.rows = rows;
      cond.cols = cols;
      cond.arm = arm;
      cond.records = run_trials(plan, opts.parallel);
      cond.report =
          render_report(build_confusion(cond.records, rows * cols),
                        cond.records);
      result.conditions.push_back(std::move(cond));
      ++condition_index;
    }
  }

  char line[128];
  std::string text = "grid       left arm   right arm\n";
  std::string csv = "grid,arm,accuracy_pct,trials\n";
  for (auto [rows, cols] : grids) {
    std::snprintf(line, sizeof line, "%dx%d     %8.2f %%  %8.2f %%\n", rows,
                  cols, result.accuracy(rows, cols, Arm::Left),
                  result.accuracy(rows, cols, Arm::Right));
    text += line;
    for (Arm arm : arms) {
      std::snprintf(line, sizeof line, "%dx%d,%s,%.2f,%d\n", rows, cols,
                    to_string(arm), result.accuracy(rows, cols, arm),
                    opts.trials_per_condition);
      csv += line;
    }
  }
  std::snprintf(line, sizeof line,
                "trials per condition: %d, sigma: %.1f mm, seed: %llu\n",
                opts.trials_per_condition, opts.sigma_mm,
                static_cast<unsigned long long>(opts.seed));
  text += line;
  result.summary_text = text;
  result.summary_csv = csv;
  return result;
}

void write_study_files(const StudyResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw IoError("cannot write " + dir + "/" + name);
    out << content;
  };
  write("summary.txt", result.summary_text);
  write("summary.csv", result.summary_csv);
  for (const ConditionResult& c : result.conditions) {
    write("report_" + c.name() + ".txt", c.report.text);
    write("report_" + c.name() + ".csv", c.report.csv);
  }
}

}  // namespace deixis
