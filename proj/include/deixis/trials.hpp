#pragma once

#include <vector>

#include "deixis/config.hpp"
#include "deixis/eval.hpp"

namespace deixis {

/// A batch of independent pointing trials. Each trial is one single-target
/// session (transition + hold) fed through a fresh engine; trial i targets
/// cell (i mod cells) + 1 and derives its RNG stream from noise.seed + i, so
/// trials can run in any order or in parallel with identical results.
struct TrialPlan {
  RunConfig config;   // board, grid, engine, noise, participant
  Arm arm = Arm::Right;
  int trials = 500;
  double hold_s = 2.0;
};

TrialRecord run_single_trial(const TrialPlan& plan, int index);

/// Serial reference runner. Kept as the ground truth the parallel kernel is
/// checked against.
std::vector<TrialRecord> run_trials_serial(const TrialPlan& plan);

/// OpenMP runner; output is element-for-element identical to the serial one.
std::vector<TrialRecord> run_trials_parallel(const TrialPlan& plan);

std::vector<TrialRecord> run_trials(const TrialPlan& plan, bool parallel);

}  // namespace deixis
