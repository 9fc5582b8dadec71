#include "deixis/trials.hpp"

namespace deixis {

TrialRecord run_single_trial(const TrialPlan& plan, int index) {
  const GridSpec grid = plan.config.grid();
  const int cell = index % grid.cell_count() + 1;

  SessionScript script;
  script.target_cells = {cell};
  script.hold_s = plan.hold_s;
  script.arm = plan.arm;

  NoiseModel noise = plan.config.noise;
  noise.seed = plan.config.noise.seed + static_cast<std::uint64_t>(index);

  const SimResult sim = simulate_session(plan.config.participant, script,
                                         noise, plan.config.board, grid);

  EngineSetup setup = plan.config.engine_setup();
  setup.config.arm = plan.arm == Arm::Left ? ArmMode::Left : ArmMode::Right;
  PointingEngine engine(setup);

  std::vector<PointingEvent> events;
  for (const JointFrame& frame : sim.frames)
    for (PointingEvent& ev : engine.step(frame))
      if (ev.stable) events.push_back(ev);

  TrialRecord rec = match_trials(events, sim.truth).at(0);
  return rec;
}

std::vector<TrialRecord> run_trials_serial(const TrialPlan& plan) {
  std::vector<TrialRecord> records(static_cast<size_t>(plan.trials));
  for (int i = 0; i < plan.trials; ++i)
    records[static_cast<size_t>(i)] = run_single_trial(plan, i);
  return records;
}

std::vector<TrialRecord> run_trials_parallel(const TrialPlan& plan) {
  std::vector<TrialRecord> records(static_cast<size_t>(plan.trials));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < plan.trials; ++i)
    records[static_cast<size_t>(i)] = run_single_trial(plan, i);
  return records;
}

std::vector<TrialRecord> run_trials(const TrialPlan& plan, bool parallel) {
  return parallel ? run_trials_parallel(plan) : run_trials_serial(plan);
}

}  // namespace deixis
