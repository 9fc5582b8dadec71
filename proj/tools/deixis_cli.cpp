#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "deixis/config.hpp"
#include "deixis/eval.hpp"
#include "deixis/net.hpp"
#include "deixis/replay.hpp"
#include "deixis/simulator.hpp"
#include "deixis/study.hpp"
#include "deixis/trials.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted = true; }

void parse_grid(const std::string& spec, int& rows, int& cols) {
  const size_t x = spec.find('x');
  if (x == std::string::npos)
    throw deixis::ConfigError("grid must look like 2x3, got '" + spec + "'");
  try {
    rows = std::stoi(spec.substr(0, x));
    cols = std::stoi(spec.substr(x + 1));
  } catch (const std::exception&) {
    throw deixis::ConfigError("grid must look like 2x3, got '" + spec + "'");
  }
  if (rows < 1 || cols < 1)
    throw deixis::ConfigError("grid rows/cols must be >= 1");
}

std::vector<int> parse_cells(const std::string& list) {
  std::vector<int> cells;
  std::string token;
  std::istringstream ss(list);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    cells.push_back(std::stoi(token));
  }
  return cells;
}

deixis::RunConfig load(const std::string& path) {
  if (path.empty()) return deixis::default_config();
  return deixis::load_config(path);
}

int cmd_replay(const deixis::RunConfig& cfg, const std::string& input,
               double speed, const std::string& trace_path,
               const std::string& events_path) {
  std::ofstream trace_file, events_file;
  std::ostream* trace = nullptr;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw deixis::IoError("cannot write " + trace_path);
    trace = &trace_file;
  }
  std::ostream* events = &std::cout;
  if (!events_path.empty()) {
    events_file.open(events_path);
    if (!events_file) throw deixis::IoError("cannot write " + events_path);
    events = &events_file;
  }
  const auto result =
      deixis::run_replay(cfg, input, speed, *events, trace, &std::cerr);
  std::cerr << "info: " << result.stats.frames << " frames, " << result.events
            << " events (" << result.stable_events << " stable), "
            << result.stats.malformed << " malformed, "
            << result.stats.dropped_out_of_order << " out of order\n";
  return 0;
}

int cmd_serve(const deixis::RunConfig& cfg, std::uint16_t ingest_port,
              std::optional<std::uint16_t> events_port, double reset_gap) {
  deixis::ServeOptions opts;
  opts.ingest_port = ingest_port;
  opts.events_port = events_port;
  opts.reset_gap_s = reset_gap;
  deixis::IngestServer server(cfg, opts);
  server.start();
  std::cerr << "info: ingesting frames on port " << server.ingest_port();
  if (server.events_port())
    std::cerr << ", publishing events on port " << *server.events_port();
  std::cerr << "\n";
  std::signal(SIGINT, on_sigint);
  std::signal(SIGTERM, on_sigint);
  while (!g_interrupted)
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

int cmd_simulate(const deixis::RunConfig& base, int participants,
                 const std::string& grid_spec, double sigma,
                 std::uint64_t seed, const std::string& out_dir, int targets,
                 const std::string& cells_list, const std::string& arm,
                 double hold_s) {
  deixis::RunConfig cfg = base;
  if (!grid_spec.empty()) parse_grid(grid_spec, cfg.grid_rows, cfg.grid_cols);
  cfg.noise.jitter_sigma_mm = sigma;
  const deixis::GridSpec grid = cfg.grid();

  deixis::SessionScript script;
  script.hold_s = hold_s;
  script.arm = arm.empty() ? cfg.participant.handedness
                           : deixis::arm_from_string(arm);
  if (!cells_list.empty()) {
    script.target_cells = parse_cells(cells_list);
  } else {
    const int total = targets > 0 ? targets : 10 * grid.cell_count();
    for (int i = 0; i < total; ++i)
      script.target_cells.push_back(i % grid.cell_count() + 1);
  }

  std::filesystem::create_directories(out_dir);
  for (int p = 0; p < participants; ++p) {
    deixis::NoiseModel noise = cfg.noise;
    noise.seed = seed + static_cast<std::uint64_t>(p);
    const deixis::SimResult sim = deixis::simulate_session(
        cfg.participant, script, noise, cfg.board, grid);
    const std::string prefix = out_dir + "/p" + std::to_string(p);
    deixis::write_frames_file(prefix + "_frames.jsonl", sim.frames);
    deixis::write_truth_file(prefix + "_truth.jsonl", sim.truth);
    std::cerr << "info: wrote " << prefix << "_frames.jsonl ("
              << sim.frames.size() << " frames, " << sim.truth.size()
              << " targets)\n";
  }
  return 0;
}

int cmd_evaluate(const deixis::RunConfig& cfg, const std::string& events_path,
                 const std::string& truth_path, const std::string& grid_spec,
                 double min_accuracy, const std::string& out_prefix) {
  deixis::RunConfig local = cfg;
  if (!grid_spec.empty())
    parse_grid(grid_spec, local.grid_rows, local.grid_cols);

  const auto events = deixis::read_events_file(events_path);
  const auto truth = deixis::read_truth_file(truth_path);
  const auto records = deixis::match_trials(events, truth);
  const auto matrix = deixis::build_confusion(
      records, local.grid_rows * local.grid_cols);
  const deixis::Report report = deixis::render_report(matrix, records);

  std::cout << report.text;
  {
    std::ofstream txt(out_prefix + ".txt");
    std::ofstream csv(out_prefix + ".csv");
    if (!txt || !csv)
      throw deixis::IoError("cannot write " + out_prefix + ".{txt,csv}");
    txt << report.text;
    csv << report.csv;
  }
  if (min_accuracy >= 0.0 && report.accuracy_pct < min_accuracy) {
    std::cerr << "error: accuracy " << report.accuracy_pct
              << " % below required " << min_accuracy << " %\n";
    return 1;
  }
  return 0;
}

int cmd_study(const deixis::RunConfig& cfg, std::uint64_t seed, int trials,
              double sigma, double angular_bias, bool serial,
              const std::string& out_dir) {
  deixis::StudyOptions opts;
  opts.seed = seed;
  opts.trials_per_condition = trials;
  opts.sigma_mm = sigma;
  opts.right_arm_angular_bias_rad = angular_bias;
  opts.parallel = !serial;
  const deixis::StudyResult result = deixis::run_study(cfg, opts);
  deixis::write_study_files(result, out_dir);
  std::cout << result.summary_text;
  std::cerr << "info: reports written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deixis: pointing-gesture recognition and board-target "
               "localization from skeleton joint streams"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")
      ->envname("DEIXIS_CONFIG");

  auto* replay_cmd =
      app.add_subcommand("replay", "process a recorded frame stream file");
  std::string input, trace_path, events_path;
  double speed = 0.0;
  replay_cmd->add_option("--input", input, "frame stream (.jsonl)")
      ->required();
  replay_cmd->add_option("--trace", trace_path,
                         "write per-sample CSV (t,r,drdt,phase)");
  replay_cmd->add_option("--speed", speed,
                         "pacing factor; 0 = as fast as possible");
  replay_cmd->add_option("--events-out", events_path,
                         "events file (default: stdout)");

  auto* serve_cmd =
      app.add_subcommand("serve", "ingest frame streams over TCP");
  std::uint16_t ingest_port = 0;
  int events_port_opt = -1;
  double reset_gap = 1.0;
  serve_cmd->add_option("--ingest-port", ingest_port, "frames in")
      ->required();
  serve_cmd->add_option("--events-port", events_port_opt,
                        "publish events to subscribers");
  serve_cmd->add_option("--reset-gap", reset_gap,
                        "seconds a dropped stream's state survives");

  auto* sim_cmd =
      app.add_subcommand("simulate", "generate synthetic sessions");
  int participants = 1, targets = 0;
  std::string grid_spec, cells_list, arm, out_dir;
  double sigma = 15.0, hold_s = 2.0;
  std::uint64_t seed = 1;
  sim_cmd->add_option("--participants", participants);
  sim_cmd->add_option("--grid", grid_spec, "e.g. 2x3");
  sim_cmd->add_option("--sigma", sigma, "joint jitter sigma (mm)");
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--out", out_dir)->required();
  sim_cmd->add_option("--targets", targets,
                      "targets per session (default 10 per cell)");
  sim_cmd->add_option("--cells", cells_list, "explicit sequence, e.g. 1,4,6");
  sim_cmd->add_option("--arm", arm, "left|right");
  sim_cmd->add_option("--hold", hold_s, "hold seconds per target");

  auto* eval_cmd =
      app.add_subcommand("evaluate", "score an event stream against truth");
  std::string eval_events, eval_truth, eval_grid, out_prefix = "report";
  double min_accuracy = -1.0;
  eval_cmd->add_option("--events", eval_events)->required();
  eval_cmd->add_option("--truth", eval_truth)->required();
  eval_cmd->add_option("--grid", eval_grid, "override config grid");
  eval_cmd->add_option("--min-accuracy", min_accuracy,
                       "exit nonzero below this percentage");
  eval_cmd->add_option("--out-prefix", out_prefix);

  auto* study_cmd = app.add_subcommand(
      "study", "run the four {left,right} x {2x3,3x4} conditions");
  std::uint64_t study_seed = 7;
  int study_trials = 500;
  double study_sigma = 15.0, study_bias = 0.05;
  bool study_serial = false;
  std::string study_out;
  study_cmd->add_option("--seed", study_seed);
  study_cmd->add_option("--out", study_out)->required();
  study_cmd->add_option("--trials", study_trials, "per condition");
  study_cmd->add_option("--sigma", study_sigma);
  study_cmd->add_option("--angular-bias", study_bias,
                        "right-arm angular bias (rad)");
  study_cmd->add_flag("--serial", study_serial, "disable OpenMP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const deixis::RunConfig cfg = load(config_path);
    if (replay_cmd->parsed())
      return cmd_replay(cfg, input, speed, trace_path, events_path);
    if (serve_cmd->parsed())
      return cmd_serve(cfg, ingest_port,
                       events_port_opt >= 0
                           ? std::optional<std::uint16_t>(
                                 static_cast<std::uint16_t>(events_port_opt))
                           : std::nullopt,
                       reset_gap);
    if (sim_cmd->parsed())
      return cmd_simulate(cfg, participants, grid_spec, sigma, seed, out_dir,
                          targets, cells_list, arm, hold_s);
    if (eval_cmd->parsed())
      return cmd_evaluate(cfg, eval_events, eval_truth, eval_grid,
                          min_accuracy, out_prefix);
    if (study_cmd->parsed())
      return cmd_study(cfg, study_seed, study_trials, study_sigma, study_bias,
                       study_serial, study_out);
  } catch (const deixis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
