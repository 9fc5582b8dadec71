// Acceptance suite: each check prints one PASS/FAIL line; the process exits
// nonzero if any check fails.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "deixis/config.hpp"
#include "deixis/engine.hpp"
#include "deixis/eval.hpp"
#include "deixis/net.hpp"
#include "deixis/replay.hpp"
#include "deixis/simulator.hpp"
#include "deixis/study.hpp"
#include "deixis/trials.hpp"

using namespace deixis;

namespace {

constexpr double kDt = 1.0 / 30.0;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// --- geometry oracle ------------------------------------------------------

struct OracleRoot {
  bool found = false;
  Point3 point;
};

OracleRoot oracle_intersect(const PointingRay& ray, const Plane& plane) {
  const Vec3 d = ray.hand - ray.elbow;
  auto f = [&](double t) {
    return (ray.hand + t * d - plane.point).dot(plane.normal);
  };
  const double bound = 2.0 * std::abs(f(0.0)) / (d.norm() * 1e-3) + 1.0;
  const int steps = 2048;
  OracleRoot out;
  double lo = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double hi = bound * static_cast<double>(i) / steps;
    if (f(lo) * f(hi) <= 0.0) {
      double a = lo, b = hi;
      for (int it = 0; it < 200; ++it) {
        const double mid = (a + b) / 2.0;
        if (f(a) * f(mid) <= 0.0)
          b = mid;
        else
          a = mid;
      }
      const double root = (a + b) / 2.0;
      if (root <= 0.0) return out;
      out.found = true;
      out.point = ray.hand + root * d;
      return out;
    }
    lo = hi;
  }
  return out;
}

bool criterion_geometry_oracle(std::string& detail) {
  const double t0 = now_s();
  std::mt19937 rng(2025);
  std::uniform_real_distribution<double> u(-3000.0, 3000.0);
  std::normal_distribution<double> g(0.0, 1.0);
  int checked = 0, hits = 0, misses = 0;
  for (int i = 0; i < 1000; ++i) {
    const Plane plane = make_plane(Point3{u(rng), u(rng), u(rng)},
                                   Vec3{g(rng), g(rng), g(rng)});
    Vec3 dir = Vec3{g(rng), g(rng), g(rng)}.normalized();
    if (std::abs(dir.dot(plane.normal)) < 1e-3) {
      --i;
      continue;
    }
    const Point3 hand{u(rng), u(rng), u(rng)};
    const PointingRay ray{hand - 300.0 * dir, hand};
    const RayPlaneHit hit = intersect_ray_plane(ray, plane);
    const OracleRoot root = oracle_intersect(ray, plane);
    if (hit.ok() != root.found) {
      detail = "status mismatch vs oracle";
      return false;
    }
    if (hit.ok()) {
      if ((hit.point - root.point).norm() >= 1e-6) {
        detail = "intersection off the oracle root by more than 1e-6 mm";
        return false;
      }
      ++hits;
    } else {
      if (hit.status != RayPlaneStatus::Parallel &&
          hit.status != RayPlaneStatus::PointsAway) {
        detail = "unexpected status";
        return false;
      }
      ++misses;
    }
    ++checked;
  }
  const double elapsed = now_s() - t0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d pairs (%d hits, %d rejections) in %.3f s", checked, hits,
                misses, elapsed);
  detail = buf;
  return checked == 1000 && hits > 0 && misses > 0 && elapsed < 1.0;
}

bool criterion_transforms(std::string& detail) {
  std::mt19937 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-5000.0, 5000.0);

  auto random_quat = [&] {
    Quat q{g(rng), g(rng), g(rng), g(rng)};
    const double n = q.norm();
    return Quat{q.w / n, q.x / n, q.y / n, q.z / n};
  };
  auto random_transform = [&] {
    RigidTransform t;
    t.rotation = rotation_from_quaternion(random_quat());
    t.translation = {u(rng), u(rng), u(rng)};
    t.from_frame = "a";
    t.to_frame = "b";
    return t;
  };

  // invert(apply) round trip on 1000 points
  for (int k = 0; k < 10; ++k) {
    const RigidTransform t = random_transform();
    const RigidTransform inv = invert(t);
    for (int i = 0; i < 100; ++i) {
      const Point3 p{u(rng), u(rng), u(rng)};
      if ((apply(inv, apply(t, p)) - p).norm() >= 1e-9) {
        detail = "round trip above 1e-9 mm";
        return false;
      }
    }
  }

  // double cover
  for (int i = 0; i < 200; ++i) {
    const Quat q = random_quat();
    const Mat3 a = rotation_from_quaternion(q);
    const Mat3 b = rotation_from_quaternion(Quat{-q.w, -q.x, -q.y, -q.z});
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (std::abs(a.m[r][c] - b.m[r][c]) > 1e-15) {
          detail = "double cover violated";
          return false;
        }
  }

  // rigid-motion invariance of the intersection, 1000 cases
  int invariant_cases = 0;
  while (invariant_cases < 1000) {
    const Plane plane = make_plane(Point3{u(rng), u(rng), u(rng)},
                                   Vec3{g(rng), g(rng), g(rng)});
    Vec3 dir = Vec3{g(rng), g(rng), g(rng)}.normalized();
    if (std::abs(dir.dot(plane.normal)) < 1e-3) continue;
    const Point3 hand{u(rng), u(rng), u(rng)};
    const PointingRay ray{hand - 300.0 * dir, hand};
    const RayPlaneHit base = intersect_ray_plane(ray, plane);
    if (!base.ok()) continue;
    const RigidTransform t = random_transform();
    const RayPlaneHit moved =
        intersect_ray_plane(apply(t, ray), apply(t, plane));
    if (!moved.ok() || (moved.point - apply(t, base.point)).norm() >= 1e-6) {
      detail = "intersection not invariant under rigid motion";
      return false;
    }
    ++invariant_cases;
  }
  detail = "round trips, double cover, 1000 invariance cases";
  return true;
}

bool criterion_grid_partition(std::string& detail) {
  const BoardModel board = make_default_board(1910.0, 1290.0, 1000.0);

  auto scan = [](const Point2& p, const GridSpec& g) -> std::optional<int> {
    if (!(p.u >= 0.0 && p.u <= g.width_mm && p.v >= 0.0 &&
          p.v <= g.height_mm))
      return std::nullopt;
    for (size_t i = 0; i < g.cell_bounds.size(); ++i) {
      const CellBounds& b = g.cell_bounds[i];
      const int row = static_cast<int>(i) / g.cols;
      const int col = static_cast<int>(i) % g.cols;
      const bool u_ok =
          p.u >= b.u_min &&
          (p.u < b.u_max || (col == g.cols - 1 && p.u <= b.u_max));
      const bool v_ok =
          p.v >= b.v_min &&
          (p.v < b.v_max || (row == g.rows - 1 && p.v <= b.v_max));
      if (u_ok && v_ok) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
  };

  long disagreements = 0;
  long checked = 0;
  for (auto [rows, cols] : {std::pair{2, 3}, {3, 4}}) {
    const GridSpec g = build_grid(board, rows, cols);

    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> du(-50.0, 1960.0);
    std::uniform_real_distribution<double> dv(-50.0, 1340.0);
    for (int i = 0; i < 100000; ++i) {
      const Point2 p{du(rng), dv(rng)};
      if (classify(p, g).cell != scan(p, g)) ++disagreements;
      ++checked;
    }

#pragma omp parallel for reduction(+ : disagreements, checked)
    for (int iu = 0; iu <= 1910; ++iu) {
      for (int iv = 0; iv <= 1290; ++iv) {
        const Point2 p{static_cast<double>(iu), static_cast<double>(iv)};
        if (classify(p, g).cell != scan(p, g)) ++disagreements;
        ++checked;
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%ld points, %ld disagreements", checked,
                disagreements);
  detail = buf;
  return disagreements == 0;
}

bool criterion_stabilization(std::string& detail) {
  RunConfig cfg = default_config();
  cfg.noise.jitter_sigma_mm = 0.0;
  const GridSpec grid = cfg.grid();

  SessionScript script;
  script.target_cells = {1, 4, 6};
  script.arm = Arm::Right;
  const SimResult sim =
      simulate_session(cfg.participant, script, cfg.noise, cfg.board, grid);

  EngineSetup setup = cfg.engine_setup();
  setup.config.arm = ArmMode::Right;
  PointingEngine engine(setup);
  std::vector<PointingEvent> stable;
  for (const JointFrame& f : sim.frames)
    for (const PointingEvent& ev : engine.step(f))
      if (ev.stable) stable.push_back(ev);

  if (stable.size() != script.target_cells.size()) {
    detail = "expected one stable event per target, got " +
             std::to_string(stable.size());
    return false;
  }
  const double seg = cfg.noise.settle_time_s + script.hold_s;
  double worst = 0.0;
  for (size_t i = 0; i < stable.size(); ++i) {
    if (stable[i].cell != script.target_cells[i]) {
      detail = "stable event hit the wrong cell";
      return false;
    }
    const double expected = static_cast<double>(i) * seg +
                            cfg.noise.settle_time_s +
                            setup.config.stable_dwell_s;
    const double err = std::abs(stable[i].t - expected);
    worst = std::max(worst, err);
    if (err > kDt + 1e-9) {
      detail = "stable event " + std::to_string(i) + " off by " +
               std::to_string(err) + " s";
      return false;
    }
  }

  // High jitter: no stable events over 60 s.
  RunConfig noisy = cfg;
  noisy.noise.jitter_sigma_mm = 200.0;
  noisy.noise.seed = 17;
  SessionScript long_script;
  const int targets = static_cast<int>(std::ceil(60.0 / seg));
  for (int i = 0; i < targets; ++i)
    long_script.target_cells.push_back(i % grid.cell_count() + 1);
  long_script.arm = Arm::Right;
  const SimResult noisy_sim = simulate_session(
      noisy.participant, long_script, noisy.noise, noisy.board, grid);
  PointingEngine noisy_engine(setup);
  long noisy_stable = 0;
  for (const JointFrame& f : noisy_sim.frames)
    for (const PointingEvent& ev : noisy_engine.step(f))
      if (ev.stable) ++noisy_stable;
  if (noisy_stable != 0) {
    detail = "sigma=200 mm produced " + std::to_string(noisy_stable) +
             " stable events in 60 s";
    return false;
  }

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "timing error <= %.4f s (tolerance %.4f), 0 events at "
                "sigma=200",
                worst, kDt);
  detail = buf;
  return true;
}

bool criterion_determinism(std::string& detail) {
  const std::string frames =
      std::string(DEIXIS_DATA_DIR) + "/golden_frames.jsonl";
  const std::string golden =
      std::string(DEIXIS_DATA_DIR) + "/golden_events.jsonl";
  RunConfig cfg = default_config();
  cfg.engine.arm = ArmMode::Right;

  std::ostringstream a, b;
  run_replay(cfg, frames, 0.0, a);
  run_replay(cfg, frames, 0.0, b);
  if (a.str() != b.str()) {
    detail = "two batch replays differ";
    return false;
  }
  std::ifstream in(golden);
  if (!in) {
    detail = "missing " + golden;
    return false;
  }
  std::ostringstream expected;
  expected << in.rdbuf();
  if (a.str() != expected.str()) {
    detail = "replay output differs from the committed golden events";
    return false;
  }
  detail = "byte-identical across runs and against the committed file";
  return true;
}

bool criterion_trends(std::string& detail) {
  const double t0 = now_s();
  const RunConfig base = default_config();

  auto condition_accuracy = [&](int rows, int cols, Arm arm, double sigma,
                                double bias, std::uint64_t seed) {
    TrialPlan plan;
    plan.config = base;
    plan.config.grid_rows = rows;
    plan.config.grid_cols = cols;
    plan.config.noise.jitter_sigma_mm = sigma;
    plan.config.noise.right_arm_angular_bias_rad = bias;
    plan.config.noise.seed = seed;
    plan.arm = arm;
    plan.trials = 500;
    return accuracy(run_trials_parallel(plan));
  };

  // (a) no asymmetry: finer grids cannot do better
  const double a_l23 = condition_accuracy(2, 3, Arm::Left, 15.0, 0.0, 100);
  const double a_r23 = condition_accuracy(2, 3, Arm::Right, 15.0, 0.0, 200);
  const double a_l34 = condition_accuracy(3, 4, Arm::Left, 15.0, 0.0, 300);
  const double a_r34 = condition_accuracy(3, 4, Arm::Right, 15.0, 0.0, 400);
  if (a_l23 < a_l34 || a_r23 < a_r34) {
    detail = "coarse grid scored below fine grid";
    return false;
  }

  // (b) right-arm angular bias: left arm at least as accurate
  const double b_l23 = condition_accuracy(2, 3, Arm::Left, 15.0, 0.05, 500);
  const double b_r23 = condition_accuracy(2, 3, Arm::Right, 15.0, 0.05, 600);
  const double b_l34 = condition_accuracy(3, 4, Arm::Left, 15.0, 0.05, 700);
  const double b_r34 = condition_accuracy(3, 4, Arm::Right, 15.0, 0.05, 800);
  if (b_l23 < b_r23 || b_l34 < b_r34) {
    detail = "right arm with angular bias outperformed the left arm";
    return false;
  }

  // (c) zero noise is exact in all four conditions
  for (auto [rows, cols] : {std::pair{2, 3}, {3, 4}}) {
    for (Arm arm : {Arm::Left, Arm::Right}) {
      const double acc = condition_accuracy(rows, cols, arm, 0.0, 0.0, 900);
      if (acc != 100.0) {
        detail = "zero-noise accuracy below 100";
        return false;
      }
    }
  }

  const double elapsed = now_s() - t0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "sigma=15: 2x3 L/R %.2f/%.2f >= 3x4 L/R %.2f/%.2f; biased "
                "L/R 2x3 %.2f/%.2f 3x4 %.2f/%.2f; sigma=0 all 100.0; %.1f s",
                a_l23, a_r23, a_l34, a_r34, b_l23, b_r23, b_l34, b_r34,
                elapsed);
  detail = buf;
  return elapsed < 120.0;
}

bool criterion_accuracy_formula(std::string& detail) {
  std::vector<TrialRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back({1, Detection::Cell, 1});
  records.push_back({2, Detection::Cell, 3});
  records.push_back({4, Detection::None, 0});
  records.push_back({5, Detection::OutOfBoard, 0});
  const double acc = accuracy(records);
  if (std::abs(acc - 62.50) > 1e-12) {
    detail = "8-record fixture returned " + std::to_string(acc);
    return false;
  }

  const ConfusionMatrix m = build_confusion(records, 6);
  std::vector<long> per_cell(7, 0);
  for (const TrialRecord& r : records) ++per_cell[r.intended_cell];
  for (int row = 1; row <= 6; ++row)
    if (m.row_total(row) != per_cell[row]) {
      detail = "row totals do not match trial counts";
      return false;
    }

  const Report rep = render_report(m, records);
  std::istringstream csv(rep.csv);
  std::string line;
  std::getline(csv, line);
  std::map<int, double> row_sum;
  while (std::getline(csv, line)) {
    const size_t c1 = line.find(',');
    const size_t c3 = line.rfind(',');
    row_sum[std::stoi(line.substr(0, c1))] += std::stod(line.substr(c3 + 1));
  }
  for (const auto& [row, sum] : row_sum)
    if (per_cell[row] > 0 && std::abs(sum - 100.0) > 0.01) {
      detail = "row percentages sum to " + std::to_string(sum);
      return false;
    }
  detail = "62.50 on the fixture, row sums and percentages consistent";
  return true;
}

int connect_or_die(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (fd < 0 ||
      ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    throw IoError("acceptance client could not connect");
  return fd;
}

bool criterion_network(std::string& detail) {
  const std::string frames_path =
      std::string(DEIXIS_DATA_DIR) + "/golden_frames.jsonl";
  RunConfig cfg = default_config();
  cfg.engine.arm = ArmMode::Right;

  std::ostringstream batch;
  run_replay(cfg, frames_path, 0.0, batch);
  std::vector<std::string> expected;
  {
    std::istringstream in(batch.str());
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) expected.push_back(line);
  }

  ServeOptions opts;
  opts.events_to_stdout = false;
  IngestServer server(cfg, opts);
  std::mutex mutex;
  std::vector<std::string> got;
  server.set_event_sink([&](const std::string& l) {
    std::lock_guard lock(mutex);
    got.push_back(l);
  });
  server.start();

  std::ifstream in(frames_path);
  if (!in) {
    detail = "missing " + frames_path;
    return false;
  }
  std::string payload, line;
  int line_no = 0;
  while (std::getline(in, line)) {
    payload += line + "\n";
    if (++line_no == 5) payload += "@@malformed line@@\n";
  }
  const int fd = connect_or_die(server.ingest_port());
  size_t off = 0;
  while (off < payload.size()) {
    const ssize_t n =
        ::send(fd, payload.data() + off, payload.size() - off, 0);
    if (n <= 0) {
      detail = "send failed";
      return false;
    }
    off += static_cast<size_t>(n);
  }
  ::shutdown(fd, SHUT_WR);

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(30);
  size_t have = 0;
  while (std::chrono::steady_clock::now() < deadline) {
    {
      std::lock_guard lock(mutex);
      have = got.size();
    }
    if (have >= expected.size()) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ::close(fd);
  server.stop();

  std::lock_guard lock(mutex);
  if (got.size() != expected.size()) {
    detail = "expected " + std::to_string(expected.size()) + " events, got " +
             std::to_string(got.size());
    return false;
  }
  for (size_t i = 0; i < got.size(); ++i)
    if (got[i] != expected[i]) {
      detail = "event " + std::to_string(i) + " differs from batch replay";
      return false;
    }
  detail = std::to_string(got.size()) +
           " events identical to batch replay, malformed line survived";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"geometry oracle", criterion_geometry_oracle},
      {"transform suite", criterion_transforms},
      {"grid partition", criterion_grid_partition},
      {"stabilization", criterion_stabilization},
      {"end-to-end determinism", criterion_determinism},
      {"accuracy trends", criterion_trends},
      {"accuracy formula", criterion_accuracy_formula},
      {"network ingestion", criterion_network},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s — %s%s%s\n", ok ? "PASS" : "FAIL", c.name,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
