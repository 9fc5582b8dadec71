// Compares the serial reference trial runner against the OpenMP kernel and
// checks they produce identical records.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "deixis/trials.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  int trials = 200;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--trials") == 0 && i + 1 < argc)
      trials = std::atoi(argv[++i]);

  deixis::TrialPlan plan;
  plan.config = deixis::default_config();
  plan.config.noise.jitter_sigma_mm = 15.0;
  plan.config.noise.seed = 99;
  plan.arm = deixis::Arm::Right;
  plan.trials = trials;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP not enabled)\n");
#endif

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = deixis::run_trials_serial(plan);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = deixis::run_trials_parallel(plan);
  const double t_parallel = seconds_since(t0);

  bool identical = serial.size() == parallel.size();
  for (size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i].intended_cell == parallel[i].intended_cell &&
                serial[i].detection == parallel[i].detection &&
                serial[i].detected_cell == parallel[i].detected_cell;

  std::printf("trials:   %d\n", trials);
  std::printf("serial:   %.3f s (%.1f trials/s)\n", t_serial,
              trials / t_serial);
  std::printf("parallel: %.3f s (%.1f trials/s)\n", t_parallel,
              trials / t_parallel);
  std::printf("speedup:  %.2fx\n", t_serial / t_parallel);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
