// Serial reference vs. OpenMP kernels: Monte Carlo runs and batch classification.
// Usage: bench_parallel [runs] [threads]

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "ctxfuse/scenario_config.hpp"
#include "ctxfuse/simulation.hpp"

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ctxfuse;
  const std::size_t runs = argc > 1 ? std::stoul(argv[1]) : 100000;
  const int threads = argc > 2 ? std::stoi(argv[2]) : omp_get_max_threads();

  TrialConfig config{builtin_scenario("basic")};
  config.runs = runs;
  config.clutter_rate = 1.0;

  std::vector<TrialRecord> serial, parallel;
  const double t_serial = time_ms([&] { serial = run_trials_serial(config); });
  const double t_parallel = time_ms([&] { parallel = run_trials(config, threads); });
  std::cout << "run_trials        runs=" << runs << " serial " << t_serial << " ms, omp(" << threads
            << ") " << t_parallel << " ms, speedup " << t_serial / t_parallel
            << (serial == parallel ? "" : "  MISMATCH") << "\n";

  std::vector<ClassificationJob> jobs;
  jobs.reserve(runs);
  auto rng = make_stream(config.seed, 0, 0);
  std::vector<std::size_t> all(config.scenario.num_sensors());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (std::size_t i = 0; i < runs; ++i) {
    const auto object = generate_object(config.scenario, rng);
    jobs.push_back({generate_detection_set(config.scenario, object, all, 0, config.confidence, rng),
                    object.region});
  }
  std::vector<ThreatType> a, b;
  const double c_serial = time_ms([&] { a = classify_batch_serial(jobs, config.scenario); });
  const double c_parallel = time_ms([&] { b = classify_batch(jobs, config.scenario, threads); });
  std::cout << "classify_batch    objects=" << runs << " serial " << c_serial << " ms, omp(" << threads
            << ") " << c_parallel << " ms, speedup " << c_serial / c_parallel
            << (a == b ? "" : "  MISMATCH") << "\n";
  return serial == parallel && a == b ? EXIT_SUCCESS : EXIT_FAILURE;
}
