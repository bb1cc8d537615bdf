#pragma once

// Experiment drivers: per-scenario classification results and the three ablation
// sweeps. All variants at a grid point share the base seed, so they are evaluated
// on the same simulated objects.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxfuse/metrics.hpp"
#include "ctxfuse/simulation.hpp"

namespace ctxfuse {

struct ExperimentRow {
  std::string method;    // "Proposed" or "Baseline"
  std::string scenario;  // scenario name
  std::vector<std::string> type_labels;
  MetricsReport metrics;
};

[[nodiscard]] std::string_view method_name(Classifier classifier);

/// One row per classifier, in the order given.
[[nodiscard]] std::vector<ExperimentRow> run_experiment(const TrialConfig& base,
                                                        std::span<const Classifier> classifiers,
                                                        int threads = 0);

enum class SweepKind { Sensors, Clutter, Prior };

/// "sensors", "clutter" or "prior"; throws ValidationError otherwise.
[[nodiscard]] SweepKind parse_sweep_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(SweepKind kind);

struct SweepTable {
  std::string x_column;
  std::vector<std::string> variant_columns;
  std::vector<double> grid;
  std::vector<std::vector<double>> accuracy;  // [grid point][variant]
};

/// sensors: n_sensors | baseline_no_direct, baseline, proposed_no_direct, proposed
/// clutter: lambda    | baseline_strong, proposed_strong, baseline_weak, proposed_weak
/// prior:   mu        | baseline_all, proposed_contextual, proposed_sensor, proposed_all
[[nodiscard]] std::vector<std::string> sweep_columns(SweepKind kind);

/// sensors: integers in [0, N_S]; clutter: [0.001, 10]; prior: [0, 1]. Throws ValidationError.
void validate_grid(SweepKind kind, std::span<const double> grid, const Scenario& scenario);

/// 0..N_S; 13 log-spaced rates over [0.001, 10]; 0 plus 13 log-spaced factors over [0.001, 1].
[[nodiscard]] std::vector<double> default_grid(SweepKind kind, const Scenario& scenario);

/// Configurations evaluated at one grid point, aligned with sweep_columns(kind).
[[nodiscard]] std::vector<TrialConfig> sweep_variants(SweepKind kind, const TrialConfig& base, double x);

[[nodiscard]] SweepTable sweep(SweepKind kind, const TrialConfig& base, std::span<const double> grid,
                               int threads = 0);

}  // namespace ctxfuse
