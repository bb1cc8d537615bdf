#pragma once

// CSV artifacts. Metric cells use six decimals, grid values up to nine significant
// digits; a type absent from a scenario leaves its per-class F1 cell empty.

#include <iosfwd>
#include <string>
#include <vector>

#include "ctxfuse/experiment.hpp"

namespace ctxfuse {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// method, scenario, accuracy, f1, then one per-class F1 column per type label
/// (A, B, C, D always present, further labels appended in first-seen order).
[[nodiscard]] std::vector<std::string> experiment_columns(const std::vector<ExperimentRow>& rows);

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_sweep_csv(std::ostream& out, const SweepTable& table);

[[nodiscard]] CsvTable read_csv(std::istream& in);

[[nodiscard]] std::string format_metric(double value);
[[nodiscard]] std::string format_grid_value(double value);

}  // namespace ctxfuse
