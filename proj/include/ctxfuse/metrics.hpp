#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctxfuse/simulation.hpp"

namespace ctxfuse {

/// Rows are true types, columns predicted types.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_types);

  void add(ThreatType truth, ThreatType predicted);

  [[nodiscard]] std::size_t num_types() const { return n_; }
  [[nodiscard]] std::uint64_t count(ThreatType truth, ThreatType predicted) const;
  [[nodiscard]] std::uint64_t total() const { return total_; }
  [[nodiscard]] std::uint64_t trace() const;
  [[nodiscard]] std::uint64_t row_sum(ThreatType truth) const;
  [[nodiscard]] std::uint64_t column_sum(ThreatType predicted) const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> per_class_precision;
  std::vector<double> per_class_recall;
  std::vector<double> per_class_f1;
};

/// Throws ContractViolation on an empty record list.
[[nodiscard]] ConfusionMatrix confusion(std::span<const TrialRecord> records, std::size_t num_types);

/// Precision, recall and F1 are 0 wherever their denominator is 0.
[[nodiscard]] MetricsReport report(const ConfusionMatrix& cm);

[[nodiscard]] double accuracy(std::span<const TrialRecord> records);

}  // namespace ctxfuse
