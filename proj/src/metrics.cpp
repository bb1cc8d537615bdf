#include "ctxfuse/metrics.hpp"

#include <numeric>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t num_types) : n_(num_types), counts_(num_types * num_types, 0) {
  if (num_types == 0) throw ContractViolation("confusion matrix needs at least one type");
}

void ConfusionMatrix::add(ThreatType truth, ThreatType predicted) {
  if (truth.index >= n_ || predicted.index >= n_) throw ContractViolation("type index out of range");
  ++counts_[truth.index * n_ + predicted.index];
  ++total_;
}

std::uint64_t ConfusionMatrix::count(ThreatType truth, ThreatType predicted) const {
  if (truth.index >= n_ || predicted.index >= n_) throw ContractViolation("type index out of range");
  return counts_[truth.index * n_ + predicted.index];
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n_; ++i) sum += counts_[i * n_ + i];
  return sum;
}

std::uint64_t ConfusionMatrix::row_sum(ThreatType truth) const {
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < n_; ++j) sum += count(truth, ThreatType{j});
  return sum;
}

std::uint64_t ConfusionMatrix::column_sum(ThreatType predicted) const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n_; ++i) sum += count(ThreatType{i}, predicted);
  return sum;
}

ConfusionMatrix confusion(std::span<const TrialRecord> records, std::size_t num_types) {
  if (records.empty()) throw ContractViolation("confusion matrix of an empty record list");
  ConfusionMatrix cm(num_types);
  for (const auto& r : records) cm.add(r.true_type, r.predicted_type);
  return cm;
}

MetricsReport report(const ConfusionMatrix& cm) {
  MetricsReport out;
  const auto n = cm.num_types();
  out.accuracy = ratio(static_cast<double>(cm.trace()), static_cast<double>(cm.total()));
  for (std::size_t t = 0; t < n; ++t) {
    const ThreatType type{t};
    const auto tp = static_cast<double>(cm.count(type, type));
    const double precision = ratio(tp, static_cast<double>(cm.column_sum(type)));
    const double recall = ratio(tp, static_cast<double>(cm.row_sum(type)));
    out.per_class_precision.push_back(precision);
    out.per_class_recall.push_back(recall);
    out.per_class_f1.push_back(ratio(2.0 * precision * recall, precision + recall));
  }
  out.macro_precision = mean(out.per_class_precision);
  out.macro_recall = mean(out.per_class_recall);
  out.macro_f1 = mean(out.per_class_f1);
  return out;
}

double accuracy(std::span<const TrialRecord> records) {
  if (records.empty()) throw ContractViolation("accuracy of an empty record list");
  std::size_t hits = 0;
  for (const auto& r : records) hits += r.true_type == r.predicted_type ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

}  // namespace ctxfuse
