#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctxfuse {

/// Ordinal of a threat type within a scenario's type list.
struct ThreatType {
  std::size_t index = 0;
  friend auto operator<=>(const ThreatType&, const ThreatType&) = default;
};

/// Ordinal of a region type within a scenario's region list.
struct RegionType {
  std::size_t index = 0;
  friend auto operator<=>(const RegionType&, const RegionType&) = default;
};

enum class EvidenceLevel { Direct, Indicative };

std::string_view to_string(EvidenceLevel level);

/// One sensor: evidence level plus the per-type detection probabilities P(D=1|t).
/// The detection priors are independent probabilities and need not sum to one.
struct SensorModel {
  std::string id;
  EvidenceLevel level = EvidenceLevel::Indicative;
  std::vector<double> detection_prior;

  bool operator==(const SensorModel&) const = default;
};

/// One sensor return. Direct sensors attach a predicted type, indicative sensors do not.
struct Detection {
  std::string sensor_id;
  double confidence = 0.0;
  std::optional<ThreatType> predicted_type;

  bool operator==(const Detection&) const = default;
};

/// All returns grouped to one object; at most one per sensor.
class DetectionSet {
 public:
  DetectionSet() = default;
  DetectionSet(std::initializer_list<Detection> detections);

  /// Throws ContractViolation if the sensor already contributed a detection
  /// or the confidence is outside [0,1].
  void add(Detection detection);

  [[nodiscard]] const std::vector<Detection>& detections() const { return detections_; }
  [[nodiscard]] std::size_t size() const { return detections_.size(); }
  [[nodiscard]] bool empty() const { return detections_.empty(); }
  [[nodiscard]] auto begin() const { return detections_.begin(); }
  [[nodiscard]] auto end() const { return detections_.end(); }

 private:
  std::vector<Detection> detections_;
};

/// P(t|r): one probability row over threat types per region type.
struct RegionalPrior {
  std::vector<std::vector<double>> rows;

  bool operator==(const RegionalPrior&) const = default;
};

struct Posterior {
  std::vector<double> probs;

  [[nodiscard]] double operator[](ThreatType t) const { return probs.at(t.index); }
};

/// Threat types, region types, sensors and regional priors. Immutable once built;
/// the constructor enforces every cross-field invariant and throws ValidationError.
class Scenario {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  Scenario(std::string name, std::vector<std::string> type_labels,
           std::vector<std::string> region_labels, std::vector<SensorModel> sensors,
           RegionalPrior regional_prior);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::size_t num_types() const { return type_labels_.size(); }
  [[nodiscard]] std::size_t num_regions() const { return region_labels_.size(); }
  [[nodiscard]] std::size_t num_sensors() const { return sensors_.size(); }

  [[nodiscard]] const std::vector<std::string>& type_labels() const { return type_labels_; }
  [[nodiscard]] const std::vector<std::string>& region_labels() const { return region_labels_; }
  [[nodiscard]] const std::vector<SensorModel>& sensors() const { return sensors_; }
  [[nodiscard]] const RegionalPrior& regional_prior() const { return regional_prior_; }

  [[nodiscard]] const std::string& label(ThreatType t) const;
  [[nodiscard]] const std::string& label(RegionType r) const;
  [[nodiscard]] const std::vector<double>& prior_row(RegionType r) const;

  /// Lookups by label/id; throw LookupError listing the valid values.
  [[nodiscard]] ThreatType type(std::string_view label) const;
  [[nodiscard]] RegionType region(std::string_view label) const;
  [[nodiscard]] const SensorModel& sensor(std::string_view id) const;
  [[nodiscard]] std::size_t sensor_index(std::string_view id) const;
  [[nodiscard]] std::optional<RegionType> find_region(std::string_view label) const;

  /// Copies with replaced priors (used for prior perturbation and ablations).
  [[nodiscard]] Scenario with_regional_prior(RegionalPrior prior) const;
  [[nodiscard]] Scenario with_sensors(std::vector<SensorModel> sensors) const;

  bool operator==(const Scenario&) const = default;

 private:
  std::string name_;
  std::vector<std::string> type_labels_;
  std::vector<std::string> region_labels_;
  std::vector<SensorModel> sensors_;
  RegionalPrior regional_prior_;
};

}  // namespace ctxfuse
