#include "ctxfuse/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += '"' + item + '"';
  }
  return out;
}

std::string fmt_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_unique(const std::vector<std::string>& labels, std::string_view field) {
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw ValidationError(std::string(field) + ": empty label");
    if (!seen.insert(label).second) {
      throw ValidationError(std::string(field) + ": duplicate label \"" + label + "\"");
    }
  }
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view to_string(EvidenceLevel level) {
  return level == EvidenceLevel::Direct ? "direct" : "indicative";
}

DetectionSet::DetectionSet(std::initializer_list<Detection> detections) {
  for (const auto& d : detections) add(d);
}

void DetectionSet::add(Detection detection) {
  if (!is_probability(detection.confidence)) {
    throw ContractViolation("detection from \"" + detection.sensor_id + "\": confidence " +
                            fmt_value(detection.confidence) + " outside [0,1]");
  }
  const bool duplicate = std::any_of(detections_.begin(), detections_.end(), [&](const Detection& d) {
    return d.sensor_id == detection.sensor_id;
  });
  if (duplicate) {
    throw ContractViolation("sensor \"" + detection.sensor_id + "\" already contributed a detection");
  }
  detections_.push_back(std::move(detection));
}

Scenario::Scenario(std::string name, std::vector<std::string> type_labels,
                   std::vector<std::string> region_labels, std::vector<SensorModel> sensors,
                   RegionalPrior regional_prior)
    : name_(std::move(name)),
      type_labels_(std::move(type_labels)),
      region_labels_(std::move(region_labels)),
      sensors_(std::move(sensors)),
      regional_prior_(std::move(regional_prior)) {
  if (type_labels_.empty()) throw ValidationError("types: at least one threat type required");
  if (region_labels_.empty()) throw ValidationError("regions: at least one region type required");
  require_unique(type_labels_, "types");
  require_unique(region_labels_, "regions");

  std::vector<std::string> ids;
  for (const auto& s : sensors_) ids.push_back(s.id);
  require_unique(ids, "sensor.id");

  const auto nt = type_labels_.size();
  for (const auto& s : sensors_) {
    if (s.detection_prior.size() != nt) {
      throw ValidationError("sensor \"" + s.id + "\".detection_prior: " +
                            std::to_string(s.detection_prior.size()) + " entries, expected " +
                            std::to_string(nt));
    }
    for (std::size_t t = 0; t < nt; ++t) {
      if (!is_probability(s.detection_prior[t])) {
        throw ValidationError("sensor \"" + s.id + "\".detection_prior[" + type_labels_[t] +
                              "]: " + fmt_value(s.detection_prior[t]) + " outside [0,1]");
      }
    }
  }

  if (regional_prior_.rows.size() != region_labels_.size()) {
    throw ValidationError("prior: " + std::to_string(regional_prior_.rows.size()) +
                          " rows, expected one per region (" +
                          std::to_string(region_labels_.size()) + ")");
  }
  for (std::size_t r = 0; r < region_labels_.size(); ++r) {
    const auto& row = regional_prior_.rows[r];
    const std::string field = "prior." + region_labels_[r];
    if (row.size() != nt) {
      throw ValidationError(field + ": " + std::to_string(row.size()) + " entries, expected " +
                            std::to_string(nt));
    }
    for (std::size_t t = 0; t < nt; ++t) {
      if (!is_probability(row[t])) {
        throw ValidationError(field + "[" + type_labels_[t] + "]: " + fmt_value(row[t]) +
                              " outside [0,1]");
      }
    }
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError(field + ": row sum " + fmt_value(sum) + " (expected 1)");
    }
  }
}

const std::string& Scenario::label(ThreatType t) const {
  if (t.index >= type_labels_.size()) throw ContractViolation("threat type index out of range");
  return type_labels_[t.index];
}

const std::string& Scenario::label(RegionType r) const {
  if (r.index >= region_labels_.size()) throw ContractViolation("region type index out of range");
  return region_labels_[r.index];
}

const std::vector<double>& Scenario::prior_row(RegionType r) const {
  if (r.index >= regional_prior_.rows.size()) {
    throw ContractViolation("region type index out of range");
  }
  return regional_prior_.rows[r.index];
}

ThreatType Scenario::type(std::string_view label) const {
  const auto it = std::find(type_labels_.begin(), type_labels_.end(), label);
  if (it == type_labels_.end()) {
    throw LookupError("unknown threat type \"" + std::string(label) + "\"; valid: " +
                      join(type_labels_));
  }
  return ThreatType{static_cast<std::size_t>(it - type_labels_.begin())};
}

std::optional<RegionType> Scenario::find_region(std::string_view label) const {
  const auto it = std::find(region_labels_.begin(), region_labels_.end(), label);
  if (it == region_labels_.end()) return std::nullopt;
  return RegionType{static_cast<std::size_t>(it - region_labels_.begin())};
}

RegionType Scenario::region(std::string_view label) const {
  if (auto r = find_region(label)) return *r;
  throw LookupError("unknown region type \"" + std::string(label) + "\"; valid: " +
                    join(region_labels_));
}

std::size_t Scenario::sensor_index(std::string_view id) const {
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    if (sensors_[i].id == id) return i;
  }
  std::vector<std::string> ids;
  for (const auto& s : sensors_) ids.push_back(s.id);
  throw LookupError("unknown sensor \"" + std::string(id) + "\"; valid: " + join(ids));
}

const SensorModel& Scenario::sensor(std::string_view id) const {
  return sensors_[sensor_index(id)];
}

Scenario Scenario::with_regional_prior(RegionalPrior prior) const {
  return Scenario(name_, type_labels_, region_labels_, sensors_, std::move(prior));
}

Scenario Scenario::with_sensors(std::vector<SensorModel> sensors) const {
  return Scenario(name_, type_labels_, region_labels_, std::move(sensors), regional_prior_);
}

}  // namespace ctxfuse
