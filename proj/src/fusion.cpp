#include "ctxfuse/fusion.hpp"

#include <algorithm>
#include <numeric>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

double marginal(double confidence, double pd) {
  return confidence * pd + (1.0 - confidence) * (1.0 - pd);
}

void check_common(const Detection& detection, const SensorModel& sensor, ThreatType t) {
  if (detection.sensor_id != sensor.id) {
    throw ContractViolation("detection from \"" + detection.sensor_id +
                            "\" evaluated against sensor \"" + sensor.id + "\"");
  }
  if (t.index >= sensor.detection_prior.size()) {
    throw ContractViolation("threat type index out of range for sensor \"" + sensor.id + "\"");
  }
}

double normalize(std::span<double> scores) {
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (!(total > 0.0)) return total;
  for (auto& s : scores) s /= total;
  return total;
}

}  // namespace

double direct_likelihood(const Detection& detection, const SensorModel& sensor, ThreatType t) {
  check_common(detection, sensor, t);
  if (sensor.level != EvidenceLevel::Direct) {
    throw ContractViolation("sensor \"" + sensor.id + "\" is indicative, direct likelihood requested");
  }
  if (!detection.predicted_type) {
    throw ContractViolation("direct detection from \"" + sensor.id + "\" has no predicted type");
  }
  const double pd = sensor.detection_prior[t.index];
  const double pi = detection.confidence;
  if (t == *detection.predicted_type) return marginal(pi, pd);
  return (1.0 - pi) * (1.0 - pd);
}

double indicative_likelihood(const Detection& detection, const SensorModel& sensor, ThreatType t) {
  check_common(detection, sensor, t);
  if (sensor.level != EvidenceLevel::Indicative) {
    throw ContractViolation("sensor \"" + sensor.id + "\" is direct, indicative likelihood requested");
  }
  if (detection.predicted_type) {
    throw ContractViolation("indicative detection from \"" + sensor.id + "\" carries a predicted type");
  }
  return marginal(detection.confidence, sensor.detection_prior[t.index]);
}

double sensor_likelihood(const Detection& detection, const SensorModel& sensor, ThreatType t) {
  return sensor.level == EvidenceLevel::Direct ? direct_likelihood(detection, sensor, t)
                                               : indicative_likelihood(detection, sensor, t);
}

double joint_likelihood(const DetectionSet& z, ThreatType t, const Scenario& scenario) {
  double product = 1.0;
  for (const auto& d : z) product *= sensor_likelihood(d, scenario.sensor(d.sensor_id), t);
  return product;
}

void unnormalized_scores(const DetectionSet& z, RegionType r, const Scenario& scenario,
                         std::span<double> out) {
  const auto& prior = scenario.prior_row(r);
  if (out.size() != prior.size()) throw ContractViolation("score buffer size mismatch");
  std::copy(prior.begin(), prior.end(), out.begin());
  for (const auto& d : z) {
    const auto& sensor = scenario.sensor(d.sensor_id);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] *= sensor_likelihood(d, sensor, ThreatType{t});
  }
}

Posterior posterior(const DetectionSet& z, RegionType r, const Scenario& scenario) {
  Posterior p{std::vector<double>(scenario.num_types())};
  unnormalized_scores(z, r, scenario, p.probs);
  if (!(normalize(p.probs) > 0.0)) {
    throw DegenerateEvidenceError("posterior normalizer is zero in region \"" + scenario.label(r) +
                                  "\" with " + std::to_string(z.size()) + " detection(s)");
  }
  return p;
}

ThreatType argmax_type(std::span<const double> scores) {
  if (scores.empty()) throw ContractViolation("argmax over empty score vector");
  std::size_t best = 0;
  for (std::size_t t = 1; t < scores.size(); ++t) {
    if (scores[t] > scores[best]) best = t;
  }
  return ThreatType{best};
}

Classification map_classify(const DetectionSet& z, RegionType r, const Scenario& scenario) {
  auto p = posterior(z, r, scenario);
  const auto type = argmax_type(p.probs);
  return Classification{type, std::move(p)};
}

Posterior sensor_posterior(const Detection& detection, RegionType r, const Scenario& scenario) {
  const auto& sensor = scenario.sensor(detection.sensor_id);
  Posterior p{scenario.prior_row(r)};
  for (std::size_t t = 0; t < p.probs.size(); ++t) {
    p.probs[t] *= sensor_likelihood(detection, sensor, ThreatType{t});
  }
  if (!(normalize(p.probs) > 0.0)) {
    throw DegenerateEvidenceError("per-sensor posterior normalizer is zero for sensor \"" +
                                  sensor.id + "\" in region \"" + scenario.label(r) + "\"");
  }
  return p;
}

ThreatType baseline_classify(const DetectionSet& z, RegionType r, const Scenario& scenario) {
  if (z.empty()) return argmax_type(scenario.prior_row(r));

  const auto nt = scenario.num_types();
  std::vector<std::size_t> votes(nt, 0);
  std::vector<double> strongest(nt, -1.0);
  for (const auto& d : z) {
    const auto p = sensor_posterior(d, r, scenario);
    const auto vote = argmax_type(p.probs);
    ++votes[vote.index];
    strongest[vote.index] = std::max(strongest[vote.index], p.probs[vote.index]);
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t < nt; ++t) {
    if (votes[t] > votes[best] || (votes[t] == votes[best] && strongest[t] > strongest[best])) {
      best = t;
    }
  }
  return ThreatType{best};
}

}  // namespace ctxfuse
