#pragma once

// Context-aware Bayesian threat-type classification.
//
// Each detection contributes a per-type likelihood obtained by marginalising the
// true-detection hypothesis D over {0,1}:
//
//   indicative:  L(t) = pi * Pd(t) + (1 - pi) * (1 - Pd(t))
//   direct:      L(t) = pi * Pd(t) + (1 - pi) * (1 - Pd(t))   if t == predicted type
//                L(t) = (1 - pi) * (1 - Pd(t))                otherwise
//
// Detections are conditionally independent given t, so the joint likelihood is the
// product over sensors, and the posterior is P(t|r) * joint(t) normalised over t.
// All proportionality constants cancel in that single normalisation.

#include <span>
#include <vector>

#include "ctxfuse/types.hpp"

namespace ctxfuse {

/// Likelihood of a direct-evidence detection under type t.
/// Throws ContractViolation for an indicative sensor, a missing predicted type,
/// a detection from a different sensor or an out-of-range type.
[[nodiscard]] double direct_likelihood(const Detection& detection, const SensorModel& sensor,
                                       ThreatType t);

/// Likelihood of an indicative-evidence detection under type t.
[[nodiscard]] double indicative_likelihood(const Detection& detection, const SensorModel& sensor,
                                           ThreatType t);

/// Dispatches on the sensor's evidence level.
[[nodiscard]] double sensor_likelihood(const Detection& detection, const SensorModel& sensor,
                                       ThreatType t);

/// Product of per-detection likelihoods; 1 for an empty set.
/// Throws LookupError if a detection names a sensor the scenario does not have.
[[nodiscard]] double joint_likelihood(const DetectionSet& z, ThreatType t, const Scenario& scenario);

/// P(t|r) * joint_likelihood(z, t) for every t, written to `out` (size num_types).
void unnormalized_scores(const DetectionSet& z, RegionType r, const Scenario& scenario,
                         std::span<double> out);

/// Full posterior P(t|z,r). Throws DegenerateEvidenceError if every score is zero.
[[nodiscard]] Posterior posterior(const DetectionSet& z, RegionType r, const Scenario& scenario);

/// Index of the largest score; ties go to the lowest index.
[[nodiscard]] ThreatType argmax_type(std::span<const double> scores);

struct Classification {
  ThreatType type;
  Posterior posterior;
};

/// MAP type under the full posterior.
[[nodiscard]] Classification map_classify(const DetectionSet& z, RegionType r,
                                          const Scenario& scenario);

/// Late-fusion reference: MAP per sensor, then majority vote. Vote ties go to the
/// candidate backed by the largest single-sensor posterior value, then to the lowest
/// type index. An empty set falls back to the prior-only MAP.
[[nodiscard]] ThreatType baseline_classify(const DetectionSet& z, RegionType r,
                                           const Scenario& scenario);

/// Per-sensor posterior P(t|z_s,r) used by the baseline.
[[nodiscard]] Posterior sensor_posterior(const Detection& detection, RegionType r,
                                         const Scenario& scenario);

}  // namespace ctxfuse
