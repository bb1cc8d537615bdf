#pragma once

// Monte Carlo evaluation harness.
//
// A run draws a region uniformly, a true type from P(t|region), a clutter count
// min(Poisson(lambda), |subset|), and one detection per selected sensor. Clutter
// detections take their confidence from the clutter Beta and, on direct sensors, a
// uniformly random predicted type; true detections use the true-confidence Beta and
// predict the true type. The classifier may see perturbed priors; generation always
// uses the scenario's own priors.
//
// Every run owns two generators seeded from (seed, run index): one for generation,
// one for prior perturbation. run_trials (OpenMP) and run_trials_serial therefore
// return identical records for any thread count.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctxfuse/fusion.hpp"
#include "ctxfuse/random.hpp"
#include "ctxfuse/types.hpp"

namespace ctxfuse {

struct ConfidenceModel {
  BetaParams true_confidence{8.0, 2.5};
  BetaParams clutter_confidence{2.5, 8.0};

  [[nodiscard]] static ConfidenceModel strong() { return {{8.0, 2.5}, {2.5, 8.0}}; }
  [[nodiscard]] static ConfidenceModel weak() { return {{5.0, 4.0}, {4.0, 5.0}}; }
  bool operator==(const ConfidenceModel&) const = default;
};

enum class Classifier { Proposed, Baseline };

enum class PerturbationTarget { None, All, Sensor, Contextual };

/// How true detections are emitted. OnePerSensor: every selected sensor reports.
/// BernoulliPd: a non-clutter sensor reports with probability P_D(s, true type).
enum class Emission { OnePerSensor, BernoulliPd };

struct Perturbation {
  double mu = 0.0;
  PerturbationTarget target = PerturbationTarget::None;
};

struct TrialConfig {
  Scenario scenario;
  std::optional<std::size_t> sensor_subset_size;
  double clutter_rate = 0.0;
  Perturbation perturbation;
  ConfidenceModel confidence = ConfidenceModel::strong();
  Classifier classifier = Classifier::Proposed;
  Emission emission = Emission::OnePerSensor;
  std::size_t runs = 10000;
  std::uint64_t seed = 42;
};

/// Throws ValidationError naming the offending field.
void validate(const TrialConfig& config);

struct TrialRecord {
  ThreatType true_type;
  RegionType region;
  ThreatType predicted_type;
  /// Probability the classifier assigns to the true type: the fused posterior for
  /// the proposed method, the mean per-sensor posterior for the baseline.
  double posterior_of_truth = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct ThreatObject {
  RegionType region;
  ThreatType type;
};

[[nodiscard]] ThreatObject generate_object(const Scenario& scenario, Rng& rng);

/// Same, with the region fixed.
[[nodiscard]] ThreatObject generate_object_in(const Scenario& scenario, RegionType region, Rng& rng);

[[nodiscard]] DetectionSet generate_detection_set(const Scenario& scenario, const ThreatObject& object,
                                                  std::span<const std::size_t> subset,
                                                  std::size_t n_clutter,
                                                  const ConfidenceModel& confidence, Rng& rng,
                                                  Emission emission = Emission::OnePerSensor);

[[nodiscard]] std::size_t draw_clutter_count(double lambda, std::size_t n_sensors, Rng& rng);

/// Each row becomes (1 - mu) * row + mu * u with a fresh flat Dirichlet draw u.
[[nodiscard]] RegionalPrior perturb_regional_prior(const RegionalPrior& prior, double mu, Rng& rng);

/// clip(pd + mu * v, 0, 1) with v ~ U(-1, 1).
[[nodiscard]] double perturb_sensor_prior(double pd, double mu, Rng& rng);

/// Scenario the classifier sees in one run.
[[nodiscard]] Scenario perturb_scenario(const Scenario& scenario, const Perturbation& perturbation,
                                        Rng& rng);

/// Every direct sensor replaced by an indicative one with the same detection prior.
[[nodiscard]] Scenario without_direct_evidence(const Scenario& scenario);

/// Classifies one detection set. Returns the predicted type and the probability of `truth`.
[[nodiscard]] std::pair<ThreatType, double> classify(Classifier classifier, const DetectionSet& z,
                                                     RegionType region, const Scenario& scenario,
                                                     ThreatType truth);

/// One Monte Carlo run; run_trials is this mapped over [0, runs).
[[nodiscard]] TrialRecord run_single_trial(const TrialConfig& config, std::uint64_t run);

/// OpenMP-parallel over runs; `threads` = 0 keeps the OpenMP default.
/// A degenerate-evidence error aborts with the lowest failing run index in the message.
[[nodiscard]] std::vector<TrialRecord> run_trials(const TrialConfig& config, int threads = 0);

/// Serial reference for run_trials.
[[nodiscard]] std::vector<TrialRecord> run_trials_serial(const TrialConfig& config);

struct ClassificationJob {
  DetectionSet detections;
  RegionType region;
};

/// MAP types for a batch of objects, OpenMP-parallel.
[[nodiscard]] std::vector<ThreatType> classify_batch(std::span<const ClassificationJob> jobs,
                                                     const Scenario& scenario, int threads = 0);

[[nodiscard]] std::vector<ThreatType> classify_batch_serial(std::span<const ClassificationJob> jobs,
                                                            const Scenario& scenario);

}  // namespace ctxfuse
