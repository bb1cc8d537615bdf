#include "ctxfuse/simulation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

// Substream tags for derive_seed.
constexpr std::uint64_t kGenerationStream = 0x67656e;  // "gen"
constexpr std::uint64_t kPerturbationStream = 0x707274;  // "prt"

bool perturbs_regional(PerturbationTarget target) {
  return target == PerturbationTarget::All || target == PerturbationTarget::Contextual;
}

bool perturbs_sensors(PerturbationTarget target) {
  return target == PerturbationTarget::All || target == PerturbationTarget::Sensor;
}

void check_beta(const BetaParams& p, const char* field) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
    throw ValidationError(std::string(field) + ": Beta(" + std::to_string(p.alpha) + ", " +
                          std::to_string(p.beta) + ") needs positive parameters");
  }
}

}  // namespace

void validate(const TrialConfig& config) {
  if (config.runs == 0) throw ValidationError("runs: must be positive");
  if (!(config.clutter_rate >= 0.0) || !std::isfinite(config.clutter_rate)) {
    throw ValidationError("clutter_rate: " + std::to_string(config.clutter_rate) + " must be >= 0");
  }
  if (!(config.perturbation.mu >= 0.0 && config.perturbation.mu <= 1.0)) {
    throw ValidationError("perturbation.mu: " + std::to_string(config.perturbation.mu) +
                          " outside [0,1]");
  }
  if (config.sensor_subset_size && *config.sensor_subset_size > config.scenario.num_sensors()) {
    throw ValidationError("sensor_subset_size: " + std::to_string(*config.sensor_subset_size) +
                          " exceeds the scenario's " + std::to_string(config.scenario.num_sensors()) +
                          " sensors");
  }
  check_beta(config.confidence.true_confidence, "confidence.true");
  check_beta(config.confidence.clutter_confidence, "confidence.clutter");
}

ThreatObject generate_object(const Scenario& scenario, Rng& rng) {
  const RegionType region{uniform_index(rng, scenario.num_regions())};
  return generate_object_in(scenario, region, rng);
}

ThreatObject generate_object_in(const Scenario& scenario, RegionType region, Rng& rng) {
  const ThreatType type{sample_categorical(rng, scenario.prior_row(region))};
  return ThreatObject{region, type};
}

DetectionSet generate_detection_set(const Scenario& scenario, const ThreatObject& object,
                                    std::span<const std::size_t> subset, std::size_t n_clutter,
                                    const ConfidenceModel& confidence, Rng& rng, Emission emission) {
  if (n_clutter > subset.size()) {
    throw ContractViolation("clutter count " + std::to_string(n_clutter) + " exceeds subset size " +
                            std::to_string(subset.size()));
  }
  std::vector<bool> is_clutter(subset.size(), false);
  for (auto pos : sample_without_replacement(rng, subset.size(), n_clutter)) is_clutter[pos] = true;

  DetectionSet z;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto& sensor = scenario.sensors().at(subset[i]);
    const bool direct = sensor.level == EvidenceLevel::Direct;
    Detection d;
    d.sensor_id = sensor.id;
    if (is_clutter[i]) {
      d.confidence = sample_beta(rng, confidence.clutter_confidence);
      if (direct) d.predicted_type = ThreatType{uniform_index(rng, scenario.num_types())};
    } else {
      if (emission == Emission::BernoulliPd &&
          !(uniform01(rng) < sensor.detection_prior[object.type.index])) {
        continue;
      }
      d.confidence = sample_beta(rng, confidence.true_confidence);
      if (direct) d.predicted_type = object.type;
    }
    z.add(std::move(d));
  }
  return z;
}

std::size_t draw_clutter_count(double lambda, std::size_t n_sensors, Rng& rng) {
  return sample_truncated_poisson(rng, lambda, n_sensors);
}

RegionalPrior perturb_regional_prior(const RegionalPrior& prior, double mu, Rng& rng) {
  RegionalPrior out = prior;
  for (auto& row : out.rows) {
    const auto u = sample_flat_dirichlet(rng, row.size());
    for (std::size_t t = 0; t < row.size(); ++t) row[t] = (1.0 - mu) * row[t] + mu * u[t];
  }
  return out;
}

double perturb_sensor_prior(double pd, double mu, Rng& rng) {
  const double v = uniform(rng, -1.0, 1.0);
  return std::clamp(pd + mu * v, 0.0, 1.0);
}

Scenario perturb_scenario(const Scenario& scenario, const Perturbation& perturbation, Rng& rng) {
  if (perturbation.target == PerturbationTarget::None) return scenario;
  auto prior = scenario.regional_prior();
  auto sensors = scenario.sensors();
  if (perturbs_regional(perturbation.target)) prior = perturb_regional_prior(prior, perturbation.mu, rng);
  if (perturbs_sensors(perturbation.target)) {
    for (auto& s : sensors) {
      for (auto& pd : s.detection_prior) pd = perturb_sensor_prior(pd, perturbation.mu, rng);
    }
  }
  return scenario.with_sensors(std::move(sensors)).with_regional_prior(std::move(prior));
}

Scenario without_direct_evidence(const Scenario& scenario) {
  auto sensors = scenario.sensors();
  for (auto& s : sensors) s.level = EvidenceLevel::Indicative;
  return scenario.with_sensors(std::move(sensors));
}

std::pair<ThreatType, double> classify(Classifier classifier, const DetectionSet& z, RegionType region,
                                       const Scenario& scenario, ThreatType truth) {
  if (classifier == Classifier::Proposed) {
    auto result = map_classify(z, region, scenario);
    return {result.type, result.posterior[truth]};
  }
  const auto type = baseline_classify(z, region, scenario);
  if (z.empty()) return {type, scenario.prior_row(region).at(truth.index)};
  double mean = 0.0;
  for (const auto& d : z) mean += sensor_posterior(d, region, scenario)[truth];
  return {type, mean / static_cast<double>(z.size())};
}

TrialRecord run_single_trial(const TrialConfig& config, std::uint64_t run) {
  const auto& scenario = config.scenario;
  auto gen = make_stream(config.seed, run, kGenerationStream);
  auto prt = make_stream(config.seed, run, kPerturbationStream);

  std::vector<std::size_t> subset;
  if (config.sensor_subset_size) {
    subset = sample_without_replacement(gen, scenario.num_sensors(), *config.sensor_subset_size);
  } else {
    subset.resize(scenario.num_sensors());
    std::iota(subset.begin(), subset.end(), std::size_t{0});
  }
  const auto object = generate_object(scenario, gen);
  const auto n_clutter = draw_clutter_count(config.clutter_rate, subset.size(), gen);
  const auto z =
      generate_detection_set(scenario, object, subset, n_clutter, config.confidence, gen, config.emission);

  const bool perturbed =
      config.perturbation.target != PerturbationTarget::None && config.perturbation.mu > 0.0;
  const auto [predicted, p_truth] =
      perturbed ? classify(config.classifier, z, object.region,
                           perturb_scenario(scenario, config.perturbation, prt), object.type)
                : classify(config.classifier, z, object.region, scenario, object.type);
  return TrialRecord{object.type, object.region, predicted, p_truth};
}

std::vector<TrialRecord> run_trials_serial(const TrialConfig& config) {
  validate(config);
  std::vector<TrialRecord> records;
  records.reserve(config.runs);
  for (std::uint64_t run = 0; run < config.runs; ++run) {
    try {
      records.push_back(run_single_trial(config, run));
    } catch (const DegenerateEvidenceError& e) {
      throw DegenerateEvidenceError("run " + std::to_string(run) + ": " + e.what());
    }
  }
  return records;
}

std::vector<TrialRecord> run_trials(const TrialConfig& config, int threads) {
  validate(config);
  std::vector<TrialRecord> records(config.runs);
  const auto n = static_cast<std::int64_t>(config.runs);
  std::int64_t failed_run = std::numeric_limits<std::int64_t>::max();
  std::exception_ptr failure;
  const int team = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(team)
  for (std::int64_t run = 0; run < n; ++run) {
    try {
      records[static_cast<std::size_t>(run)] = run_single_trial(config, static_cast<std::uint64_t>(run));
    } catch (...) {
#pragma omp critical(ctxfuse_trial_failure)
      if (run < failed_run) {
        failed_run = run;
        failure = std::current_exception();
      }
    }
  }

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const DegenerateEvidenceError& e) {
      throw DegenerateEvidenceError("run " + std::to_string(failed_run) + ": " + e.what());
    }
  }
  return records;
}

std::vector<ThreatType> classify_batch_serial(std::span<const ClassificationJob> jobs,
                                              const Scenario& scenario) {
  std::vector<ThreatType> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) out.push_back(map_classify(job.detections, job.region, scenario).type);
  return out;
}

std::vector<ThreatType> classify_batch(std::span<const ClassificationJob> jobs, const Scenario& scenario,
                                       int threads) {
  std::vector<ThreatType> out(jobs.size());
  const auto n = static_cast<std::int64_t>(jobs.size());
  std::int64_t failed = std::numeric_limits<std::int64_t>::max();
  std::exception_ptr failure;
  const int team = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(team)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& job = jobs[static_cast<std::size_t>(i)];
    try {
      out[static_cast<std::size_t>(i)] = map_classify(job.detections, job.region, scenario).type;
    } catch (...) {
#pragma omp critical(ctxfuse_batch_failure)
      if (i < failed) {
        failed = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ctxfuse
