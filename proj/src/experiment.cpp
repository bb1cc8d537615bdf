#include "ctxfuse/experiment.hpp"

#include <cmath>
#include <sstream>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(std::pow(10.0, e));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

TrialConfig with_classifier(TrialConfig config, Classifier classifier) {
  config.classifier = classifier;
  return config;
}

}  // namespace

std::string_view method_name(Classifier classifier) {
  return classifier == Classifier::Proposed ? "Proposed" : "Baseline";
}

std::vector<ExperimentRow> run_experiment(const TrialConfig& base, std::span<const Classifier> classifiers,
                                          int threads) {
  std::vector<ExperimentRow> rows;
  for (auto classifier : classifiers) {
    const auto records = run_trials(with_classifier(base, classifier), threads);
    const auto cm = confusion(records, base.scenario.num_types());
    rows.push_back(ExperimentRow{std::string(method_name(classifier)), base.scenario.name(),
                                 base.scenario.type_labels(), report(cm)});
  }
  return rows;
}

SweepKind parse_sweep_kind(std::string_view name) {
  if (name == "sensors") return SweepKind::Sensors;
  if (name == "clutter") return SweepKind::Clutter;
  if (name == "prior") return SweepKind::Prior;
  throw ValidationError("sweep kind: \"" + std::string(name) +
                        "\" (expected \"sensors\", \"clutter\" or \"prior\")");
}

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Sensors: return "sensors";
    case SweepKind::Clutter: return "clutter";
    case SweepKind::Prior: return "prior";
  }
  return "";
}

std::vector<std::string> sweep_columns(SweepKind kind) {
  switch (kind) {
    case SweepKind::Sensors:
      return {"n_sensors", "baseline_no_direct", "baseline", "proposed_no_direct", "proposed"};
    case SweepKind::Clutter:
      return {"lambda", "baseline_strong", "proposed_strong", "baseline_weak", "proposed_weak"};
    case SweepKind::Prior:
      return {"mu", "baseline_all", "proposed_contextual", "proposed_sensor", "proposed_all"};
  }
  return {};
}

void validate_grid(SweepKind kind, std::span<const double> grid, const Scenario& scenario) {
  if (grid.empty()) throw ValidationError("grid: empty");
  for (double x : grid) {
    switch (kind) {
      case SweepKind::Sensors:
        if (!(x >= 0.0) || x > static_cast<double>(scenario.num_sensors()) || std::floor(x) != x) {
          throw ValidationError("grid: sensor count " + fmt(x) + " not an integer in [0, " +
                                std::to_string(scenario.num_sensors()) + "]");
        }
        break;
      case SweepKind::Clutter:
        if (!(x >= 0.001 && x <= 10.0)) {
          throw ValidationError("grid: clutter rate " + fmt(x) + " outside [0.001, 10]");
        }
        break;
      case SweepKind::Prior:
        if (!(x >= 0.0 && x <= 1.0)) {
          throw ValidationError("grid: perturbation factor " + fmt(x) + " outside [0, 1]");
        }
        break;
    }
  }
}

std::vector<double> default_grid(SweepKind kind, const Scenario& scenario) {
  switch (kind) {
    case SweepKind::Sensors: {
      std::vector<double> grid;
      for (std::size_t n = 0; n <= scenario.num_sensors(); ++n) grid.push_back(static_cast<double>(n));
      return grid;
    }
    case SweepKind::Clutter:
      return log_spaced(0.001, 10.0, 13);
    case SweepKind::Prior: {
      auto grid = log_spaced(0.001, 1.0, 13);
      grid.insert(grid.begin(), 0.0);
      return grid;
    }
  }
  return {};
}

std::vector<TrialConfig> sweep_variants(SweepKind kind, const TrialConfig& base, double x) {
  std::vector<TrialConfig> variants;
  switch (kind) {
    case SweepKind::Sensors: {
      TrialConfig with_direct = base;
      with_direct.sensor_subset_size = static_cast<std::size_t>(x);
      TrialConfig no_direct = with_direct;
      no_direct.scenario = without_direct_evidence(base.scenario);
      variants = {with_classifier(no_direct, Classifier::Baseline),
                  with_classifier(with_direct, Classifier::Baseline),
                  with_classifier(no_direct, Classifier::Proposed),
                  with_classifier(with_direct, Classifier::Proposed)};
      break;
    }
    case SweepKind::Clutter: {
      TrialConfig strong = base;
      strong.clutter_rate = x;
      strong.confidence = ConfidenceModel::strong();
      TrialConfig weak = strong;
      weak.confidence = ConfidenceModel::weak();
      variants = {with_classifier(strong, Classifier::Baseline), with_classifier(strong, Classifier::Proposed),
                  with_classifier(weak, Classifier::Baseline), with_classifier(weak, Classifier::Proposed)};
      break;
    }
    case SweepKind::Prior: {
      auto perturbed = [&](PerturbationTarget target, Classifier classifier) {
        TrialConfig c = with_classifier(base, classifier);
        c.perturbation = Perturbation{x, target};
        return c;
      };
      variants = {perturbed(PerturbationTarget::All, Classifier::Baseline),
                  perturbed(PerturbationTarget::Contextual, Classifier::Proposed),
                  perturbed(PerturbationTarget::Sensor, Classifier::Proposed),
                  perturbed(PerturbationTarget::All, Classifier::Proposed)};
      break;
    }
  }
  return variants;
}

SweepTable sweep(SweepKind kind, const TrialConfig& base, std::span<const double> grid, int threads) {
  validate_grid(kind, grid, base.scenario);
  validate(base);
  auto columns = sweep_columns(kind);
  SweepTable table;
  table.x_column = columns.front();
  table.variant_columns.assign(columns.begin() + 1, columns.end());
  table.grid.assign(grid.begin(), grid.end());
  for (double x : grid) {
    std::vector<double> row;
    for (const auto& config : sweep_variants(kind, base, x)) {
      row.push_back(accuracy(run_trials(config, threads)));
    }
    table.accuracy.push_back(std::move(row));
  }
  return table;
}

}  // namespace ctxfuse
