#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctxfuse/errors.hpp"
#include "ctxfuse/experiment.hpp"
#include "ctxfuse/fusion.hpp"
#include "ctxfuse/region_index.hpp"
#include "ctxfuse/report.hpp"
#include "ctxfuse/scenario_config.hpp"

namespace ctxfuse::cli {

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

double parse_number(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field + ": \"" + text + "\" is not a number");
  }
}

Point parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ParseError("point: expected \"x,y\", got \"" + text + "\"");
  return Point{parse_number(parts[0], "point.x"), parse_number(parts[1], "point.y")};
}

// Detections file: CSV rows "sensor,confidence[,type]"; optional header, '#' comments.
DetectionSet load_detections(const std::string& path, const Scenario& scenario) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open detections file " + path);
  DetectionSet z;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (fields.front() == "sensor") continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(where + ": expected \"sensor,confidence[,type]\"");
    }
    const auto& sensor = scenario.sensor(fields[0]);
    Detection d{sensor.id, parse_number(fields[1], where + " confidence"), std::nullopt};
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw ValidationError(where + " confidence: " + fields[1] + " outside [0,1]");
    }
    const bool has_type = fields.size() == 3 && !fields[2].empty();
    if (sensor.level == EvidenceLevel::Direct && !has_type) {
      throw ValidationError(where + ": direct sensor \"" + sensor.id + "\" needs a predicted type");
    }
    if (sensor.level == EvidenceLevel::Indicative && has_type) {
      throw ValidationError(where + ": indicative sensor \"" + sensor.id + "\" cannot predict a type");
    }
    if (has_type) d.predicted_type = scenario.type(fields[2]);
    try {
      z.add(std::move(d));
    } catch (const ContractViolation& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return z;
}

std::optional<RegionType> optional_region(const std::string& label, const Scenario& scenario) {
  if (label.empty()) return std::nullopt;
  return scenario.region(label);
}

Emission parse_emission(const std::string& name) {
  if (name == "one-per-sensor") return Emission::OnePerSensor;
  if (name == "bernoulli-pd") return Emission::BernoulliPd;
  throw ValidationError("emission: \"" + name + "\" (expected one-per-sensor or bernoulli-pd)");
}

Classifier parse_classifier(const std::string& name) {
  if (name == "proposed") return Classifier::Proposed;
  if (name == "baseline") return Classifier::Baseline;
  throw ValidationError("classifier: \"" + name + "\" (expected proposed or baseline)");
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot open output file " + path);
  file << content;
  file.flush();
  if (!file) throw OutputError("failed writing output file " + path);
}

struct CommonOptions {
  std::size_t runs = 10000;
  std::uint64_t seed = 42;
  std::string out;
  std::string emission = "one-per-sensor";
  int threads = 0;
};

void add_common(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--runs", opts.runs, "Monte Carlo runs per configuration")->capture_default_str();
  cmd.add_option("--seed", opts.seed, "master seed")->capture_default_str();
  cmd.add_option("--out", opts.out, "output CSV path (stdout if omitted)");
  cmd.add_option("--emission", opts.emission, "one-per-sensor | bernoulli-pd")->capture_default_str();
  cmd.add_option("--threads", opts.threads, "OpenMP threads (0 = runtime default)")->capture_default_str();
}

TrialConfig make_config(const Scenario& scenario, const CommonOptions& opts) {
  TrialConfig config{scenario};
  config.runs = opts.runs;
  config.seed = opts.seed;
  config.emission = parse_emission(opts.emission);
  return config;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Context-aware Bayesian threat-type classification and Monte Carlo evaluation"};
  app.require_subcommand(1);

  // classify
  std::string classify_scenario = "basic";
  std::string detections_path;
  std::string region_label;
  std::string position;
  std::string regions_path;
  std::string default_region;
  auto* classify = app.add_subcommand("classify", "posterior, MAP and baseline type for one object");
  classify->add_option("--scenario", classify_scenario, "built-in name or scenario file")->capture_default_str();
  classify->add_option("--detections", detections_path, "CSV of sensor,confidence[,type] (empty if omitted)");
  auto* region_opt = classify->add_option("--region", region_label, "region label");
  auto* position_opt = classify->add_option("--position", position, "x,y resolved through --regions");
  classify->add_option("--regions", regions_path, "GeoJSON region file for --position");
  classify->add_option("--default-region", default_region, "region for uncovered positions");
  region_opt->excludes(position_opt);

  // experiment
  std::string experiment_scenarios = "basic,cbrne";
  std::string classifiers = "proposed,baseline";
  double clutter_rate = 0.0;
  CommonOptions experiment_opts;
  auto* experiment = app.add_subcommand("experiment", "classification results per scenario and method");
  experiment->add_option("--scenario", experiment_scenarios, "comma-separated built-in names or files")
      ->capture_default_str();
  experiment->add_option("--classifiers", classifiers, "comma-separated: proposed, baseline")->capture_default_str();
  experiment->add_option("--clutter", clutter_rate, "clutter rate lambda")->capture_default_str();
  add_common(*experiment, experiment_opts);

  // sweep
  std::string sweep_kind;
  std::string sweep_scenario = "basic";
  std::vector<double> grid;
  CommonOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "ablation sweep over sensors, clutter or prior perturbation");
  sweep_cmd->add_option("kind", sweep_kind, "sensors | clutter | prior")->required();
  sweep_cmd->add_option("--scenario", sweep_scenario, "built-in name or scenario file")->capture_default_str();
  sweep_cmd->add_option("--grid", grid, "comma-separated grid values")->delimiter(',');
  add_common(*sweep_cmd, sweep_opts);

  // label
  std::string label_scenario = "cbrne";
  std::string label_regions;
  std::string label_point;
  std::string label_default;
  auto* label = app.add_subcommand("label", "resolve a position to its region type");
  label->add_option("--scenario", label_scenario, "built-in name or scenario file")->capture_default_str();
  label->add_option("--regions", label_regions, "GeoJSON region file")->required();
  label->add_option("--point", label_point, "x,y")->required();
  label->add_option("--default-region", label_default, "region for uncovered points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*classify) {
      const auto file = resolve_scenario(classify_scenario);
      const auto& scenario = file.scenario;
      RegionType region;
      if (!region_label.empty()) {
        region = scenario.region(region_label);
      } else if (!position.empty()) {
        if (regions_path.empty()) {
          err << "error: --position requires --regions\n";
          return kUsage;
        }
        const auto index = load_region_file(regions_path, scenario, file.aliases,
                                            optional_region(default_region, scenario));
        region = index.lookup(parse_point(position));
      } else {
        err << "error: classify needs --region or --position\n";
        return kUsage;
      }
      const auto z = detections_path.empty() ? DetectionSet{} : load_detections(detections_path, scenario);
      const auto result = map_classify(z, region, scenario);
      const auto baseline = baseline_classify(z, region, scenario);
      out << "region " << scenario.label(region) << "\n";
      for (std::size_t t = 0; t < scenario.num_types(); ++t) {
        out << scenario.type_labels()[t] << " " << format_metric(result.posterior.probs[t]) << "\n";
      }
      out << "map " << scenario.label(result.type) << "\n";
      out << "baseline " << scenario.label(baseline) << "\n";
      return kOk;
    }

    if (*experiment) {
      std::vector<Classifier> methods;
      for (const auto& name : split(classifiers, ',')) methods.push_back(parse_classifier(name));
      std::vector<ExperimentRow> rows;
      for (const auto& name : split(experiment_scenarios, ',')) {
        auto config = make_config(resolve_scenario(name).scenario, experiment_opts);
        config.clutter_rate = clutter_rate;
        auto scenario_rows = run_experiment(config, methods, experiment_opts.threads);
        rows.insert(rows.end(), scenario_rows.begin(), scenario_rows.end());
      }
      std::ostringstream csv;
      write_experiment_csv(csv, rows);
      emit(csv.str(), experiment_opts.out, out);
      return kOk;
    }

    if (*sweep_cmd) {
      const auto kind = parse_sweep_kind(sweep_kind);
      const auto config = make_config(resolve_scenario(sweep_scenario).scenario, sweep_opts);
      if (grid.empty()) grid = default_grid(kind, config.scenario);
      const auto table = sweep(kind, config, grid, sweep_opts.threads);
      std::ostringstream csv;
      write_sweep_csv(csv, table);
      emit(csv.str(), sweep_opts.out, out);
      return kOk;
    }

    if (*label) {
      const auto file = resolve_scenario(label_scenario);
      const auto index = load_region_file(label_regions, file.scenario, file.aliases,
                                          optional_region(label_default, file.scenario));
      out << file.scenario.label(index.lookup(parse_point(label_point))) << "\n";
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace ctxfuse::cli
