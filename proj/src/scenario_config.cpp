#include "ctxfuse/scenario_config.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

const toml::table& require_table(const toml::table& root, std::string_view key) {
  const auto* node = root.get(key);
  if (node == nullptr) throw ValidationError(std::string(key) + ": missing section");
  const auto* table = node->as_table();
  if (table == nullptr) throw ValidationError(std::string(key) + ": expected a table");
  return *table;
}

std::vector<std::string> string_list(const toml::table& table, std::string_view field) {
  const auto* arr = table["labels"].as_array();
  if (arr == nullptr) throw ValidationError(std::string(field) + ".labels: missing or not an array");
  std::vector<std::string> out;
  for (const auto& item : *arr) {
    const auto value = item.value<std::string>();
    if (!value) throw ValidationError(std::string(field) + ".labels: entries must be strings");
    out.push_back(*value);
  }
  return out;
}

std::vector<double> number_list(const toml::node* node, const std::string& field) {
  const auto* arr = node != nullptr ? node->as_array() : nullptr;
  if (arr == nullptr) throw ValidationError(field + ": missing or not an array");
  std::vector<double> out;
  for (const auto& item : *arr) {
    const auto value = item.value<double>();
    if (!value) throw ValidationError(field + ": entries must be numbers");
    out.push_back(*value);
  }
  return out;
}

void check_probabilities(const std::vector<double>& values, const std::vector<std::string>& types,
                         const std::string& field) {
  if (values.size() != types.size()) {
    throw ValidationError(field + ": " + std::to_string(values.size()) + " entries, expected " +
                          std::to_string(types.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw ValidationError(field + "[" + types[i] + "]: " + fmt(values[i]) + " outside [0,1]");
    }
  }
}

EvidenceLevel parse_level(const toml::table& sensor, const std::string& field) {
  const auto level = sensor["level"].value<std::string>();
  if (!level) throw ValidationError(field + ".level: missing");
  if (*level == "direct") return EvidenceLevel::Direct;
  if (*level == "indicative") return EvidenceLevel::Indicative;
  throw ValidationError(field + ".level: \"" + *level + "\" (expected \"direct\" or \"indicative\")");
}

void check_known_keys(const toml::table& root) {
  static const std::set<std::string, std::less<>> known{"name",  "types",      "regions", "sensor",
                                                        "prior", "confidence", "aliases"};
  for (const auto& [key, _] : root) {
    if (!known.contains(key.str())) {
      throw ValidationError(std::string(key.str()) + ": unknown section");
    }
  }
}

ScenarioFile from_table(const toml::table& root) {
  check_known_keys(root);
  const auto name = root["name"].value_or(std::string{});
  const auto types = string_list(require_table(root, "types"), "types");
  const auto regions = string_list(require_table(root, "regions"), "regions");

  std::vector<SensorModel> sensors;
  if (const auto* node = root.get("sensor")) {
    const auto* arr = node->as_array();
    if (arr == nullptr) throw ValidationError("sensor: expected an array of tables ([[sensor]])");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto* table = (*arr)[i].as_table();
      const std::string field = "sensor[" + std::to_string(i) + "]";
      if (table == nullptr) throw ValidationError(field + ": expected a table");
      SensorModel sensor;
      const auto id = (*table)["id"].value<std::string>();
      if (!id || id->empty()) throw ValidationError(field + ".id: missing");
      sensor.id = *id;
      const std::string named = "sensor \"" + sensor.id + "\"";
      sensor.level = parse_level(*table, named);
      sensor.detection_prior = number_list(table->get("detection_prior"), named + ".detection_prior");
      check_probabilities(sensor.detection_prior, types, named + ".detection_prior");
      sensors.push_back(std::move(sensor));
    }
  }

  const auto& prior_table = require_table(root, "prior");
  for (const auto& [key, _] : prior_table) {
    if (std::find(regions.begin(), regions.end(), key.str()) == regions.end()) {
      throw ValidationError("prior." + std::string(key.str()) + ": unknown region label");
    }
  }
  RegionalPrior prior;
  for (const auto& region : regions) {
    const std::string field = "prior." + region;
    const auto* row_table = prior_table[region].as_table();
    if (row_table == nullptr) throw ValidationError(field + ": missing row");
    auto row = number_list(row_table->get("row"), field + ".row");
    check_probabilities(row, types, field + ".row");
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(sum - 1.0) > kFileRowSumTolerance) {
      throw ValidationError(field + ": row sum " + fmt(sum) + " (expected 1 within " +
                            fmt(kFileRowSumTolerance) + ")");
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      for (auto& v : row) v /= sum;
    }
    prior.rows.push_back(std::move(row));
  }

  ConfidenceSets confidence = default_confidence_sets();
  if (const auto* node = root.get("confidence")) {
    const auto* table = node->as_table();
    if (table == nullptr) throw ValidationError("confidence: expected a table");
    for (const auto& [key, value] : *table) {
      const std::string field = "confidence." + std::string(key.str());
      const auto* set = value.as_table();
      if (set == nullptr) throw ValidationError(field + ": expected a table");
      const auto alpha = (*set)["alpha"].value<double>();
      const auto beta = (*set)["beta"].value<double>();
      if (!alpha) throw ValidationError(field + ".alpha: missing");
      if (!beta) throw ValidationError(field + ".beta: missing");
      if (!(*alpha > 0.0)) throw ValidationError(field + ".alpha: " + fmt(*alpha) + " not positive");
      if (!(*beta > 0.0)) throw ValidationError(field + ".beta: " + fmt(*beta) + " not positive");
      confidence[std::string(key.str())] = BetaParams{*alpha, *beta};
    }
  }

  AliasMap aliases;
  if (const auto* node = root.get("aliases")) {
    const auto* table = node->as_table();
    if (table == nullptr) throw ValidationError("aliases: expected a table");
    for (const auto& [key, value] : *table) {
      const auto target = value.value<std::string>();
      if (!target) throw ValidationError("aliases." + std::string(key.str()) + ": expected a string");
      aliases[std::string(key.str())] = *target;
    }
  }

  return ScenarioFile{Scenario(name, types, regions, std::move(sensors), std::move(prior)),
                      std::move(confidence), std::move(aliases)};
}

toml::array to_array(const std::vector<double>& values) {
  toml::array arr;
  for (double v : values) arr.push_back(v);
  return arr;
}

toml::array to_array(const std::vector<std::string>& values) {
  toml::array arr;
  for (const auto& v : values) arr.push_back(v);
  return arr;
}

}  // namespace

ConfidenceSets default_confidence_sets() {
  return ConfidenceSets{{"true_strong", {8.0, 2.5}},
                        {"clutter_strong", {2.5, 8.0}},
                        {"true_weak", {5.0, 4.0}},
                        {"clutter_weak", {4.0, 5.0}}};
}

ScenarioFile parse_scenario(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
       << e.description();
    throw ParseError(os.str());
  }
  return from_table(root);
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

Scenario load_scenario(const std::filesystem::path& path) { return load_scenario_file(path).scenario; }

std::string serialize_scenario(const ScenarioFile& file) {
  const auto& sc = file.scenario;
  toml::table root;
  root.insert("name", sc.name());
  root.insert("types", toml::table{{"labels", to_array(sc.type_labels())}});
  root.insert("regions", toml::table{{"labels", to_array(sc.region_labels())}});

  toml::array sensors;
  for (const auto& s : sc.sensors()) {
    sensors.push_back(toml::table{{"id", s.id},
                                  {"level", std::string(to_string(s.level))},
                                  {"detection_prior", to_array(s.detection_prior)}});
  }
  root.insert("sensor", std::move(sensors));

  toml::table prior;
  for (std::size_t r = 0; r < sc.num_regions(); ++r) {
    prior.insert(sc.region_labels()[r], toml::table{{"row", to_array(sc.regional_prior().rows[r])}});
  }
  root.insert("prior", std::move(prior));

  toml::table confidence;
  for (const auto& [name, params] : file.confidence) {
    confidence.insert(name, toml::table{{"alpha", params.alpha}, {"beta", params.beta}});
  }
  root.insert("confidence", std::move(confidence));

  if (!file.aliases.empty()) {
    toml::table aliases;
    for (const auto& [from, to] : file.aliases) aliases.insert(from, to);
    root.insert("aliases", std::move(aliases));
  }

  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

ScenarioFile resolve_scenario(std::string_view name_or_path) {
  if (name_or_path == "basic" || name_or_path == "cbrne") return builtin_scenario_file(name_or_path);
  return load_scenario_file(std::filesystem::path(name_or_path));
}

}  // namespace ctxfuse
