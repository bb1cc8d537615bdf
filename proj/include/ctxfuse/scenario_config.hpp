#pragma once

// Scenario files are TOML:
//
//   name = "basic"
//   [types]
//   labels = ["A", "B", "C"]
//   [regions]
//   labels = ["R_1", "R_2", "R_3"]
//   [[sensor]]
//   id = "S_1"
//   level = "indicative"            # or "direct"
//   detection_prior = [0.9, 0.4, 0.0]
//   [prior.R_1]                     # quote labels with spaces: [prior."road junction"]
//   row = [0.6, 0.3, 0.1]
//   [confidence.true_strong]        # optional; defaults listed in default_confidence_sets()
//   alpha = 8.0
//   beta = 2.5
//   [aliases]                       # optional raw-label -> region-label map for region files
//   meadow = "grassland"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "ctxfuse/random.hpp"
#include "ctxfuse/types.hpp"

namespace ctxfuse {

using AliasMap = std::map<std::string, std::string, std::less<>>;
using ConfidenceSets = std::map<std::string, BetaParams, std::less<>>;

/// A scenario together with the auxiliary sections of its file.
struct ScenarioFile {
  Scenario scenario;
  ConfidenceSets confidence;
  AliasMap aliases;

  bool operator==(const ScenarioFile&) const = default;
};

/// Tolerance on prior row sums when reading files; rows are renormalised afterwards.
inline constexpr double kFileRowSumTolerance = 1e-6;

/// true_strong = Beta(8, 2.5), clutter_strong = Beta(2.5, 8),
/// true_weak = Beta(5, 4), clutter_weak = Beta(4, 5).
[[nodiscard]] ConfidenceSets default_confidence_sets();

/// Throws ParseError on malformed TOML, ValidationError on bad values.
[[nodiscard]] ScenarioFile parse_scenario(std::string_view text, std::string_view source = "<string>");
[[nodiscard]] ScenarioFile load_scenario_file(const std::filesystem::path& path);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// TOML text that parse_scenario reads back into an identical value.
[[nodiscard]] std::string serialize_scenario(const ScenarioFile& file);

/// "basic" or "cbrne"; throws LookupError otherwise.
[[nodiscard]] ScenarioFile builtin_scenario_file(std::string_view name);
[[nodiscard]] Scenario builtin_scenario(std::string_view name);

/// A built-in name, or else a path to a scenario file.
[[nodiscard]] ScenarioFile resolve_scenario(std::string_view name_or_path);

}  // namespace ctxfuse
