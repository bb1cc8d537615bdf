#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctxfuse/errors.hpp"
#include "ctxfuse/scenario_config.hpp"

using namespace ctxfuse;

namespace {

const char* kMinimal = R"(
name = "mini"
[types]
labels = ["A", "B", "C"]
[regions]
labels = ["R"]
[[sensor]]
id = "S"
level = "direct"
detection_prior = [0.5, 0.5, 1]
[prior.R]
row = %ROW%
)";

std::string with_row(const std::string& row) {
  std::string text = kMinimal;
  text.replace(text.find("%ROW%"), 5, row);
  return text;
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_scenario(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("built-in basic scenario") {
  const auto sc = builtin_scenario("basic");
  CHECK(sc.num_types() == 3);
  CHECK(sc.num_regions() == 3);
  CHECK(sc.num_sensors() == 7);
  CHECK(sc.sensor("S_1").detection_prior == std::vector<double>{0.9, 0.4, 0.0});
  CHECK(sc.sensor("S_7").detection_prior == std::vector<double>{0.8, 0.8, 0.8});
  CHECK(sc.sensor("S_7").level == EvidenceLevel::Indicative);
  for (const char* id : {"S_4", "S_5", "S_6"}) CHECK(sc.sensor(id).level == EvidenceLevel::Direct);
  CHECK(sc.prior_row(sc.region("R_3")) == std::vector<double>{0.3, 0.1, 0.6});
}

TEST_CASE("built-in cbrne scenario") {
  const auto file = builtin_scenario_file("cbrne");
  const auto& sc = file.scenario;
  CHECK(sc.num_types() == 4);
  CHECK(sc.num_regions() == 6);
  CHECK(sc.num_sensors() == 6);
  CHECK(sc.region_labels() == std::vector<std::string>{"grassland", "road", "road junction", "road bend",
                                                       "road overpass", "roadside marker"});
  CHECK(sc.prior_row(sc.region("roadside marker")) == std::vector<double>{0.025, 0.025, 0.9, 0.05});
  CHECK(sc.prior_row(sc.region("grassland")) == std::vector<double>{0.5, 0.5, 0.0, 0.0});
  std::size_t direct = 0;
  for (const auto& s : sc.sensors()) direct += s.level == EvidenceLevel::Direct ? 1 : 0;
  CHECK(direct == 1);
  CHECK(sc.sensor("S_4").level == EvidenceLevel::Direct);
  CHECK(file.aliases.at("meadow") == "grassland");
  CHECK(file.aliases.at("scrub") == "grassland");
  CHECK(file.aliases.at("grass") == "grassland");
  CHECK(file.confidence.at("true_strong") == BetaParams{8.0, 2.5});
}

TEST_CASE("unknown built-in") { CHECK_THROWS_AS((void)builtin_scenario("urban"), LookupError); }

TEST_CASE("round trip through the file format") {
  for (const char* name : {"basic", "cbrne"}) {
    const auto original = builtin_scenario_file(name);
    const auto text = serialize_scenario(original);
    const auto reloaded = parse_scenario(text);
    CHECK(reloaded == original);
  }
}

TEST_CASE("shipped scenario files match the built-ins") {
  for (const char* name : {"basic", "cbrne"}) {
    const auto path = std::filesystem::path(CTXFUSE_SOURCE_DIR) / "scenarios" / (std::string(name) + ".toml");
    CHECK(load_scenario_file(path) == builtin_scenario_file(name));
    CHECK(load_scenario(path) == builtin_scenario(name));
  }
}

TEST_CASE("row sum validation") {
  const auto message = error_of(with_row("[0.5, 0.4, 0.2]"));
  CHECK(message.find("prior.R") != std::string::npos);
  CHECK(message.find("row sum 1.1") != std::string::npos);
  CHECK_THROWS_AS((void)parse_scenario(with_row("[0.5, 0.4, 0.2]")), ValidationError);
}

TEST_CASE("rows within tolerance are renormalised") {
  const auto file = parse_scenario(with_row("[0.3333333, 0.3333333, 0.3333333]"));
  const auto& row = file.scenario.regional_prior().rows[0];
  CHECK(row[0] + row[1] + row[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(row[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("validation names field and value") {
  CHECK(error_of(with_row("[0.5, 0.5, -0.0001]")).find("prior.R.row[C]: -0.0001") != std::string::npos);
  CHECK(error_of(with_row("[0.5, 0.5]")).find("prior.R.row: 2 entries, expected 3") != std::string::npos);

  auto bad_pd = with_row("[0.5, 0.5, 0.0]");
  bad_pd.replace(bad_pd.find("[0.5, 0.5, 1]"), 13, "[0.5, 1.5, 1]");
  CHECK(error_of(bad_pd).find("sensor \"S\".detection_prior[B]: 1.5") != std::string::npos);

  auto bad_level = with_row("[0.5, 0.5, 0.0]");
  bad_level.replace(bad_level.find("\"direct\""), 8, "\"visual\"");
  CHECK(error_of(bad_level).find("sensor \"S\".level: \"visual\"") != std::string::npos);

  auto unknown_region = with_row("[0.5, 0.5, 0.0]") + "[prior.Q]\nrow = [1, 0, 0]\n";
  CHECK(error_of(unknown_region).find("prior.Q: unknown region label") != std::string::npos);

  auto bad_beta = with_row("[0.5, 0.5, 0.0]") + "[confidence.true_strong]\nalpha = 0\nbeta = 2\n";
  CHECK(error_of(bad_beta).find("confidence.true_strong.alpha: 0 not positive") != std::string::npos);

  auto dup_type = with_row("[0.5, 0.5, 0.0]");
  dup_type.replace(dup_type.find("\"C\""), 3, "\"A\"");
  CHECK(error_of(dup_type).find("duplicate label \"A\"") != std::string::npos);
}

TEST_CASE("malformed files are parse errors") {
  CHECK_THROWS_AS((void)parse_scenario("name = \n[types"), ParseError);
  CHECK_THROWS_AS((void)load_scenario("/nonexistent/scenario.toml"), ParseError);
}

TEST_CASE("resolve_scenario accepts names and paths") {
  CHECK(resolve_scenario("basic").scenario.name() == "basic");
  const auto path = std::filesystem::temp_directory_path() / "ctxfuse_resolve.toml";
  {
    std::ofstream out(path);
    out << with_row("[1, 0, 0]");
  }
  CHECK(resolve_scenario(path.string()).scenario.name() == "mini");
  std::filesystem::remove(path);
}
