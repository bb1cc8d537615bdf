#pragma once

// Contextual evidence: maps an estimated object position to a region type using
// pre-labelled polygons read from a GeoJSON FeatureCollection. Every Polygon or
// MultiPolygon feature carries a string property "region_type"; raw labels are
// canonicalised through the scenario's alias map.
//
// Overlaps resolve by precedence (higher wins, equal ranks go to the earlier
// feature). Ranks come from, in order: a feature's integer "precedence" property,
// a top-level "precedence" array listing labels highest first, or the default
// table below. Coordinates are treated as planar.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxfuse/scenario_config.hpp"
#include "ctxfuse/types.hpp"

namespace ctxfuse {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Ring = std::vector<Point>;

/// One polygon (outer ring plus holes) tagged with its canonical region.
struct RegionPolygon {
  RegionType region;
  std::vector<Ring> rings;
  int precedence = 0;
  std::size_t file_order = 0;
};

/// roadside marker > road overpass > road junction > road bend > road > grassland;
/// any other label ranks 0.
[[nodiscard]] int default_precedence(std::string_view canonical_label);

/// Follows alias chains to a fixed point. Throws ValidationError on a cycle.
[[nodiscard]] std::string canonical_label(std::string_view raw, const AliasMap& aliases);

/// Even-odd containment over all rings; points on an edge count as inside.
[[nodiscard]] bool polygon_contains(const RegionPolygon& polygon, Point p);

class RegionIndex {
 public:
  RegionIndex(std::vector<RegionPolygon> polygons, std::optional<RegionType> default_region);

  /// Region of the highest-precedence polygon containing p, else the default.
  /// Throws NotCoveredError if neither exists.
  [[nodiscard]] RegionType lookup(Point p) const;

  [[nodiscard]] const std::vector<RegionPolygon>& polygons() const { return polygons_; }
  [[nodiscard]] std::optional<RegionType> default_region() const { return default_region_; }

 private:
  struct Bounds {
    double min_x, min_y, max_x, max_y;
  };

  std::vector<RegionPolygon> polygons_;
  std::vector<Bounds> bounds_;
  std::optional<RegionType> default_region_;
};

/// Parses GeoJSON text. Throws ParseError on malformed JSON or geometry and
/// ValidationError when a label does not resolve to a scenario region.
[[nodiscard]] RegionIndex parse_region_geojson(std::string_view text, const Scenario& scenario,
                                               const AliasMap& aliases,
                                               std::optional<RegionType> default_region);

[[nodiscard]] RegionIndex load_region_file(const std::filesystem::path& path,
                                           const Scenario& scenario, const AliasMap& aliases,
                                           std::optional<RegionType> default_region);

}  // namespace ctxfuse
