#include "ctxfuse/region_index.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "ctxfuse/errors.hpp"

namespace ctxfuse {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 6> kDefaultOrder = {
    "grassland", "road", "road bend", "road junction", "road overpass", "roadside marker"};

Point parse_position(const json& position) {
  if (!position.is_array() || position.size() < 2 || !position[0].is_number() ||
      !position[1].is_number()) {
    throw ParseError("malformed position " + position.dump());
  }
  return Point{position[0].get<double>(), position[1].get<double>()};
}

Ring parse_ring(const json& coords, std::size_t feature) {
  if (!coords.is_array()) throw ParseError("feature " + std::to_string(feature) + ": ring is not an array");
  Ring ring;
  for (const auto& position : coords) ring.push_back(parse_position(position));
  if (ring.size() >= 2 && ring.front().x == ring.back().x && ring.front().y == ring.back().y) {
    ring.pop_back();
  }
  if (ring.size() < 3) {
    throw ParseError("feature " + std::to_string(feature) + ": ring has fewer than 3 distinct vertices");
  }
  ring.push_back(ring.front());
  return ring;
}

std::vector<Ring> parse_polygon_rings(const json& coords, std::size_t feature) {
  if (!coords.is_array() || coords.empty()) {
    throw ParseError("feature " + std::to_string(feature) + ": polygon has no rings");
  }
  std::vector<Ring> rings;
  for (const auto& ring : coords) rings.push_back(parse_ring(ring, feature));
  return rings;
}

bool on_segment(Point p, Point a, Point b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (cross != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}

std::string valid_labels(const Scenario& scenario) {
  std::string out;
  for (const auto& label : scenario.region_labels()) {
    if (!out.empty()) out += ", ";
    out += '"' + label + '"';
  }
  return out;
}

}  // namespace

int default_precedence(std::string_view canonical_label) {
  const auto it = std::find(kDefaultOrder.begin(), kDefaultOrder.end(), canonical_label);
  if (it == kDefaultOrder.end()) return 0;
  return static_cast<int>(it - kDefaultOrder.begin()) + 1;
}

std::string canonical_label(std::string_view raw, const AliasMap& aliases) {
  std::string current(raw);
  std::set<std::string> visited{current};
  for (auto it = aliases.find(current); it != aliases.end(); it = aliases.find(current)) {
    if (it->second == current) break;
    current = it->second;
    if (!visited.insert(current).second) {
      throw ValidationError("aliases: cycle through \"" + current + "\"");
    }
  }
  return current;
}

bool polygon_contains(const RegionPolygon& polygon, Point p) {
  bool inside = false;
  for (const auto& ring : polygon.rings) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      const Point a = ring[i];
      const Point b = ring[j];
      if (on_segment(p, a, b)) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x_cross) inside = !inside;
      }
    }
  }
  return inside;
}

RegionIndex::RegionIndex(std::vector<RegionPolygon> polygons, std::optional<RegionType> default_region)
    : polygons_(std::move(polygons)), default_region_(default_region) {
  bounds_.reserve(polygons_.size());
  for (const auto& poly : polygons_) {
    Bounds b{poly.rings.at(0).at(0).x, poly.rings[0][0].y, poly.rings[0][0].x, poly.rings[0][0].y};
    for (const auto& ring : poly.rings) {
      for (const auto& v : ring) {
        b.min_x = std::min(b.min_x, v.x);
        b.max_x = std::max(b.max_x, v.x);
        b.min_y = std::min(b.min_y, v.y);
        b.max_y = std::max(b.max_y, v.y);
      }
    }
    bounds_.push_back(b);
  }
}

RegionType RegionIndex::lookup(Point p) const {
  const RegionPolygon* best = nullptr;
  for (std::size_t i = 0; i < polygons_.size(); ++i) {
    const auto& b = bounds_[i];
    if (p.x < b.min_x || p.x > b.max_x || p.y < b.min_y || p.y > b.max_y) continue;
    const auto& poly = polygons_[i];
    if (best != nullptr && poly.precedence < best->precedence) continue;
    if (best != nullptr && poly.precedence == best->precedence && poly.file_order > best->file_order) {
      continue;
    }
    if (polygon_contains(poly, p)) best = &poly;
  }
  if (best != nullptr) return best->region;
  if (default_region_) return *default_region_;
  std::ostringstream os;
  os << "point (" << p.x << ", " << p.y << ") is not covered by any region polygon";
  throw NotCoveredError(os.str());
}

RegionIndex parse_region_geojson(std::string_view text, const Scenario& scenario,
                                 const AliasMap& aliases, std::optional<RegionType> default_region) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("region file: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw ParseError("region file: expected a GeoJSON FeatureCollection");
  }

  std::vector<std::string> file_order;
  if (doc.contains("precedence")) {
    if (!doc["precedence"].is_array()) throw ParseError("region file: \"precedence\" must be an array");
    for (const auto& label : doc["precedence"]) {
      if (!label.is_string()) throw ParseError("region file: \"precedence\" entries must be strings");
      file_order.push_back(canonical_label(label.get<std::string>(), aliases));
    }
  }
  auto rank_of = [&](const std::string& label) {
    if (file_order.empty()) return default_precedence(label);
    const auto it = std::find(file_order.begin(), file_order.end(), label);
    if (it == file_order.end()) return 0;
    return static_cast<int>(file_order.end() - it);
  };

  std::vector<RegionPolygon> polygons;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& feature = features[i];
    const std::string where = "feature " + std::to_string(i);
    if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw ParseError(where + ": missing geometry");
    }
    const auto props = feature.value("properties", json::object());
    if (!props.contains("region_type") || !props["region_type"].is_string()) {
      throw ParseError(where + ": missing string property \"region_type\"");
    }
    const auto raw = props["region_type"].get<std::string>();
    const auto label = canonical_label(raw, aliases);
    const auto region = scenario.find_region(label);
    if (!region) {
      throw ValidationError(where + ".region_type: \"" + raw + "\" does not resolve to a region; valid: " +
                            valid_labels(scenario));
    }
    int precedence = rank_of(label);
    if (props.contains("precedence")) {
      if (!props["precedence"].is_number_integer()) {
        throw ParseError(where + ": \"precedence\" must be an integer");
      }
      precedence = props["precedence"].get<int>();
    }

    const auto& geometry = feature["geometry"];
    const auto type = geometry.value("type", "");
    if (!geometry.contains("coordinates")) throw ParseError(where + ": geometry has no coordinates");
    const auto& coords = geometry["coordinates"];
    std::vector<std::vector<Ring>> parts;
    if (type == "Polygon") {
      parts.push_back(parse_polygon_rings(coords, i));
    } else if (type == "MultiPolygon") {
      if (!coords.is_array()) throw ParseError(where + ": MultiPolygon coordinates must be an array");
      for (const auto& part : coords) parts.push_back(parse_polygon_rings(part, i));
    } else {
      throw ParseError(where + ": unsupported geometry type \"" + type + "\"");
    }
    for (auto& rings : parts) {
      polygons.push_back(RegionPolygon{*region, std::move(rings), precedence, i});
    }
  }
  return RegionIndex(std::move(polygons), default_region);
}

RegionIndex load_region_file(const std::filesystem::path& path, const Scenario& scenario,
                             const AliasMap& aliases, std::optional<RegionType> default_region) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open region file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_region_geojson(buffer.str(), scenario, aliases, default_region);
}

}  // namespace ctxfuse
