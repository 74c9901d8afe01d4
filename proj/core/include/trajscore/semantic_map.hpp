#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajscore/polygon.hpp"
#include "trajscore/types.hpp"

namespace trajscore {

enum class RegionType { street, walkway, parking, grass, bicycle_lane };

RegionType region_type_from_string(const std::string& s);
std::string to_string(RegionType t);

/// Regulatory permission of region usage per road user class.
bool class_allowed_in(RoadUserClass cls, RegionType type);

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Logical driving region: a simple polygon plus its traffic semantics.
/// Regions may overlap (crossing routes share the intersection center).
struct Region {
  std::string id;
  RegionType type = RegionType::street;
  Polygon polygon;
  double area = 0.0;
  std::optional<double> speed_limit;     // m/s
  std::vector<Vec2> direction_ref;       // empty when the region is undirected
  Aabb bounds;

  bool has_direction() const { return direction_ref.size() >= 2; }
  /// Tangent direction of the reference polyline at the point nearest to p.
  double direction_at(const Vec2& p) const;
};

struct SemanticMap {
  std::string location_id;
  std::vector<Region> regions;
  Aabb bounds;
};

/// Loads the region map from its JSON schema. Polygons are validated
/// (simple, positive area) and a repeated closing vertex is dropped.
SemanticMap load_map(const std::filesystem::path& map_path);
SemanticMap parse_map(const std::string& json_text);

/// Physical outline of a road user at one frame: vehicles are oriented
/// rectangles, VRUs a 16-gon stand-in for their 2.5 m circle.
Polygon footprint(const Track& track, int frame);
Polygon footprint_at(const Track& track, const Vec2& position, double heading);

struct AssignmentEntry {
  int region = -1;             // index into SemanticMap::regions
  double overlap_area = 0.0;   // m^2
  double fraction = 0.0;       // overlap / footprint area
};

/// Region membership of one footprint: a region qualifies when the overlap
/// reaches 2 m^2 or covers more than half of the region itself. Empty
/// result means off-map.
std::vector<AssignmentEntry> assign_regions(const Polygon& footprint,
                                            const SemanticMap& map);

}  // namespace trajscore
