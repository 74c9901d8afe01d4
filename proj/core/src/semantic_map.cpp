#include "trajscore/semantic_map.hpp"

#include <fstream>

#include <json.hpp>

namespace trajscore {

RegionType region_type_from_string(const std::string& s) {
  if (s == "street") return RegionType::street;
  if (s == "walkway") return RegionType::walkway;
  if (s == "parking") return RegionType::parking;
  if (s == "grass") return RegionType::grass;
  if (s == "bicycle_lane") return RegionType::bicycle_lane;
  throw MapError("unknown region type '" + s + "'");
}

std::string to_string(RegionType t) {
  switch (t) {
    case RegionType::street: return "street";
    case RegionType::walkway: return "walkway";
    case RegionType::parking: return "parking";
    case RegionType::grass: return "grass";
    case RegionType::bicycle_lane: return "bicycle_lane";
  }
  return "street";
}

bool class_allowed_in(RoadUserClass cls, RegionType type) {
  switch (type) {
    case RegionType::street:
      return cls != RoadUserClass::pedestrian;
    case RegionType::walkway:
      return cls == RoadUserClass::pedestrian;
    case RegionType::parking:
      return !is_vru(cls);
    case RegionType::grass:
      return false;
    case RegionType::bicycle_lane:
      return cls == RoadUserClass::bicycle;
  }
  return false;
}

double Region::direction_at(const Vec2& p) const {
  double best_d2 = 1e300;
  double best_heading = 0.0;
  for (size_t i = 0; i + 1 < direction_ref.size(); ++i) {
    const Vec2& a = direction_ref[i];
    const Vec2& b = direction_ref[i + 1];
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + ab * t;
    const double d2 = (p - q).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_heading = std::atan2(ab.y, ab.x);
    }
  }
  return best_heading;
}

SemanticMap parse_map(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  SemanticMap map;
  map.location_id = j.value("location_id", std::string{});
  for (const auto& jr : j.at("regions")) {
    Region r;
    r.id = jr.at("id").get<std::string>();
    r.type = region_type_from_string(jr.at("type").get<std::string>());
    for (const auto& pt : jr.at("polygon"))
      r.polygon.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    // Normalize a ring that repeats its first vertex at the end.
    if (r.polygon.size() > 3 && r.polygon.front() == r.polygon.back())
      r.polygon.pop_back();
    if (!polygon_is_simple(r.polygon))
      throw MapError("self-intersecting polygon in region '" + r.id + "'");
    r.area = polygon_area(r.polygon);
    if (r.area <= 0.0)
      throw MapError("degenerate polygon in region '" + r.id + "'");
    if (jr.contains("speed_limit_mps"))
      r.speed_limit = jr.at("speed_limit_mps").get<double>();
    if (jr.contains("direction_ref")) {
      for (const auto& pt : jr.at("direction_ref"))
        r.direction_ref.push_back(
            {pt.at(0).get<double>(), pt.at(1).get<double>()});
    }
    r.bounds = polygon_bounds(r.polygon);
    for (const Region& other : map.regions)
      if (other.id == r.id) throw MapError("duplicate region id '" + r.id + "'");
    map.bounds.extend(r.bounds);
    map.regions.push_back(std::move(r));
  }
  return map;
}

SemanticMap load_map(const std::filesystem::path& map_path) {
  std::ifstream in(map_path);
  if (!in) throw MapError("cannot open map file " + map_path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_map(text);
}

Polygon footprint_at(const Track& track, const Vec2& position, double heading) {
  if (is_vru(track.cls))
    return regular_polygon(position, track.footprint_radius(), 16);
  return oriented_rectangle(position, heading, track.length, track.width);
}

Polygon footprint(const Track& track, int frame) {
  const TrackState& s = track.state_at(frame);
  return footprint_at(track, s.position, s.heading);
}

std::vector<AssignmentEntry> assign_regions(const Polygon& fp,
                                            const SemanticMap& map) {
  std::vector<AssignmentEntry> out;
  const double fp_area = polygon_area(fp);
  if (fp_area <= 0.0) return out;
  const Aabb fp_bounds = polygon_bounds(fp);
  for (size_t i = 0; i < map.regions.size(); ++i) {
    const Region& r = map.regions[i];
    if (!fp_bounds.intersects(r.bounds)) continue;
    const double overlap = overlap_area_convex(r.polygon, fp);
    if (overlap >= 2.0 || overlap / r.area > 0.5) {
      out.push_back({static_cast<int>(i), overlap, overlap / fp_area});
    }
  }
  return out;
}

}  // namespace trajscore
