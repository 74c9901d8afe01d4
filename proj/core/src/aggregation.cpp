#include "trajscore/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "trajscore/format.hpp"
#include "trajscore/polygon.hpp"

namespace trajscore {

double positive_variation(const std::vector<double>& series) {
  if (series.empty()) return 0.0;
  double total = series.front();
  for (size_t i = 1; i < series.size(); ++i)
    total += std::max(series[i] - series[i - 1], 0.0);
  return total;
}

double anomaly_abstract(const std::vector<Detection>& detections,
                        const RegionContext& ctx, const AnalysisConfig& cfg,
                        std::optional<int> region, std::optional<int> subject) {
  // key: (region, road user, type) -> max weighted score
  std::map<std::tuple<int, int, int>, double> groups;
  for (const Detection& d : detections) {
    if (subject && d.subject != *subject) continue;
    double score = score_detection(d, cfg);
    for (const WeightedShare& w : detection_region_weights(d, ctx, cfg)) {
      if (region && w.region != *region) continue;
      auto key = std::make_tuple(w.region, d.subject, static_cast<int>(d.type));
      double v = score * w.weight;
      auto [it, inserted] = groups.emplace(key, v);
      if (!inserted && v > it->second) it->second = v;
    }
  }
  double total = 0.0;
  for (const auto& [key, v] : groups) total += v;
  return total;
}

ScoreKind score_kind_from_string(const std::string& s) {
  if (s == "interaction") return ScoreKind::interaction;
  if (s == "anomaly") return ScoreKind::anomaly;
  if (s == "relevance") return ScoreKind::relevance;
  throw std::invalid_argument("unknown score kind '" + s + "'");
}

HeatmapGrid heatmap(const SemanticMap& map,
                    const std::vector<double>& region_scores,
                    double resolution) {
  HeatmapGrid grid;
  grid.resolution = resolution;
  if (map.regions.empty()) return grid;
  grid.origin = {std::floor(map.bounds.min.x / resolution) * resolution,
                 std::floor(map.bounds.min.y / resolution) * resolution};
  grid.width = static_cast<size_t>(
      std::ceil((map.bounds.max.x - grid.origin.x) / resolution)) + 1;
  grid.height = static_cast<size_t>(
      std::ceil((map.bounds.max.y - grid.origin.y) / resolution)) + 1;
  grid.values.assign(grid.width * grid.height, 0.0);

  for (size_t r = 0; r < map.regions.size(); ++r) {
    if (region_scores[r] == 0.0) continue;
    const Region& reg = map.regions[r];
    std::vector<size_t> covered;
    for (size_t iy = 0; iy < grid.height; ++iy) {
      for (size_t ix = 0; ix < grid.width; ++ix) {
        if (point_in_polygon(grid.cell_center(ix, iy), reg.polygon))
          covered.push_back(iy * grid.width + ix);
      }
    }
    if (covered.empty()) {
      // Region smaller than a cell: drop the mass on the cell of its
      // first vertex.
      const Vec2& p = reg.polygon.front();
      auto ix = static_cast<size_t>(
          std::clamp((p.x - grid.origin.x) / resolution, 0.0,
                     static_cast<double>(grid.width - 1)));
      auto iy = static_cast<size_t>(
          std::clamp((p.y - grid.origin.y) / resolution, 0.0,
                     static_cast<double>(grid.height - 1)));
      covered.push_back(iy * grid.width + ix);
    }
    double per_cell = region_scores[r] / static_cast<double>(covered.size());
    for (size_t c : covered) grid.values[c] += per_cell;
  }
  return grid;
}

std::string heatmap_csv(const HeatmapGrid& grid) {
  std::ostringstream out;
  out << "x,y,value\n";
  for (size_t iy = 0; iy < grid.height; ++iy) {
    for (size_t ix = 0; ix < grid.width; ++ix) {
      Vec2 c = grid.cell_center(ix, iy);
      out << format_double(c.x) << ',' << format_double(c.y) << ','
          << format_double(grid.at(ix, iy)) << '\n';
    }
  }
  return out.str();
}

std::string comparison_csv(const std::vector<RecordingSummary>& rows) {
  std::ostringstream out;
  out << "recording_id,location_id,duration,track_count,"
         "interaction,anomaly,relevance,baseline_interaction,"
         "interaction_per_track,anomaly_per_track,relevance_per_track\n";
  for (const RecordingSummary& r : rows) {
    double n = r.track_count > 0 ? static_cast<double>(r.track_count) : 1.0;
    out << r.recording_id << ',' << r.location_id << ','
        << format_double(r.duration) << ',' << r.track_count << ','
        << format_double(r.dataset.interaction) << ','
        << format_double(r.dataset.anomaly) << ','
        << format_double(r.dataset.relevance) << ','
        << format_double(r.baseline_interaction) << ','
        << format_double(r.dataset.interaction / n) << ','
        << format_double(r.dataset.anomaly / n) << ','
        << format_double(r.dataset.relevance / n) << '\n';
  }
  return out.str();
}

}  // namespace trajscore
