#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajscore/config.hpp"
#include "trajscore/detections.hpp"
#include "trajscore/scoring.hpp"
#include "trajscore/semantic_map.hpp"

namespace trajscore {

/// Sum of the positive increments of a score series, with the initial
/// value counted as a rise from zero.
double positive_variation(const std::vector<double>& series);

struct ScoreTriple {
  double interaction = 0.0;
  double anomaly = 0.0;
  double relevance = 0.0;
};

/// Abstract anomaly score of a scope: detections are split into
/// weighted per-region shares, grouped by (region, road user, type), and
/// the group maxima are summed. Filters restrict the scope.
double anomaly_abstract(const std::vector<Detection>& detections,
                        const RegionContext& ctx, const AnalysisConfig& cfg,
                        std::optional<int> region = std::nullopt,
                        std::optional<int> subject = std::nullopt);

enum class ScoreKind { interaction, anomaly, relevance };
ScoreKind score_kind_from_string(const std::string& s);

struct TopItem {
  int track_id = 0;
  int frame = -1;  // -1 for track-level items
  double value = 0.0;
  std::vector<size_t> detection_ids;
};

struct HeatmapGrid {
  Vec2 origin;          // lower-left corner of cell (0, 0)
  double resolution = 2.0;
  size_t width = 0, height = 0;
  std::vector<double> values;  // row-major, height rows of width cells

  double& at(size_t ix, size_t iy) { return values[iy * width + ix]; }
  double at(size_t ix, size_t iy) const { return values[iy * width + ix]; }
  Vec2 cell_center(size_t ix, size_t iy) const {
    return {origin.x + (static_cast<double>(ix) + 0.5) * resolution,
            origin.y + (static_cast<double>(iy) + 0.5) * resolution};
  }
};

/// Spreads each region's score uniformly over the grid cells whose
/// centers the region covers; overlapping regions add up.
HeatmapGrid heatmap(const SemanticMap& map,
                    const std::vector<double>& region_scores,
                    double resolution = 2.0);

std::string heatmap_csv(const HeatmapGrid& grid);

/// One recording's overview row for cross-recording comparison.
struct RecordingSummary {
  int recording_id = 0;
  int location_id = 0;
  double duration = 0.0;
  size_t track_count = 0;
  ScoreTriple dataset;
  double baseline_interaction = 0.0;
};

std::string comparison_csv(const std::vector<RecordingSummary>& rows);

}  // namespace trajscore
