#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "trajscore/aggregation.hpp"
#include "trajscore/config.hpp"
#include "trajscore/detections.hpp"
#include "trajscore/scoring.hpp"
#include "trajscore/semantic_map.hpp"
#include "trajscore/types.hpp"

namespace trajscore {

struct TrackSeries {
  int first_frame = 0;
  std::vector<double> interaction, anomaly, relevance;
};

struct TrackResult {
  int track_id = 0;
  ScoreTriple scores;
  int peak_frame = 0;  // frame of the punctual relevance maximum
};

struct RegionResult {
  std::string id;
  ScoreTriple scores;
};

struct AnalysisResult {
  int recording_id = 0;
  int location_id = 0;
  double duration = 0.0;
  AnalysisConfig config;
  std::vector<int> track_ids;  // track index -> dataset track id
  std::vector<Detection> detections;
  RegionContext context;
  std::vector<TrackSeries> punctual;
  std::vector<TrackResult> tracks;
  std::vector<RegionResult> regions;
  ScoreTriple dataset;
  double baseline_interaction = 0.0;  // WP + dmttcp detections only
  std::array<int64_t, kDetectionTypeCount> detection_counts{};
};

/// Full scoring pipeline over one recording.
AnalysisResult analyze(const Recording& rec, const SemanticMap& map,
                       const AnalysisConfig& cfg);

/// Ranked extraction of the highest-scoring tracks or frames; ties break
/// toward lower (track id, frame). Items carry the indices of the
/// subject's detections active at the item's frame.
std::vector<TopItem> top_k(const AnalysisResult& res, ScoreKind kind, size_t k,
                           bool punctual_level);

/// Writes report.json, track_scores.csv, region_scores.csv,
/// punctual_scores.csv, detections.csv and the three heatmap CSVs.
void write_reports(const AnalysisResult& res, const SemanticMap& map,
                   const std::filesystem::path& out_dir);

/// Reads the overview row back from a written report directory.
RecordingSummary read_summary(const std::filesystem::path& report_dir);

}  // namespace trajscore
