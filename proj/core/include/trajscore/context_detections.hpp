#pragma once

#include <optional>
#include <vector>

#include "trajscore/config.hpp"
#include "trajscore/detections.hpp"
#include "trajscore/relation_detections.hpp"
#include "trajscore/semantic_map.hpp"
#include "trajscore/types.hpp"

namespace trajscore {

/// One (speed, orientation) sample inside a region context.
struct BehaviorPoint {
  double psi = 0.0;  // rad, wrapped
  double v = 0.0;    // m/s
  int track = -1;
  int frame = 0;
};

/// Scaled orientation/speed distance between two behavior samples.
double behavior_distance(const BehaviorPoint& a, const BehaviorPoint& b);

/// Portion of one track's resampled path during one visit of a region.
struct TrajectorySegment {
  int track = -1;
  int frame_begin = 0;
  int frame_end = 0;
  std::vector<Vec2> points;
};

// Region assignment of every state of every track: assignments[track][i]
// lists the regions of track state i.
using RegionAssignments = std::vector<std::vector<std::vector<AssignmentEntry>>>;

RegionAssignments assign_all_regions(const Recording& rec,
                                     const SemanticMap& map);

std::optional<Detection> check_area_usage(
    const TrackState& state, const std::vector<AssignmentEntry>& assignment,
    RoadUserClass cls, int track_index, const SemanticMap& map);

std::optional<Detection> check_driving_direction(
    const TrackState& state, const std::vector<AssignmentEntry>& assignment,
    RoadUserClass cls, int track_index, const SemanticMap& map,
    const AnalysisConfig& cfg);

/// Orientation/speed outliers of one region context, via DBSCAN over the
/// scaled distance. Needs >= 2 points to produce anything.
std::vector<Detection> behavior_clustering(
    const std::vector<BehaviorPoint>& points, int region,
    const AnalysisConfig& cfg);

/// Route outliers of one region context, via hierarchical clustering of
/// segment Fréchet distances.
std::vector<Detection> trajectory_clustering(
    const std::vector<TrajectorySegment>& segments, int region,
    const AnalysisConfig& cfg);

/// All four context detection types over a recording, sorted by
/// (frame, subject, partner, type).
std::vector<Detection> context_detections(const Recording& rec,
                                          const SemanticMap& map,
                                          const RegionAssignments& assignments,
                                          const std::vector<TrackGeometry>& geoms,
                                          const AnalysisConfig& cfg);

}  // namespace trajscore
