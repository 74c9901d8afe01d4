#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "trajscore/config.hpp"
#include "trajscore/detections.hpp"
#include "trajscore/geometry.hpp"
#include "trajscore/types.hpp"

namespace trajscore {

/// Cached per-track geometry: the resampled path plus the swept footprint
/// grid. Built once and shared by every pairing of the track.
struct TrackGeometry {
  PolyPath path;
  FootprintSpec footprint;
  SweptGrid grid;
};

std::vector<TrackGeometry> build_track_geometries(const Recording& rec,
                                                  const AnalysisConfig& cfg);

/// Candidate pairs per frame, gated by center distance.
struct PairGate {
  int first_frame = 0;
  // pairs_by_frame[f - first_frame] holds (a, b) track-index pairs, a < b.
  std::vector<std::vector<std::pair<int, int>>> pairs_by_frame;

  const std::vector<std::pair<int, int>>& pairs_at(int frame) const;
};

PairGate candidate_pairs(const Recording& rec, double radius = 75.0);

std::optional<Detection> compute_thw(const Recording& rec,
                                     const std::vector<TrackGeometry>& geoms,
                                     int subject, int partner, int frame,
                                     const AnalysisConfig& cfg);

std::optional<Detection> compute_ttc(const Recording& rec,
                                     const std::vector<TrackGeometry>& geoms,
                                     int subject, int partner, int frame,
                                     const AnalysisConfig& cfg);

std::optional<Detection> compute_drac(const Recording& rec,
                                      const std::vector<TrackGeometry>& geoms,
                                      int subject, int partner, int frame,
                                      const AnalysisConfig& cfg);

/// Symmetric by construction; the returned detection has subject=a,
/// partner=b and the driver emits the mirrored twin.
std::optional<Detection> compute_dmttcp(const Recording& rec,
                                        const std::vector<TrackGeometry>& geoms,
                                        const ConflictPointSet& conflicts,
                                        int a, int b, int frame,
                                        const AnalysisConfig& cfg);

std::vector<Detection> compute_wp(const Recording& rec, int track_index,
                                  const AnalysisConfig& cfg);

/// Full relation-indicator pass over a recording. Output is sorted by
/// (frame, subject, partner, type) regardless of thread scheduling.
std::vector<Detection> relation_detections(
    const Recording& rec, const std::vector<TrackGeometry>& geoms,
    const AnalysisConfig& cfg);

}  // namespace trajscore
