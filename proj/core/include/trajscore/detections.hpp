#pragma once

#include <string>
#include <vector>

#include "trajscore/math.hpp"

namespace trajscore {

/// The fourteen elementary traffic characteristics, in three thematic
/// blocks: relation indicators, vehicle state and context-related behavior.
enum class DetectionType {
  thw,
  ttc,
  drac,
  dmttcp,
  wp,
  lon_accel,
  lat_accel,
  sideslip,
  yaw_rate,
  area_usage,
  driving_direction,
  velocity,
  driving_behavior,
  trajectory,
};

inline constexpr int kDetectionTypeCount = 14;

std::string to_string(DetectionType t);

inline bool is_relation_indicator(DetectionType t) {
  return t == DetectionType::thw || t == DetectionType::ttc ||
         t == DetectionType::drac || t == DetectionType::dmttcp ||
         t == DetectionType::wp;
}

/// Region binding of a detection: which regions it belongs to and how much
/// of the subject's footprint lies in each.
struct RegionShare {
  int region = -1;
  double fraction = 0.0;
};

/// One scored occurrence of a characteristic, bound to road user(s),
/// frame(s) and region(s). Punctual detections have frame_begin ==
/// frame_end; only trajectory detections span a range.
struct Detection {
  DetectionType type = DetectionType::thw;
  int subject = -1;  // track index
  int partner = -1;  // track index, -1 for unilateral types
  int frame_begin = 0;
  int frame_end = 0;
  double value = 0.0;
  double limit = 0.0;  // exceeded limit, vehicle-state and velocity types
  // dmttcp extras: both times-to-conflict-point and the critical point.
  double mttcp_subject = 0.0;
  double mttcp_partner = 0.0;
  Vec2 ccp;
  std::vector<RegionShare> regions;

  bool active_at(int frame) const {
    return frame >= frame_begin && frame <= frame_end;
  }
};

/// Canonical (frame, subject, partner, type) ordering used whenever
/// detection lists from parallel work are merged.
bool detection_order(const Detection& a, const Detection& b);

}  // namespace trajscore
