#include "trajscore/detections.hpp"

#include <tuple>

namespace trajscore {

bool detection_order(const Detection& a, const Detection& b) {
  return std::tie(a.frame_begin, a.subject, a.partner, a.type, a.frame_end) <
         std::tie(b.frame_begin, b.subject, b.partner, b.type, b.frame_end);
}

std::string to_string(DetectionType t) {
  switch (t) {
    case DetectionType::thw: return "thw";
    case DetectionType::ttc: return "ttc";
    case DetectionType::drac: return "drac";
    case DetectionType::dmttcp: return "dmttcp";
    case DetectionType::wp: return "wp";
    case DetectionType::lon_accel: return "lon_accel";
    case DetectionType::lat_accel: return "lat_accel";
    case DetectionType::sideslip: return "sideslip";
    case DetectionType::yaw_rate: return "yaw_rate";
    case DetectionType::area_usage: return "area_usage";
    case DetectionType::driving_direction: return "driving_direction";
    case DetectionType::velocity: return "velocity";
    case DetectionType::driving_behavior: return "driving_behavior";
    case DetectionType::trajectory: return "trajectory";
  }
  return "unknown";
}

}  // namespace trajscore
