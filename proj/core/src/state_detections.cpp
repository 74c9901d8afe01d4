#include "trajscore/state_detections.hpp"

#include <cmath>

namespace trajscore {

namespace state_limits {

double limit_lon(double v) {
  if (v <= 50.0) return 4.0;
  // Ramp descending to the 2 m/s^2 floor; the floor keeps the function
  // continuous across the high-speed band.
  return std::max(2.0, 4.0 - 2.0 * (v - 50.0) / 100.0);
}

double limit_lat(double v) {
  if (v <= 40.0) return 2.5 + 4.5 * v / 40.0;
  if (v <= 50.0) return 7.0;
  if (v <= 100.0) return 7.0 - 4.0 * (v - 50.0) / 50.0;
  return 3.0;
}

double limit_yaw(double v) {
  return v <= 50.0 ? 50.0 / 180.0 * kPi : 15.0 / 180.0 * kPi;
}

double limit_sideslip(double) { return 0.1745; }

}  // namespace state_limits

std::vector<Detection> check_vehicle_state(const TrackState& state,
                                           RoadUserClass cls,
                                           int track_index) {
  std::vector<Detection> out;
  if (is_vru(cls)) return out;
  const double v_kmh = state.speed * 3.6;
  auto emit = [&](DetectionType type, double observed, double limit) {
    if (std::abs(observed) <= limit) return;
    Detection d;
    d.type = type;
    d.subject = track_index;
    d.frame_begin = d.frame_end = state.frame;
    d.value = observed;
    d.limit = limit;
    out.push_back(d);
  };
  emit(DetectionType::lon_accel, state.accel_lon,
       state_limits::limit_lon(v_kmh));
  emit(DetectionType::lat_accel, state.accel_lat,
       state_limits::limit_lat(v_kmh));
  emit(DetectionType::yaw_rate, state.yaw_rate,
       state_limits::limit_yaw(v_kmh));
  emit(DetectionType::sideslip, state.sideslip,
       state_limits::limit_sideslip(v_kmh));
  return out;
}

std::optional<Detection> check_speed_limit(
    const TrackState& state, const std::vector<AssignmentEntry>& assignment,
    const SemanticMap& map, int track_index) {
  bool any = false;
  double limit = 0.0;
  for (const AssignmentEntry& e : assignment) {
    const auto& sl = map.regions[static_cast<size_t>(e.region)].speed_limit;
    if (!sl) continue;
    if (!any || *sl > limit) limit = *sl;
    any = true;
  }
  if (!any || state.speed <= limit) return std::nullopt;
  Detection d;
  d.type = DetectionType::velocity;
  d.subject = track_index;
  d.frame_begin = d.frame_end = state.frame;
  d.value = state.speed;
  d.limit = limit;
  return d;
}

}  // namespace trajscore
