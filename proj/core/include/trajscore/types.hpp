#pragma once

#include <string>
#include <vector>

#include "trajscore/math.hpp"

namespace trajscore {

enum class RoadUserClass {
  car,
  truck_bus,
  van,
  motorcycle,
  bicycle,
  pedestrian,
  unknown,
};

RoadUserClass road_user_class_from_string(const std::string& s);
std::string to_string(RoadUserClass c);

/// Pedestrians and bicycles are vulnerable road users; everything else
/// (including unknown) is treated as motorized.
inline bool is_vru(RoadUserClass c) {
  return c == RoadUserClass::bicycle || c == RoadUserClass::pedestrian;
}

/// Kinematic state of one road user at one frame. All units SI,
/// heading wrapped to (-pi, pi].
struct TrackState {
  int frame = 0;
  double t = 0.0;
  Vec2 position;
  double heading = 0.0;    // rad
  double speed = 0.0;      // m/s, recomputed from velocity at load
  Vec2 velocity;           // m/s
  double accel_lon = 0.0;  // m/s^2, along heading
  double accel_lat = 0.0;  // m/s^2, left-positive
  double yaw_rate = 0.0;   // rad/s
  double sideslip = 0.0;   // rad, 0 when standing
};

// Footprint radius used for VRUs, which datasets give as points.
inline constexpr double kVruFootprintRadius = 2.5;

struct Track {
  int track_id = 0;
  RoadUserClass cls = RoadUserClass::unknown;
  double width = 0.0;   // m, vehicles only
  double length = 0.0;  // m, vehicles only
  std::vector<TrackState> states;

  double footprint_radius() const { return kVruFootprintRadius; }
  int first_frame() const { return states.front().frame; }
  int last_frame() const { return states.back().frame; }
  bool has_frame(int frame) const {
    return frame >= first_frame() && frame <= last_frame();
  }
  /// Index into states for an in-range frame. Frames are contiguous.
  int state_index(int frame) const { return frame - first_frame(); }
  const TrackState& state_at(int frame) const {
    return states[static_cast<size_t>(state_index(frame))];
  }
};

struct Recording {
  int recording_id = 0;
  int location_id = 0;
  double frame_rate = 25.0;  // Hz
  double duration = 0.0;     // s
  std::vector<Track> tracks;

  double dt() const { return 1.0 / frame_rate; }
};

}  // namespace trajscore
