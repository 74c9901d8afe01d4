#pragma once

#include <optional>
#include <vector>

#include "trajscore/config.hpp"
#include "trajscore/detections.hpp"
#include "trajscore/semantic_map.hpp"
#include "trajscore/types.hpp"

namespace trajscore {

/// Normal-driving limits as piecewise functions of speed in km/h.
namespace state_limits {
double limit_lon(double v_kmh);       // m/s^2
double limit_lat(double v_kmh);       // m/s^2
double limit_yaw(double v_kmh);       // rad/s
double limit_sideslip(double v_kmh);  // rad
}  // namespace state_limits

/// Limit exceedances of one state. Motorized classes only; VRUs return
/// nothing. Emitted detections carry subject/frame filled in.
std::vector<Detection> check_vehicle_state(const TrackState& state,
                                           RoadUserClass cls, int track_index);

/// Speed-limit check against the most permissive assigned region.
std::optional<Detection> check_speed_limit(
    const TrackState& state, const std::vector<AssignmentEntry>& assignment,
    const SemanticMap& map, int track_index);

}  // namespace trajscore
