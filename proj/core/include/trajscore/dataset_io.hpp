#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "trajscore/types.hpp"

namespace trajscore {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingColumnError : IoError {
  explicit MissingColumnError(const std::string& file, const std::string& col)
      : IoError("missing column '" + col + "' in " + file) {}
};

struct NonContiguousFramesError : IoError {
  explicit NonContiguousFramesError(int track_id)
      : IoError("track " + std::to_string(track_id) + " has frame gaps") {}
};

struct UnitParseError : IoError {
  explicit UnitParseError(const std::string& file, size_t row,
                          const std::string& field)
      : IoError("cannot parse '" + field + "' at " + file + ":" +
                std::to_string(row)) {}
};

/// Loads an inD-style CSV triple (tracks, tracksMeta, recordingMeta) into a
/// Recording. Headings are converted degrees -> radians and wrapped, speeds
/// are recomputed from the velocity components and all derived kinematic
/// quantities (yaw rate, sideslip, body-frame accelerations) are filled in.
Recording load_recording(const std::filesystem::path& tracks_path,
                         const std::filesystem::path& tracks_meta_path,
                         const std::filesystem::path& recording_meta_path);

/// Writes the recording back as an inD-style CSV triple with canonical
/// formatting (shortest round-trip representation for numeric fields).
void write_recording(const Recording& rec,
                     const std::filesystem::path& tracks_path,
                     const std::filesystem::path& tracks_meta_path,
                     const std::filesystem::path& recording_meta_path);

/// Fills yaw_rate, sideslip and (unless the dataset provided them) the
/// body-frame accelerations with finite differences. Interior frames use
/// central differences, the boundary frames one-sided ones. Idempotent.
Track derive_kinematics(Track track, double frame_rate,
                        bool accelerations_from_file = false);

}  // namespace trajscore
