#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "trajscore/types.hpp"

namespace test_helpers {

using trajscore::RoadUserClass;
using trajscore::Track;
using trajscore::TrackState;
using trajscore::Vec2;

inline Track make_track(int track_id, RoadUserClass cls,
                        const std::vector<Vec2>& positions, double frame_rate,
                        int first_frame = 0, double length = 4.0,
                        double width = 2.0) {
  Track t;
  t.track_id = track_id;
  t.cls = cls;
  t.length = length;
  t.width = width;
  const double dt = 1.0 / frame_rate;
  for (size_t i = 0; i < positions.size(); ++i) {
    TrackState s;
    s.frame = first_frame + static_cast<int>(i);
    s.t = dt * static_cast<double>(s.frame);
    s.position = positions[i];
    size_t a = i > 0 ? i - 1 : i;
    size_t b = i + 1 < positions.size() ? i + 1 : i;
    Vec2 d = positions[b] - positions[a];
    double span = dt * static_cast<double>(b - a);
    s.velocity = span > 0.0 ? d * (1.0 / span) : Vec2{};
    s.speed = s.velocity.norm();
    s.heading = s.speed > 1e-9 ? std::atan2(s.velocity.y, s.velocity.x) : 0.0;
    t.states.push_back(s);
  }
  // Headings of stationary frames inherit the nearest moving neighbor.
  for (size_t i = 1; i < t.states.size(); ++i)
    if (t.states[i].speed <= 1e-9) t.states[i].heading = t.states[i - 1].heading;
  for (size_t i = t.states.size(); i-- > 1;)
    if (t.states[i - 1].speed <= 1e-9)
      t.states[i - 1].heading = t.states[i].heading;
  return t;
}

/// Straight constant-speed run from `start` along `heading`.
inline Track straight_track(int track_id, Vec2 start, double heading,
                            double speed, size_t frames, double frame_rate,
                            RoadUserClass cls = RoadUserClass::car,
                            int first_frame = 0) {
  std::vector<Vec2> pos;
  const double dt = 1.0 / frame_rate;
  Vec2 dir{std::cos(heading), std::sin(heading)};
  for (size_t i = 0; i < frames; ++i)
    pos.push_back(start + dir * (speed * dt * static_cast<double>(i)));
  Track t = make_track(track_id, cls, pos, frame_rate, first_frame);
  for (auto& s : t.states) s.heading = heading;
  return t;
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("trajscore_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(file(name), std::ios::binary);
    out << content;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace test_helpers
