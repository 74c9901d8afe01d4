#include "trajscore/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "trajscore/format.hpp"

namespace trajscore {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name, bool required = true) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw MissingColumnError(file, name);
      return -1;
    }
    return static_cast<int>(it - header.begin());
  }

  double num(size_t row, int col) const {
    const std::string& f = rows[row][static_cast<size_t>(col)];
    char* end = nullptr;
    double v = std::strtod(f.c_str(), &end);
    if (end == f.c_str() || *end != '\0')
      throw UnitParseError(file, row + 2, f);  // +2: header + 1-based
    return v;
  }
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable t;
  t.file = path.string();
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file " + path.string());
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != t.header.size())
      throw UnitParseError(t.file, t.rows.size() + 2, line);
    t.rows.push_back(std::move(fields));
  }
  return t;
}

}  // namespace

RoadUserClass road_user_class_from_string(const std::string& s) {
  static const std::unordered_map<std::string, RoadUserClass> table = {
      {"car", RoadUserClass::car},
      {"truck_bus", RoadUserClass::truck_bus},
      {"truck", RoadUserClass::truck_bus},
      {"bus", RoadUserClass::truck_bus},
      {"van", RoadUserClass::van},
      {"motorcycle", RoadUserClass::motorcycle},
      {"bicycle", RoadUserClass::bicycle},
      {"pedestrian", RoadUserClass::pedestrian},
  };
  auto it = table.find(s);
  return it == table.end() ? RoadUserClass::unknown : it->second;
}

std::string to_string(RoadUserClass c) {
  switch (c) {
    case RoadUserClass::car: return "car";
    case RoadUserClass::truck_bus: return "truck_bus";
    case RoadUserClass::van: return "van";
    case RoadUserClass::motorcycle: return "motorcycle";
    case RoadUserClass::bicycle: return "bicycle";
    case RoadUserClass::pedestrian: return "pedestrian";
    case RoadUserClass::unknown: break;
  }
  return "unknown";
}

Track derive_kinematics(Track track, double frame_rate,
                        bool accelerations_from_file) {
  const double dt = 1.0 / frame_rate;
  auto& st = track.states;
  const size_t n = st.size();
  if (n == 0) return track;

  for (size_t i = 0; i < n; ++i) {
    // Differences of neighbouring frames; one-sided at the boundaries.
    const size_t lo = i > 0 ? i - 1 : i;
    const size_t hi = i + 1 < n ? i + 1 : i;
    const double span = static_cast<double>(hi - lo) * dt;

    if (span > 0.0) {
      st[i].yaw_rate = angle_diff(st[hi].heading, st[lo].heading) / span;
    } else {
      st[i].yaw_rate = 0.0;
    }
    if (st[i].speed > 0.5) {
      st[i].sideslip = wrap_angle(
          std::atan2(st[i].velocity.y, st[i].velocity.x) - st[i].heading);
    } else {
      st[i].sideslip = 0.0;
    }
    if (!accelerations_from_file) {
      Vec2 a{0.0, 0.0};
      if (span > 0.0) a = (st[hi].velocity - st[lo].velocity) * (1.0 / span);
      const double c = std::cos(st[i].heading), s = std::sin(st[i].heading);
      st[i].accel_lon = a.x * c + a.y * s;
      st[i].accel_lat = -a.x * s + a.y * c;
    }
  }
  return track;
}

Recording load_recording(const std::filesystem::path& tracks_path,
                         const std::filesystem::path& tracks_meta_path,
                         const std::filesystem::path& recording_meta_path) {
  Recording rec;

  const CsvTable rmeta = read_csv(recording_meta_path);
  {
    const int c_id = rmeta.column("recordingId");
    const int c_loc = rmeta.column("locationId");
    const int c_fr = rmeta.column("frameRate");
    const int c_dur = rmeta.column("duration");
    if (rmeta.rows.empty())
      throw IoError("no rows in " + recording_meta_path.string());
    rec.recording_id = static_cast<int>(rmeta.num(0, c_id));
    rec.location_id = static_cast<int>(rmeta.num(0, c_loc));
    rec.frame_rate = rmeta.num(0, c_fr);
    rec.duration = rmeta.num(0, c_dur);
    if (rec.frame_rate <= 0.0)
      throw IoError("non-positive frame rate in " +
                    recording_meta_path.string());
  }

  struct Meta {
    RoadUserClass cls;
    double width, length;
  };
  std::map<int, Meta> meta;
  {
    const CsvTable tm = read_csv(tracks_meta_path);
    const int c_tid = tm.column("trackId");
    const int c_w = tm.column("width");
    const int c_l = tm.column("length");
    const int c_cls = tm.column("class");
    tm.column("recordingId");
    tm.column("initialFrame");
    tm.column("finalFrame");
    tm.column("numFrames");
    for (size_t r = 0; r < tm.rows.size(); ++r) {
      const int tid = static_cast<int>(tm.num(r, c_tid));
      const std::string& cls_str = tm.rows[r][static_cast<size_t>(c_cls)];
      RoadUserClass cls = road_user_class_from_string(cls_str);
      if (cls == RoadUserClass::unknown && cls_str != "unknown")
        std::cerr << "warning: unrecognized road user class '" << cls_str
                  << "' for track " << tid << ", treating as unknown\n";
      meta[tid] = Meta{cls, tm.num(r, c_w), tm.num(r, c_l)};
    }
  }

  const CsvTable tt = read_csv(tracks_path);
  const int c_tid = tt.column("trackId");
  const int c_frame = tt.column("frame");
  const int c_x = tt.column("xCenter");
  const int c_y = tt.column("yCenter");
  const int c_head = tt.column("heading");
  const int c_vx = tt.column("xVelocity");
  const int c_vy = tt.column("yVelocity");
  const int c_ax = tt.column("xAcceleration", false);
  const int c_ay = tt.column("yAcceleration", false);
  tt.column("recordingId");
  tt.column("width");
  tt.column("length");
  const bool have_accel = c_ax >= 0 && c_ay >= 0;

  std::map<int, Track> tracks;
  for (size_t r = 0; r < tt.rows.size(); ++r) {
    const int tid = static_cast<int>(tt.num(r, c_tid));
    Track& track = tracks[tid];
    track.track_id = tid;

    TrackState s;
    s.frame = static_cast<int>(tt.num(r, c_frame));
    s.t = s.frame / rec.frame_rate;
    s.position = {tt.num(r, c_x), tt.num(r, c_y)};
    s.heading = wrap_angle(deg_to_rad(tt.num(r, c_head)));
    s.velocity = {tt.num(r, c_vx), tt.num(r, c_vy)};
    s.speed = s.velocity.norm();
    if (have_accel) {
      const Vec2 a{tt.num(r, c_ax), tt.num(r, c_ay)};
      const double c = std::cos(s.heading), sn = std::sin(s.heading);
      s.accel_lon = a.x * c + a.y * sn;
      s.accel_lat = -a.x * sn + a.y * c;
    }
    track.states.push_back(s);
  }

  for (auto& [tid, track] : tracks) {
    auto it = meta.find(tid);
    if (it != meta.end()) {
      track.cls = it->second.cls;
      track.width = it->second.width;
      track.length = it->second.length;
    }
    std::sort(track.states.begin(), track.states.end(),
              [](const TrackState& a, const TrackState& b) {
                return a.frame < b.frame;
              });
    for (size_t i = 1; i < track.states.size(); ++i) {
      if (track.states[i].frame != track.states[i - 1].frame + 1)
        throw NonContiguousFramesError(tid);
    }
    track = derive_kinematics(std::move(track), rec.frame_rate, have_accel);
    rec.tracks.push_back(std::move(track));
  }
  return rec;
}

void write_recording(const Recording& rec,
                     const std::filesystem::path& tracks_path,
                     const std::filesystem::path& tracks_meta_path,
                     const std::filesystem::path& recording_meta_path) {
  {
    std::ofstream out(recording_meta_path);
    out << "recordingId,locationId,frameRate,duration\n";
    out << rec.recording_id << ',' << rec.location_id << ','
        << format_double(rec.frame_rate) << ',' << format_double(rec.duration)
        << '\n';
  }
  {
    std::ofstream out(tracks_meta_path);
    out << "recordingId,trackId,initialFrame,finalFrame,numFrames,width,"
           "length,class\n";
    for (const Track& t : rec.tracks) {
      out << rec.recording_id << ',' << t.track_id << ',' << t.first_frame()
          << ',' << t.last_frame() << ',' << t.states.size() << ','
          << format_double(t.width) << ',' << format_double(t.length) << ','
          << to_string(t.cls) << '\n';
    }
  }
  {
    std::ofstream out(tracks_path);
    out << "recordingId,trackId,frame,xCenter,yCenter,heading,width,length,"
           "xVelocity,yVelocity,xAcceleration,yAcceleration\n";
    for (const Track& t : rec.tracks) {
      for (const TrackState& s : t.states) {
        const double c = std::cos(s.heading), sn = std::sin(s.heading);
        // Back to the world frame the dataset stores.
        const double ax = s.accel_lon * c - s.accel_lat * sn;
        const double ay = s.accel_lon * sn + s.accel_lat * c;
        out << rec.recording_id << ',' << t.track_id << ',' << s.frame << ','
            << format_double(s.position.x) << ',' << format_double(s.position.y)
            << ',' << format_double(rad_to_deg(s.heading)) << ','
            << format_double(t.width) << ',' << format_double(t.length) << ','
            << format_double(s.velocity.x) << ',' << format_double(s.velocity.y)
            << ',' << format_double(ax) << ',' << format_double(ay) << '\n';
      }
    }
  }
}

}  // namespace trajscore
