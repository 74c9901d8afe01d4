#include "trajscore/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "trajscore/context_detections.hpp"
#include "trajscore/dataset_io.hpp"
#include "trajscore/format.hpp"
#include "trajscore/parallel.hpp"
#include "trajscore/relation_detections.hpp"
#include "trajscore/state_detections.hpp"

namespace trajscore {

namespace {

struct FrameIndex {
  int first_frame = 0;
  // Per frame: indices into the detection list, and the subjects present.
  std::vector<std::vector<size_t>> detections;

  static FrameIndex build(const std::vector<Detection>& dets, int lo, int hi) {
    FrameIndex idx;
    idx.first_frame = lo;
    idx.detections.resize(static_cast<size_t>(hi - lo + 1));
    for (size_t i = 0; i < dets.size(); ++i) {
      for (int f = dets[i].frame_begin; f <= dets[i].frame_end; ++f)
        idx.detections[static_cast<size_t>(f - lo)].push_back(i);
    }
    return idx;
  }
};

}  // namespace

AnalysisResult analyze(const Recording& rec, const SemanticMap& map,
                       const AnalysisConfig& cfg) {
  AnalysisResult res;
  res.recording_id = rec.recording_id;
  res.location_id = rec.location_id;
  res.duration = rec.duration;
  res.config = cfg;
  for (const Track& t : rec.tracks) res.track_ids.push_back(t.track_id);
  if (rec.tracks.empty()) {
    res.context = RegionContext::build({}, {}, map.regions.size());
    for (const Region& r : map.regions) res.regions.push_back({r.id, {}});
    return res;
  }

  std::vector<TrackGeometry> geoms = build_track_geometries(rec, cfg);
  RegionAssignments assignments = assign_all_regions(rec, map);

  // Pass 1: all fourteen detection types.
  std::vector<Detection> dets = relation_detections(rec, geoms, cfg);
  for (size_t ti = 0; ti < rec.tracks.size(); ++ti) {
    const Track& t = rec.tracks[ti];
    for (size_t i = 0; i < t.states.size(); ++i) {
      auto vs = check_vehicle_state(t.states[i], t.cls, static_cast<int>(ti));
      dets.insert(dets.end(), vs.begin(), vs.end());
      if (auto d = check_speed_limit(t.states[i], assignments[ti][i], map,
                                     static_cast<int>(ti)))
        dets.push_back(*d);
    }
  }
  {
    auto cds = context_detections(rec, map, assignments, geoms, cfg);
    dets.insert(dets.end(), cds.begin(), cds.end());
  }
  for (Detection& d : dets) {
    if (d.regions.empty() && d.frame_begin == d.frame_end) {
      const Track& t = rec.tracks[static_cast<size_t>(d.subject)];
      const auto& asg = assignments[static_cast<size_t>(d.subject)]
                                   [static_cast<size_t>(
                                        t.state_index(d.frame_begin))];
      for (const AssignmentEntry& e : asg)
        d.regions.push_back({e.region, e.fraction});
    }
  }
  std::sort(dets.begin(), dets.end(), detection_order);
  res.detections = std::move(dets);
  for (const Detection& d : res.detections)
    ++res.detection_counts[static_cast<size_t>(d.type)];

  // Pass 2: contexts, punctual scores, aggregation.
  res.context =
      RegionContext::build(res.detections, assignments, map.regions.size());

  int lo = rec.tracks.front().first_frame();
  int hi = rec.tracks.front().last_frame();
  for (const Track& t : rec.tracks) {
    lo = std::min(lo, t.first_frame());
    hi = std::max(hi, t.last_frame());
  }
  FrameIndex index = FrameIndex::build(res.detections, lo, hi);

  res.punctual.resize(rec.tracks.size());
  std::vector<std::vector<double>> baseline_series(rec.tracks.size());
  for (size_t ti = 0; ti < rec.tracks.size(); ++ti) {
    const Track& t = rec.tracks[ti];
    res.punctual[ti].first_frame = t.first_frame();
    res.punctual[ti].interaction.assign(t.states.size(), 0.0);
    res.punctual[ti].anomaly.assign(t.states.size(), 0.0);
    res.punctual[ti].relevance.assign(t.states.size(), 0.0);
    baseline_series[ti].assign(t.states.size(), 0.0);
  }

  std::vector<Detection> baseline_dets;
  for (const Detection& d : res.detections)
    if (d.type == DetectionType::wp || d.type == DetectionType::dmttcp)
      baseline_dets.push_back(d);
  FrameIndex baseline_index = FrameIndex::build(baseline_dets, lo, hi);

  parallel_for(index.detections.size(), [&](size_t fi) {
    int frame = lo + static_cast<int>(fi);
    const auto& ids = index.detections[fi];
    if (!ids.empty()) {
      std::vector<Detection> bucket;
      bucket.reserve(ids.size());
      std::vector<int> subjects;
      for (size_t id : ids) {
        bucket.push_back(res.detections[id]);
        subjects.push_back(res.detections[id].subject);
      }
      std::sort(subjects.begin(), subjects.end());
      subjects.erase(std::unique(subjects.begin(), subjects.end()),
                     subjects.end());
      for (int s : subjects) {
        auto si = static_cast<size_t>(s);
        auto k = static_cast<size_t>(
            rec.tracks[si].state_index(frame));
        double s_i = interaction_punctual(s, frame, bucket, cfg);
        double s_a = anomaly_punctual(s, frame, bucket, res.context, cfg);
        res.punctual[si].interaction[k] = s_i;
        res.punctual[si].anomaly[k] = s_a;
        res.punctual[si].relevance[k] = relevance_punctual(s_i, s_a, cfg);
      }
    }
    const auto& bids = baseline_index.detections[fi];
    if (!bids.empty()) {
      std::vector<Detection> bucket;
      std::vector<int> subjects;
      for (size_t id : bids) {
        bucket.push_back(baseline_dets[id]);
        subjects.push_back(baseline_dets[id].subject);
      }
      std::sort(subjects.begin(), subjects.end());
      subjects.erase(std::unique(subjects.begin(), subjects.end()),
                     subjects.end());
      for (int s : subjects) {
        auto si = static_cast<size_t>(s);
        auto k = static_cast<size_t>(rec.tracks[si].state_index(frame));
        baseline_series[si][k] = interaction_punctual(s, frame, bucket, cfg);
      }
    }
  });

  res.tracks.resize(rec.tracks.size());
  for (size_t ti = 0; ti < rec.tracks.size(); ++ti) {
    TrackResult& tr = res.tracks[ti];
    tr.track_id = rec.tracks[ti].track_id;
    tr.scores.interaction = positive_variation(res.punctual[ti].interaction);
    tr.scores.relevance = positive_variation(res.punctual[ti].relevance);
    tr.scores.anomaly = anomaly_abstract(res.detections, res.context, cfg,
                                         std::nullopt, static_cast<int>(ti));
    size_t peak = 0;
    for (size_t k = 1; k < res.punctual[ti].relevance.size(); ++k)
      if (res.punctual[ti].relevance[k] > res.punctual[ti].relevance[peak])
        peak = k;
    tr.peak_frame = rec.tracks[ti].first_frame() + static_cast<int>(peak);
    res.dataset.interaction += tr.scores.interaction;
    res.dataset.relevance += tr.scores.relevance;
    res.baseline_interaction += positive_variation(baseline_series[ti]);
  }
  res.dataset.anomaly = anomaly_abstract(res.detections, res.context, cfg);

  for (size_t r = 0; r < map.regions.size(); ++r) {
    RegionResult rr;
    rr.id = map.regions[r].id;
    for (size_t ti = 0; ti < rec.tracks.size(); ++ti) {
      std::vector<double> sub_i, sub_r;
      for (size_t k = 0; k < rec.tracks[ti].states.size(); ++k) {
        bool member = false;
        for (const AssignmentEntry& e : assignments[ti][k])
          if (e.region == static_cast<int>(r)) member = true;
        if (!member) continue;
        sub_i.push_back(res.punctual[ti].interaction[k]);
        sub_r.push_back(res.punctual[ti].relevance[k]);
      }
      rr.scores.interaction += positive_variation(sub_i);
      rr.scores.relevance += positive_variation(sub_r);
    }
    rr.scores.anomaly = anomaly_abstract(res.detections, res.context, cfg,
                                         static_cast<int>(r));
    res.regions.push_back(std::move(rr));
  }
  return res;
}

std::vector<TopItem> top_k(const AnalysisResult& res, ScoreKind kind, size_t k,
                           bool punctual_level) {
  auto pick = [kind](const ScoreTriple& s) {
    switch (kind) {
      case ScoreKind::interaction: return s.interaction;
      case ScoreKind::anomaly: return s.anomaly;
      case ScoreKind::relevance: return s.relevance;
    }
    return 0.0;
  };
  std::vector<TopItem> items;
  if (punctual_level) {
    for (size_t ti = 0; ti < res.punctual.size(); ++ti) {
      const TrackSeries& s = res.punctual[ti];
      for (size_t i = 0; i < s.interaction.size(); ++i) {
        double v = pick({s.interaction[i], s.anomaly[i], s.relevance[i]});
        if (v <= 0.0) continue;
        items.push_back({res.track_ids[ti],
                         s.first_frame + static_cast<int>(i), v, {}});
      }
    }
  } else {
    for (size_t ti = 0; ti < res.tracks.size(); ++ti)
      items.push_back({res.tracks[ti].track_id, res.tracks[ti].peak_frame,
                       pick(res.tracks[ti].scores), {}});
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const TopItem& a, const TopItem& b) {
                     if (a.value != b.value) return a.value > b.value;
                     return std::tie(a.track_id, a.frame) <
                            std::tie(b.track_id, b.frame);
                   });
  if (items.size() > k) items.resize(k);
  // Provenance: the subject's detections active at the item frame.
  std::map<int, size_t> index_of_id;
  for (size_t ti = 0; ti < res.track_ids.size(); ++ti)
    index_of_id[res.track_ids[ti]] = ti;
  for (TopItem& it : items) {
    int subject = static_cast<int>(index_of_id.at(it.track_id));
    for (size_t di = 0; di < res.detections.size(); ++di) {
      const Detection& d = res.detections[di];
      if (d.subject == subject && d.active_at(it.frame))
        it.detection_ids.push_back(di);
    }
  }
  return items;
}

namespace {

nlohmann::ordered_json scores_json(const ScoreTriple& s) {
  return {{"interaction", s.interaction},
          {"anomaly", s.anomaly},
          {"relevance", s.relevance}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

void write_reports(const AnalysisResult& res, const SemanticMap& map,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  nlohmann::ordered_json j;
  j["recording_id"] = res.recording_id;
  j["config_hash"] = res.config.hash();
  j["location_id"] = res.location_id;
  j["duration"] = res.duration;
  j["track_count"] = res.track_ids.size();
  j["dataset_scores"] = scores_json(res.dataset);
  j["baseline_interaction"] = res.baseline_interaction;
  j["tracks"] = nlohmann::ordered_json::array();
  for (const TrackResult& t : res.tracks)
    j["tracks"].push_back({{"id", t.track_id},
                           {"scores", scores_json(t.scores)},
                           {"peak_frame", t.peak_frame}});
  j["regions"] = nlohmann::ordered_json::array();
  for (const RegionResult& r : res.regions)
    j["regions"].push_back({{"id", r.id}, {"scores", scores_json(r.scores)}});
  j["detection_counts_by_type"] = nlohmann::ordered_json::object();
  for (int t = 0; t < kDetectionTypeCount; ++t)
    j["detection_counts_by_type"][to_string(static_cast<DetectionType>(t))] =
        res.detection_counts[static_cast<size_t>(t)];
  write_file(out_dir / "report.json", j.dump(2) + "\n");

  {
    std::ostringstream out;
    out << "track_id,interaction,anomaly,relevance,peak_frame\n";
    for (const TrackResult& t : res.tracks)
      out << t.track_id << ',' << format_double(t.scores.interaction) << ','
          << format_double(t.scores.anomaly) << ','
          << format_double(t.scores.relevance) << ',' << t.peak_frame << '\n';
    write_file(out_dir / "track_scores.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "region_id,interaction,anomaly,relevance\n";
    for (const RegionResult& r : res.regions)
      out << r.id << ',' << format_double(r.scores.interaction) << ','
          << format_double(r.scores.anomaly) << ','
          << format_double(r.scores.relevance) << '\n';
    write_file(out_dir / "region_scores.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "track_id,frame,interaction,anomaly,relevance\n";
    for (size_t ti = 0; ti < res.punctual.size(); ++ti) {
      const TrackSeries& s = res.punctual[ti];
      for (size_t i = 0; i < s.interaction.size(); ++i) {
        if (s.interaction[i] == 0.0 && s.anomaly[i] == 0.0 &&
            s.relevance[i] == 0.0)
          continue;
        out << res.track_ids[ti] << ','
            << s.first_frame + static_cast<int>(i) << ','
            << format_double(s.interaction[i]) << ','
            << format_double(s.anomaly[i]) << ','
            << format_double(s.relevance[i]) << '\n';
      }
    }
    write_file(out_dir / "punctual_scores.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "type,track_id,partner_track_id,frame_begin,frame_end,value,"
           "limit,score,regions\n";
    for (const Detection& d : res.detections) {
      out << to_string(d.type) << ','
          << res.track_ids[static_cast<size_t>(d.subject)] << ',';
      if (d.partner >= 0)
        out << res.track_ids[static_cast<size_t>(d.partner)];
      out << ',' << d.frame_begin << ',' << d.frame_end << ','
          << format_double(d.value) << ',' << format_double(d.limit) << ','
          << format_double(score_detection(d, res.config)) << ',';
      for (size_t i = 0; i < d.regions.size(); ++i) {
        if (i) out << ';';
        out << map.regions[static_cast<size_t>(d.regions[i].region)].id << ':'
            << format_double(d.regions[i].fraction);
      }
      out << '\n';
    }
    write_file(out_dir / "detections.csv", out.str());
  }

  const char* names[] = {"heatmap_interaction.csv", "heatmap_anomaly.csv",
                         "heatmap_relevance.csv"};
  for (int kind = 0; kind < 3; ++kind) {
    std::vector<double> scores;
    for (const RegionResult& r : res.regions)
      scores.push_back(kind == 0   ? r.scores.interaction
                       : kind == 1 ? r.scores.anomaly
                                   : r.scores.relevance);
    HeatmapGrid grid = heatmap(map, scores, res.config.heatmap_resolution);
    write_file(out_dir / names[kind], heatmap_csv(grid));
  }
}

RecordingSummary read_summary(const std::filesystem::path& report_dir) {
  std::ifstream in(report_dir / "report.json");
  if (!in) throw IoError("cannot open " + (report_dir / "report.json").string());
  nlohmann::json j = nlohmann::json::parse(in);
  RecordingSummary s;
  s.recording_id = j.at("recording_id").get<int>();
  s.location_id = j.at("location_id").get<int>();
  s.duration = j.at("duration").get<double>();
  s.track_count = j.at("track_count").get<size_t>();
  s.dataset.interaction = j.at("dataset_scores").at("interaction").get<double>();
  s.dataset.anomaly = j.at("dataset_scores").at("anomaly").get<double>();
  s.dataset.relevance = j.at("dataset_scores").at("relevance").get<double>();
  s.baseline_interaction = j.at("baseline_interaction").get<double>();
  return s;
}

}  // namespace trajscore
