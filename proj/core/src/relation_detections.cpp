#include "trajscore/relation_detections.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "trajscore/parallel.hpp"

namespace trajscore {

namespace {

double half_length(const Track& t) {
  return is_vru(t.cls) ? kVruFootprintRadius : 0.5 * t.length;
}

/// Along-path center-to-center gap when `subject` follows `partner`:
/// the partner's position must project onto the subject's future path
/// within the lateral tolerance, with near-parallel headings.
std::optional<double> follow_gap(const Recording& rec,
                                 const std::vector<TrackGeometry>& geoms,
                                 int subject, int partner, int frame,
                                 const AnalysisConfig& cfg) {
  const Track& st = rec.tracks[static_cast<size_t>(subject)];
  const Track& pt = rec.tracks[static_cast<size_t>(partner)];
  const TrackState& ss = st.state_at(frame);
  const TrackState& ps = pt.state_at(frame);
  if (std::abs(angle_diff(ss.heading, ps.heading)) >=
      deg_to_rad(cfg.follow_heading_tol_deg))
    return std::nullopt;
  const PolyPath& path = geoms[static_cast<size_t>(subject)].path;
  if (path.empty()) return std::nullopt;
  double s0 = path.s_at_frame(frame, st.first_frame());
  auto proj = project_onto_path(path, ps.position, s0);
  if (!proj || proj->lateral > cfg.follow_lateral_tol) return std::nullopt;
  double gap = proj->s - s0;
  if (gap <= 0.0) return std::nullopt;
  return gap;
}

}  // namespace

std::vector<TrackGeometry> build_track_geometries(const Recording& rec,
                                                  const AnalysisConfig& cfg) {
  std::vector<TrackGeometry> geoms(rec.tracks.size());
  parallel_for(rec.tracks.size(), [&](size_t i) {
    const Track& t = rec.tracks[i];
    TrackGeometry& g = geoms[i];
    g.path = resample_path(t, cfg.resample_ds);
    g.footprint = FootprintSpec::for_track(t);
    g.grid = swept_footprint_grid(g.path, g.footprint, cfg.conflict_cell);
  });
  return geoms;
}

const std::vector<std::pair<int, int>>& PairGate::pairs_at(int frame) const {
  static const std::vector<std::pair<int, int>> kEmpty;
  int idx = frame - first_frame;
  if (idx < 0 || idx >= static_cast<int>(pairs_by_frame.size())) return kEmpty;
  return pairs_by_frame[static_cast<size_t>(idx)];
}

PairGate candidate_pairs(const Recording& rec, double radius) {
  PairGate gate;
  if (rec.tracks.empty()) return gate;
  int lo = rec.tracks.front().first_frame();
  int hi = rec.tracks.front().last_frame();
  for (const Track& t : rec.tracks) {
    lo = std::min(lo, t.first_frame());
    hi = std::max(hi, t.last_frame());
  }
  gate.first_frame = lo;
  gate.pairs_by_frame.resize(static_cast<size_t>(hi - lo + 1));

  const double r2 = radius * radius;
  parallel_for(gate.pairs_by_frame.size(), [&](size_t fi) {
    int frame = lo + static_cast<int>(fi);
    // Uniform hash with cell size = radius, so only 3x3 neighborhoods
    // need checking.
    std::unordered_map<int64_t, std::vector<int>> cells;
    for (size_t i = 0; i < rec.tracks.size(); ++i) {
      const Track& t = rec.tracks[i];
      if (!t.has_frame(frame)) continue;
      const Vec2& p = t.state_at(frame).position;
      int64_t cx = static_cast<int64_t>(std::floor(p.x / radius));
      int64_t cy = static_cast<int64_t>(std::floor(p.y / radius));
      cells[(cx << 32) ^ static_cast<int64_t>(static_cast<uint32_t>(cy))]
          .push_back(static_cast<int>(i));
    }
    auto& out = gate.pairs_by_frame[fi];
    for (size_t i = 0; i < rec.tracks.size(); ++i) {
      const Track& ta = rec.tracks[i];
      if (!ta.has_frame(frame)) continue;
      const Vec2& pa = ta.state_at(frame).position;
      int64_t cx = static_cast<int64_t>(std::floor(pa.x / radius));
      int64_t cy = static_cast<int64_t>(std::floor(pa.y / radius));
      for (int64_t dx = -1; dx <= 1; ++dx) {
        for (int64_t dy = -1; dy <= 1; ++dy) {
          auto it = cells.find(((cx + dx) << 32) ^
                               static_cast<int64_t>(
                                   static_cast<uint32_t>(cy + dy)));
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if (j <= static_cast<int>(i)) continue;
            const Vec2& pb = rec.tracks[static_cast<size_t>(j)]
                                 .state_at(frame).position;
            if ((pa - pb).squared_norm() <= r2)
              out.emplace_back(static_cast<int>(i), j);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
  });
  return gate;
}

std::optional<Detection> compute_thw(const Recording& rec,
                                     const std::vector<TrackGeometry>& geoms,
                                     int subject, int partner, int frame,
                                     const AnalysisConfig& cfg) {
  const TrackState& ss =
      rec.tracks[static_cast<size_t>(subject)].state_at(frame);
  if (ss.speed <= cfg.standing_speed) return std::nullopt;
  auto gap = follow_gap(rec, geoms, subject, partner, frame, cfg);
  if (!gap) return std::nullopt;
  double thw = *gap / ss.speed;
  if (thw > cfg.prediction_horizon_s) return std::nullopt;
  Detection d;
  d.type = DetectionType::thw;
  d.subject = subject;
  d.partner = partner;
  d.frame_begin = d.frame_end = frame;
  d.value = thw;
  return d;
}

std::optional<Detection> compute_ttc(const Recording& rec,
                                     const std::vector<TrackGeometry>& geoms,
                                     int subject, int partner, int frame,
                                     const AnalysisConfig& cfg) {
  const Track& st = rec.tracks[static_cast<size_t>(subject)];
  const Track& pt = rec.tracks[static_cast<size_t>(partner)];
  const TrackState& ss = st.state_at(frame);
  const TrackState& ps = pt.state_at(frame);
  double closing = ss.speed - ps.speed;
  if (closing <= 0.0) return std::nullopt;
  auto gap = follow_gap(rec, geoms, subject, partner, frame, cfg);
  if (!gap) return std::nullopt;
  double bumper = *gap - half_length(st) - half_length(pt);
  double ttc = bumper / closing;
  if (ttc <= 0.0 || ttc > cfg.prediction_horizon_s) return std::nullopt;
  Detection d;
  d.type = DetectionType::ttc;
  d.subject = subject;
  d.partner = partner;
  d.frame_begin = d.frame_end = frame;
  d.value = ttc;
  return d;
}

std::optional<Detection> compute_drac(const Recording& rec,
                                      const std::vector<TrackGeometry>& geoms,
                                      int subject, int partner, int frame,
                                      const AnalysisConfig& cfg) {
  const Track& st = rec.tracks[static_cast<size_t>(subject)];
  const Track& pt = rec.tracks[static_cast<size_t>(partner)];
  const TrackState& ss = st.state_at(frame);
  const TrackState& ps = pt.state_at(frame);
  double closing = ss.speed - ps.speed;
  if (closing <= 0.0) return std::nullopt;
  auto gap = follow_gap(rec, geoms, subject, partner, frame, cfg);
  if (!gap) return std::nullopt;
  double dx = *gap - half_length(st) - half_length(pt);
  if (dx <= 0.0) return std::nullopt;
  double drac = closing * closing / (2.0 * dx);
  if (drac < cfg.drac_min) return std::nullopt;
  Detection d;
  d.type = DetectionType::drac;
  d.subject = subject;
  d.partner = partner;
  d.frame_begin = d.frame_end = frame;
  d.value = drac;
  return d;
}

std::optional<Detection> compute_dmttcp(const Recording& rec,
                                        const std::vector<TrackGeometry>& geoms,
                                        const ConflictPointSet& conflicts,
                                        int a, int b, int frame,
                                        const AnalysisConfig& cfg) {
  if (conflicts.cells.empty()) return std::nullopt;
  const Track& ta = rec.tracks[static_cast<size_t>(a)];
  const Track& tb = rec.tracks[static_cast<size_t>(b)];
  const TrackState& sa = ta.state_at(frame);
  const TrackState& sb = tb.state_at(frame);
  if (sa.speed < cfg.standing_speed || sb.speed < cfg.standing_speed)
    return std::nullopt;
  double beta_min = deg_to_rad(cfg.beta_min_deg());
  double s_now_a = geoms[static_cast<size_t>(a)].path.s_at_frame(
      frame, ta.first_frame());
  double s_now_b = geoms[static_cast<size_t>(b)].path.s_at_frame(
      frame, tb.first_frame());
  bool found = false;
  double best = 0.0, best_ma = 0.0, best_mb = 0.0;
  Vec2 best_ccp;
  for (const ConflictCell& c : conflicts.cells) {
    // The conflict-point search runs over shared path points: cells the
    // centerlines merely flank (footprint grazes) are no candidates.
    if (!c.on_both_paths(conflicts.cell)) continue;
    if (std::abs(angle_diff(c.heading_a, c.heading_b)) < beta_min) continue;
    double da = c.s_a - s_now_a;
    double db = c.s_b - s_now_b;
    if (da < 0.0 || db < 0.0) continue;
    double ma = da / sa.speed;
    double mb = db / sb.speed;
    if (ma > cfg.prediction_horizon_s || mb > cfg.prediction_horizon_s)
      continue;
    double delta = std::abs(ma - mb);
    if (!found || delta < best) {
      found = true;
      best = delta;
      best_ma = ma;
      best_mb = mb;
      best_ccp = c.center;
    }
  }
  if (!found) return std::nullopt;
  Detection d;
  d.type = DetectionType::dmttcp;
  d.subject = a;
  d.partner = b;
  d.frame_begin = d.frame_end = frame;
  d.value = best;
  d.mttcp_subject = best_ma;
  d.mttcp_partner = best_mb;
  d.ccp = best_ccp;
  return d;
}

std::vector<Detection> compute_wp(const Recording& rec, int track_index,
                                  const AnalysisConfig& cfg) {
  std::vector<Detection> out;
  const Track& t = rec.tracks[static_cast<size_t>(track_index)];
  const double dt = rec.dt();
  const size_t n = t.states.size();
  size_t i = 0;
  while (i < n) {
    if (t.states[i].speed >= cfg.standing_speed) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && t.states[j].speed < cfg.standing_speed) ++j;
    double duration = static_cast<double>(j - i - 1) * dt;
    if (duration >= cfg.min_standing_duration_s) {
      bool moves_on = false;
      for (size_t k = j; k < n; ++k) {
        if (t.states[k].speed > cfg.moving_speed) {
          moves_on = true;
          break;
        }
      }
      if (moves_on) {
        for (size_t k = i; k < j; ++k) {
          Detection d;
          d.type = DetectionType::wp;
          d.subject = track_index;
          d.frame_begin = d.frame_end = t.states[k].frame;
          d.value = static_cast<double>(k - i) * dt;
          out.push_back(d);
        }
      }
    }
    i = j;
  }
  return out;
}

std::vector<Detection> relation_detections(
    const Recording& rec, const std::vector<TrackGeometry>& geoms,
    const AnalysisConfig& cfg) {
  PairGate gate = candidate_pairs(rec, cfg.gating_radius);

  // Regroup gated frames per unordered pair so each pair's conflict set
  // is computed once and the pair becomes one parallel work item.
  std::unordered_map<int64_t, std::vector<int>> frames_by_pair;
  for (size_t fi = 0; fi < gate.pairs_by_frame.size(); ++fi) {
    int frame = gate.first_frame + static_cast<int>(fi);
    for (auto [a, b] : gate.pairs_by_frame[fi])
      frames_by_pair[(static_cast<int64_t>(a) << 32) | b].push_back(frame);
  }
  std::vector<std::pair<std::pair<int, int>, std::vector<int>>> pairs;
  pairs.reserve(frames_by_pair.size());
  for (auto& [key, frames] : frames_by_pair)
    pairs.push_back({{static_cast<int>(key >> 32),
                      static_cast<int>(key & 0xffffffff)},
                     std::move(frames)});
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::vector<Detection>> per_pair(pairs.size());
  parallel_for(pairs.size(), [&](size_t pi) {
    auto [a, b] = pairs[pi].first;
    auto& out = per_pair[pi];
    const TrackGeometry& ga = geoms[static_cast<size_t>(a)];
    const TrackGeometry& gb = geoms[static_cast<size_t>(b)];
    ConflictPointSet conflicts =
        conflict_points(ga.path, ga.grid, gb.path, gb.grid);
    for (int frame : pairs[pi].second) {
      for (auto [s, p] : {std::pair{a, b}, std::pair{b, a}}) {
        if (auto d = compute_thw(rec, geoms, s, p, frame, cfg))
          out.push_back(*d);
        if (auto d = compute_ttc(rec, geoms, s, p, frame, cfg))
          out.push_back(*d);
        if (auto d = compute_drac(rec, geoms, s, p, frame, cfg))
          out.push_back(*d);
      }
      if (auto d = compute_dmttcp(rec, geoms, conflicts, a, b, frame, cfg)) {
        out.push_back(*d);
        Detection m = *d;
        std::swap(m.subject, m.partner);
        std::swap(m.mttcp_subject, m.mttcp_partner);
        out.push_back(m);
      }
    }
  });

  std::vector<Detection> all;
  for (size_t i = 0; i < rec.tracks.size(); ++i) {
    auto wp = compute_wp(rec, static_cast<int>(i), cfg);
    all.insert(all.end(), wp.begin(), wp.end());
  }
  for (auto& v : per_pair) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end(), detection_order);
  return all;
}

}  // namespace trajscore
