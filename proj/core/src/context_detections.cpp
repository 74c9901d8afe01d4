#include "trajscore/context_detections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <unordered_map>

#include "trajscore/clustering.hpp"
#include "trajscore/parallel.hpp"

namespace trajscore {

double behavior_distance(const BehaviorPoint& a, const BehaviorPoint& b) {
  double dpsi = angle_diff(a.psi, b.psi);
  double dv = (a.v - b.v) / std::max(std::max(a.v, b.v), 1.5);
  return std::sqrt(dpsi * dpsi + dv * dv);
}

RegionAssignments assign_all_regions(const Recording& rec,
                                     const SemanticMap& map) {
  RegionAssignments out(rec.tracks.size());
  parallel_for(rec.tracks.size(), [&](size_t ti) {
    const Track& t = rec.tracks[ti];
    out[ti].resize(t.states.size());
    for (size_t i = 0; i < t.states.size(); ++i) {
      Polygon fp = footprint_at(t, t.states[i].position, t.states[i].heading);
      out[ti][i] = assign_regions(fp, map);
    }
  });
  return out;
}

std::optional<Detection> check_area_usage(
    const TrackState& state, const std::vector<AssignmentEntry>& assignment,
    RoadUserClass cls, int track_index, const SemanticMap& map) {
  for (const AssignmentEntry& e : assignment) {
    if (class_allowed_in(cls, map.regions[static_cast<size_t>(e.region)].type))
      return std::nullopt;
  }
  Detection d;
  d.type = DetectionType::area_usage;
  d.subject = track_index;
  d.frame_begin = d.frame_end = state.frame;
  for (const AssignmentEntry& e : assignment)
    d.regions.push_back({e.region, e.fraction});
  return d;
}

std::optional<Detection> check_driving_direction(
    const TrackState& state, const std::vector<AssignmentEntry>& assignment,
    RoadUserClass cls, int track_index, const SemanticMap& map,
    const AnalysisConfig& cfg) {
  if (is_vru(cls)) return std::nullopt;
  if (state.speed <= cfg.moving_speed) return std::nullopt;
  bool any_directed = false;
  std::vector<RegionShare> shares;
  for (const AssignmentEntry& e : assignment) {
    const Region& r = map.regions[static_cast<size_t>(e.region)];
    if (r.type != RegionType::street || !r.has_direction()) continue;
    any_directed = true;
    shares.push_back({e.region, e.fraction});
    double dir = r.direction_at(state.position);
    if (std::abs(angle_diff(state.heading, dir)) <= 0.5 * kPi)
      return std::nullopt;
  }
  if (!any_directed) return std::nullopt;
  Detection d;
  d.type = DetectionType::driving_direction;
  d.subject = track_index;
  d.frame_begin = d.frame_end = state.frame;
  d.regions = std::move(shares);
  return d;
}

namespace {

// Accelerator grid for the behavior distance: bins of width eps in the
// orientation and -log(1-eps) in log-speed, each wide enough that every
// eps-neighbor sits in the 3x3 surrounding bins.
class BehaviorGrid {
 public:
  BehaviorGrid(const std::vector<BehaviorPoint>& pts, double eps)
      : pts_(pts), eps_(eps) {
    if (eps >= 1.0) return;
    n_psi_ = std::max<int64_t>(
        1, static_cast<int64_t>(std::floor(2.0 * kPi / eps)));
    du_ = -std::log(1.0 - eps);
    for (size_t i = 0; i < pts.size(); ++i)
      bins_[key(psi_bin(pts[i].psi), u_bin(pts[i].v))].push_back(i);
    usable_ = n_psi_ > 3;
  }

  bool usable() const { return usable_; }

  void candidates(size_t i, std::vector<size_t>& out) const {
    int64_t pb = psi_bin(pts_[i].psi);
    int64_t ub = u_bin(pts_[i].v);
    for (int64_t dp = -1; dp <= 1; ++dp) {
      int64_t p = (pb + dp + n_psi_) % n_psi_;
      for (int64_t du = -1; du <= 1; ++du) {
        auto it = bins_.find(key(p, ub + du));
        if (it == bins_.end()) continue;
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
  }

 private:
  int64_t psi_bin(double psi) const {
    auto b = static_cast<int64_t>(std::floor((psi + kPi) / eps_));
    return std::clamp<int64_t>(b, 0, n_psi_ - 1);
  }
  int64_t u_bin(double v) const {
    return static_cast<int64_t>(
        std::floor(std::log(std::max(v, 1.5)) / du_));
  }
  static int64_t key(int64_t a, int64_t b) {
    return (a << 32) ^ static_cast<int64_t>(static_cast<uint32_t>(b));
  }

  const std::vector<BehaviorPoint>& pts_;
  double eps_;
  int64_t n_psi_ = 1;
  double du_ = 1.0;
  bool usable_ = false;
  std::unordered_map<int64_t, std::vector<size_t>> bins_;
};

int largest_cluster(const ClusterResult& r) {
  int best = -1;
  size_t best_size = 0;
  for (size_t c = 0; c < r.cluster_sizes.size(); ++c) {
    if (r.cluster_sizes[c] > best_size) {
      best_size = r.cluster_sizes[c];
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

std::vector<Detection> behavior_clustering(
    const std::vector<BehaviorPoint>& points, int region,
    const AnalysisConfig& cfg) {
  std::vector<Detection> out;
  const size_t n = points.size();
  if (n < 2) return out;
  auto min_samples = static_cast<size_t>(std::max<long>(
      2, std::lround(2.0 + 0.01 * static_cast<double>(n))));
  DistanceFn dist = [&](size_t i, size_t j) {
    return behavior_distance(points[i], points[j]);
  };
  BehaviorGrid grid(points, cfg.behavior_eps);
  CandidateFn cand;
  if (grid.usable())
    cand = [&grid](size_t i, std::vector<size_t>& c) {
      grid.candidates(i, c);
    };
  ClusterResult r = dbscan(n, dist, cfg.behavior_eps, min_samples, cand);

  int big = largest_cluster(r);
  for (size_t i = 0; i < n; ++i) {
    bool flagged =
        r.labels[i] == kNoise ||
        r.cluster_sizes[static_cast<size_t>(r.labels[i])] * 10 < n;
    if (!flagged) continue;
    double value = cfg.behavior_eps;
    if (big >= 0) {
      value = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < n; ++j)
        if (r.labels[j] == big) value = std::min(value, dist(i, j));
    }
    Detection d;
    d.type = DetectionType::driving_behavior;
    d.subject = points[i].track;
    d.frame_begin = d.frame_end = points[i].frame;
    d.value = value;
    d.regions.push_back({region, 1.0});
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> trajectory_clustering(
    const std::vector<TrajectorySegment>& segments, int region,
    const AnalysisConfig&) {
  std::vector<Detection> out;
  const size_t n = segments.size();
  if (n < 2) return out;
  auto mcs = static_cast<size_t>(std::max<long>(
      2, std::lround(1.0 + 0.005 * static_cast<double>(n))));

  std::vector<std::vector<double>> dmat(n, std::vector<double>(n, 0.0));
  parallel_for(n, [&](size_t i) {
    for (size_t j = i + 1; j < n; ++j)
      dmat[i][j] = discrete_frechet(segments[i].points, segments[j].points);
  });
  auto dist = [&](size_t i, size_t j) {
    return i < j ? dmat[i][j] : dmat[j][i];
  };
  ClusterResult r = hdbscan_cluster(n, dist, mcs);

  for (size_t i = 0; i < n; ++i) {
    if (r.labels[i] != kNoise) continue;
    double value = r.outlier_distance[i];
    if (!std::isfinite(value)) {
      // No cluster survived anywhere: rate against the nearest segment.
      value = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < n; ++j)
        if (j != i) value = std::min(value, dist(i, j));
    }
    Detection d;
    d.type = DetectionType::trajectory;
    d.subject = segments[i].track;
    d.frame_begin = segments[i].frame_begin;
    d.frame_end = segments[i].frame_end;
    d.value = value;
    d.regions.push_back({region, 1.0});
    out.push_back(d);
  }
  return out;
}

namespace {

std::vector<TrajectorySegment> slice_segment(const Track& t,
                                             const PolyPath& path,
                                             int region,
                                             const std::vector<std::vector<AssignmentEntry>>& assignment) {
  std::vector<TrajectorySegment> segments;
  size_t i = 0;
  const size_t n = t.states.size();
  auto in_region = [&](size_t idx) {
    for (const AssignmentEntry& e : assignment[idx])
      if (e.region == region) return true;
    return false;
  };
  while (i < n) {
    if (!in_region(i)) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n && in_region(j + 1)) ++j;
    TrajectorySegment seg;
    seg.track = t.track_id;  // remapped to index by the caller
    seg.frame_begin = t.states[i].frame;
    seg.frame_end = t.states[j].frame;
    double s0 = path.state_s[i];
    double s1 = path.state_s[j];
    seg.points.push_back(path.position_at(s0));
    for (size_t k = 0; k < path.points.size(); ++k) {
      double s = path.cumulative_s[k];
      if (s > s0 && s < s1) seg.points.push_back(path.points[k]);
    }
    if (s1 > s0) seg.points.push_back(path.position_at(s1));
    segments.push_back(std::move(seg));
    i = j + 1;
  }
  return segments;
}

}  // namespace

std::vector<Detection> context_detections(const Recording& rec,
                                          const SemanticMap& map,
                                          const RegionAssignments& assignments,
                                          const std::vector<TrackGeometry>& geoms,
                                          const AnalysisConfig& cfg) {
  std::vector<Detection> all;

  for (size_t ti = 0; ti < rec.tracks.size(); ++ti) {
    const Track& t = rec.tracks[ti];
    for (size_t i = 0; i < t.states.size(); ++i) {
      const TrackState& st = t.states[i];
      const auto& asg = assignments[ti][i];
      if (auto d = check_area_usage(st, asg, t.cls, static_cast<int>(ti), map))
        all.push_back(*d);
      if (auto d = check_driving_direction(st, asg, t.cls,
                                           static_cast<int>(ti), map, cfg))
        all.push_back(*d);
    }
  }

  const size_t n_regions = map.regions.size();
  std::vector<std::vector<BehaviorPoint>> points(n_regions);
  std::vector<std::vector<TrajectorySegment>> segments(n_regions);
  for (size_t ti = 0; ti < rec.tracks.size(); ++ti) {
    const Track& t = rec.tracks[ti];
    for (size_t i = 0; i < t.states.size(); ++i) {
      for (const AssignmentEntry& e : assignments[ti][i]) {
        points[static_cast<size_t>(e.region)].push_back(
            {t.states[i].heading, t.states[i].speed, static_cast<int>(ti),
             t.states[i].frame});
      }
    }
    for (size_t r = 0; r < n_regions; ++r) {
      auto segs = slice_segment(t, geoms[ti].path, static_cast<int>(r),
                                assignments[ti]);
      for (auto& s : segs) {
        s.track = static_cast<int>(ti);
        segments[r].push_back(std::move(s));
      }
    }
  }

  std::vector<std::vector<Detection>> per_region(n_regions);
  parallel_for(n_regions, [&](size_t r) {
    auto& out = per_region[r];
    auto b = behavior_clustering(points[r], static_cast<int>(r), cfg);
    out.insert(out.end(), b.begin(), b.end());
    auto tr = trajectory_clustering(segments[r], static_cast<int>(r), cfg);
    out.insert(out.end(), tr.begin(), tr.end());
  });
  for (auto& v : per_region) all.insert(all.end(), v.begin(), v.end());

  std::sort(all.begin(), all.end(), detection_order);
  return all;
}

}  // namespace trajscore
