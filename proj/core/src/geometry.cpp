#include "trajscore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace trajscore {
namespace {

constexpr double kStandstillMovement = 0.05;  // m

int64_t cell_key(int cx, int cy) {
  return (static_cast<int64_t>(cx) << 32) ^
         (static_cast<int64_t>(static_cast<uint32_t>(cy)));
}

}  // namespace

double PolyPath::heading_at_index(size_t i) const {
  const size_t n = points.size();
  if (n < 2) return fallback_heading;
  const size_t a = i + 1 < n ? i : n - 2;
  const Vec2 d = points[a + 1] - points[a];
  return std::atan2(d.y, d.x);
}

Vec2 PolyPath::position_at(double s) const {
  if (points.empty()) return {};
  if (s <= 0.0) return points.front();
  if (s >= cumulative_s.back()) return points.back();
  const auto it =
      std::upper_bound(cumulative_s.begin(), cumulative_s.end(), s);
  const size_t i = static_cast<size_t>(it - cumulative_s.begin()) - 1;
  const double seg = cumulative_s[i + 1] - cumulative_s[i];
  const double t = seg > 0.0 ? (s - cumulative_s[i]) / seg : 0.0;
  return points[i] + (points[i + 1] - points[i]) * t;
}

double PolyPath::heading_at(double s) const {
  if (points.size() < 2) return fallback_heading;
  const auto it =
      std::lower_bound(cumulative_s.begin() + 1, cumulative_s.end(), s);
  size_t i = static_cast<size_t>(it - cumulative_s.begin());
  i = std::min(i, points.size() - 1);
  return heading_at_index(i - 1);
}

double PolyPath::s_at_frame(int frame, int first_frame) const {
  const int idx = frame - first_frame;
  if (idx < 0) return 0.0;
  if (static_cast<size_t>(idx) >= state_s.size())
    return state_s.empty() ? 0.0 : state_s.back();
  return state_s[static_cast<size_t>(idx)];
}

std::optional<PathProjection> project_onto_path(const PolyPath& path,
                                                const Vec2& p, double s_min,
                                                double s_max) {
  if (path.empty()) return std::nullopt;
  if (path.points.size() == 1) {
    if (s_min > 0.0) return std::nullopt;
    return PathProjection{0.0, (p - path.points[0]).norm()};
  }
  if (s_min > path.length()) return std::nullopt;

  std::optional<PathProjection> best;
  for (size_t i = 0; i + 1 < path.points.size(); ++i) {
    const double s0 = path.cumulative_s[i];
    const double s1 = path.cumulative_s[i + 1];
    if (s1 < s_min || s0 > s_max) continue;
    const Vec2& a = path.points[i];
    const Vec2 ab = path.points[i + 1] - a;
    const double len2 = ab.squared_norm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    const double seg = s1 - s0;
    double t_lo = 0.0, t_hi = 1.0;
    if (seg > 0.0) {
      t_lo = std::max(0.0, (s_min - s0) / seg);
      t_hi = std::min(1.0, (s_max - s0) / seg);
    }
    t = std::clamp(t, t_lo, t_hi);
    const Vec2 q = a + ab * t;
    const double lateral = (p - q).norm();
    if (!best || lateral < best->lateral)
      best = PathProjection{s0 + t * seg, lateral};
  }
  return best;
}

PolyPath resample_path(const Track& track, double ds) {
  PolyPath path;
  path.ds = ds;
  const auto& st = track.states;
  if (st.empty()) return path;
  path.fallback_heading = st.front().heading;

  // Collapse standstill: keep a vertex only once the user moved >= 5 cm.
  std::vector<Vec2> kept{st.front().position};
  std::vector<double> kept_frame{static_cast<double>(st.front().frame)};
  std::vector<double> kept_s{0.0};
  path.state_s.assign(st.size(), 0.0);
  double total = 0.0;
  for (size_t i = 1; i < st.size(); ++i) {
    const double step = (st[i].position - kept.back()).norm();
    if (step >= kStandstillMovement) {
      total += step;
      kept.push_back(st[i].position);
      kept_frame.push_back(static_cast<double>(st[i].frame));
      kept_s.push_back(total);
    }
    path.state_s[i] = total;
  }

  if (kept.size() == 1) {
    path.points = {kept[0]};
    path.cumulative_s = {0.0};
    path.source_frame = {kept_frame[0]};
    return path;
  }

  // Uniform arc-length samples; the final segment may be shorter.
  size_t seg = 0;
  for (double s = 0.0; s < total; s += ds) {
    while (seg + 1 < kept_s.size() && kept_s[seg + 1] < s) ++seg;
    const double seg_len = kept_s[seg + 1] - kept_s[seg];
    const double t = seg_len > 0.0 ? (s - kept_s[seg]) / seg_len : 0.0;
    path.points.push_back(kept[seg] + (kept[seg + 1] - kept[seg]) * t);
    path.cumulative_s.push_back(s);
    path.source_frame.push_back(kept_frame[seg] +
                                (kept_frame[seg + 1] - kept_frame[seg]) * t);
  }
  path.points.push_back(kept.back());
  path.cumulative_s.push_back(total);
  path.source_frame.push_back(kept_frame.back());
  return path;
}

FootprintSpec FootprintSpec::for_track(const Track& t) {
  FootprintSpec fp;
  if (is_vru(t.cls)) {
    fp.is_circle = true;
    fp.radius = t.footprint_radius();
  } else {
    fp.length = t.length;
    fp.width = t.width;
  }
  return fp;
}

Polygon FootprintSpec::polygon_at(const Vec2& position, double heading) const {
  if (is_circle) return regular_polygon(position, radius, 16);
  return oriented_rectangle(position, heading, length, width);
}

SweptGrid swept_footprint_grid(const PolyPath& path, const FootprintSpec& fp,
                               double cell) {
  SweptGrid grid;
  grid.cell = cell;
  std::unordered_set<int64_t> cells;
  for (size_t i = 0; i < path.points.size(); ++i) {
    const Polygon poly = fp.polygon_at(path.points[i], path.heading_at_index(i));
    const Aabb b = polygon_bounds(poly);
    const int cx0 = static_cast<int>(std::floor(b.min.x / cell));
    const int cx1 = static_cast<int>(std::floor(b.max.x / cell));
    const int cy0 = static_cast<int>(std::floor(b.min.y / cell));
    const int cy1 = static_cast<int>(std::floor(b.max.y / cell));
    for (int cx = cx0; cx <= cx1; ++cx) {
      for (int cy = cy0; cy <= cy1; ++cy) {
        const Vec2 center{(cx + 0.5) * cell, (cy + 0.5) * cell};
        if (point_in_polygon(center, poly)) cells.insert(cell_key(cx, cy));
      }
    }
  }
  grid.keys.assign(cells.begin(), cells.end());
  std::sort(grid.keys.begin(), grid.keys.end());
  return grid;
}

ConflictPointSet conflict_points(const PolyPath& path_a, const SweptGrid& grid_a,
                                 const PolyPath& path_b,
                                 const SweptGrid& grid_b) {
  ConflictPointSet set;
  set.cell = grid_a.cell;
  std::vector<int64_t> shared;
  std::set_intersection(grid_a.keys.begin(), grid_a.keys.end(),
                        grid_b.keys.begin(), grid_b.keys.end(),
                        std::back_inserter(shared));
  set.cells.reserve(shared.size());
  for (int64_t key : shared) {
    const int cx = static_cast<int>(key >> 32);
    const int cy = static_cast<int>(static_cast<uint32_t>(key & 0xffffffff));
    ConflictCell c;
    c.center = {(cx + 0.5) * set.cell, (cy + 0.5) * set.cell};
    const auto pa = project_onto_path(path_a, c.center, 0.0);
    const auto pb = project_onto_path(path_b, c.center, 0.0);
    if (!pa || !pb) continue;
    c.s_a = pa->s;
    c.s_b = pb->s;
    c.lat_a = pa->lateral;
    c.lat_b = pb->lateral;
    c.heading_a = path_a.heading_at(pa->s);
    c.heading_b = path_b.heading_at(pb->s);
    set.cells.push_back(c);
  }
  return set;
}

ConflictPointSet conflict_points(const PolyPath& path_a,
                                 const FootprintSpec& fp_a,
                                 const PolyPath& path_b,
                                 const FootprintSpec& fp_b, double cell) {
  return conflict_points(path_a, swept_footprint_grid(path_a, fp_a, cell),
                         path_b, swept_footprint_grid(path_b, fp_b, cell));
}

double discrete_frechet(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  const size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) return 0.0;
  std::vector<double> prev(m), cur(m);
  for (size_t j = 0; j < m; ++j) {
    const double d = (a[0] - b[j]).norm();
    prev[j] = j == 0 ? d : std::max(prev[j - 1], d);
  }
  for (size_t i = 1; i < n; ++i) {
    cur[0] = std::max(prev[0], (a[i] - b[0]).norm());
    for (size_t j = 1; j < m; ++j) {
      const double reach = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(reach, (a[i] - b[j]).norm());
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double discrete_frechet(const PolyPath& a, const PolyPath& b) {
  return discrete_frechet(a.points, b.points);
}

}  // namespace trajscore
