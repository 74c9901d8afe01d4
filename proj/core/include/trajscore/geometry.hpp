#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trajscore/polygon.hpp"
#include "trajscore/types.hpp"

namespace trajscore {

/// Driven path resampled to uniform arc-length spacing. Standstill phases
/// (movement below 5 cm) are collapsed, so arc length only advances while
/// the road user actually moves.
struct PolyPath {
  std::vector<Vec2> points;
  std::vector<double> cumulative_s;
  std::vector<double> source_frame;  // fractional frame per point
  std::vector<double> state_s;       // arc length per original state index
  double ds = 0.5;
  double fallback_heading = 0.0;    // tangent stand-in for 1-point paths

  bool empty() const { return points.empty(); }
  double length() const { return empty() ? 0.0 : cumulative_s.back(); }
  /// Tangent heading of the segment containing point index i.
  double heading_at_index(size_t i) const;
  /// Interpolated position at arc length s (clamped to the path).
  Vec2 position_at(double s) const;
  double heading_at(double s) const;
  /// Arc length reached at a given frame of the source track.
  double s_at_frame(int frame, int first_frame) const;
};

struct PathProjection {
  double s = 0.0;        // arc length of the nearest path point
  double lateral = 0.0;  // distance from the path
};

/// Nearest-point projection onto the path, restricted to s >= s_min and
/// (optionally) s <= s_max.
std::optional<PathProjection> project_onto_path(const PolyPath& path,
                                                const Vec2& p, double s_min,
                                                double s_max = 1e300);

PolyPath resample_path(const Track& track, double ds = 0.5);

/// Physical outline swept along a path.
struct FootprintSpec {
  bool is_circle = false;
  double length = 0.0;
  double width = 0.0;
  double radius = kVruFootprintRadius;

  static FootprintSpec for_track(const Track& t);
  Polygon polygon_at(const Vec2& position, double heading) const;
};

/// Occupancy grid of the footprint swept along the whole path, as sorted
/// cell keys. Reusable across all pairings of the same track.
struct SweptGrid {
  double cell = 0.5;
  std::vector<int64_t> keys;  // sorted
};

SweptGrid swept_footprint_grid(const PolyPath& path, const FootprintSpec& fp,
                               double cell = 0.5);

struct ConflictCell {
  Vec2 center;
  double s_a = 0.0, s_b = 0.0;            // arc length per user at the cell
  double lat_a = 0.0, lat_b = 0.0;        // centerline offset per user
  double heading_a = 0.0, heading_b = 0.0;  // path tangent per user

  /// A cell both path centerlines run through (within half a cell
  /// diagonal), i.e. a genuinely shared path point rather than a mere
  /// footprint graze.
  bool on_both_paths(double cell) const {
    const double tol = cell * kSqrt1_2;
    return lat_a <= tol && lat_b <= tol;
  }
};

/// Cells shared by both swept footprints: the conflict-point set of the
/// pair. Empty when the dilated paths never meet.
struct ConflictPointSet {
  double cell = 0.5;
  std::vector<ConflictCell> cells;
};

ConflictPointSet conflict_points(const PolyPath& path_a,
                                 const FootprintSpec& fp_a,
                                 const PolyPath& path_b,
                                 const FootprintSpec& fp_b, double cell = 0.5);

/// Variant reusing precomputed swept grids.
ConflictPointSet conflict_points(const PolyPath& path_a, const SweptGrid& grid_a,
                                 const PolyPath& path_b,
                                 const SweptGrid& grid_b);

/// Discrete Fréchet distance between two point sequences (dynamic
/// programming over the coupling lattice).
double discrete_frechet(const PolyPath& a, const PolyPath& b);
double discrete_frechet(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

}  // namespace trajscore
