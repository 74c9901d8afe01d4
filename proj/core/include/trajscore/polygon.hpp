#pragma once

#include <vector>

#include "trajscore/math.hpp"

namespace trajscore {

/// Closed simple ring, implicit edge from back() to front().
using Polygon = std::vector<Vec2>;

/// Signed area (positive for counter-clockwise rings).
double signed_area(const Polygon& poly);
double polygon_area(const Polygon& poly);

bool point_in_polygon(const Vec2& p, const Polygon& poly);

bool polygon_is_simple(const Polygon& poly);

/// Axis-aligned bounds as {min, max}.
struct Aabb {
  Vec2 min{1e30, 1e30};
  Vec2 max{-1e30, -1e30};
  void extend(const Vec2& p);
  void extend(const Aabb& o);
  bool intersects(const Aabb& o) const;
};
Aabb polygon_bounds(const Polygon& poly);

/// Clips `subject` (any simple polygon) against a convex `clip` polygon
/// (Sutherland-Hodgman). The returned ring may carry zero-width bridge
/// edges for non-convex subjects; its area is still exact.
Polygon clip_polygon_convex(const Polygon& subject, const Polygon& clip);

/// Area of the intersection of a simple polygon with a convex one.
double overlap_area_convex(const Polygon& subject, const Polygon& convex_clip);

/// Oriented rectangle length x width centered at `center`, long axis
/// rotated by `heading`.
Polygon oriented_rectangle(const Vec2& center, double heading, double length,
                           double width);

/// Regular n-gon approximating a circle.
Polygon regular_polygon(const Vec2& center, double radius, int sides = 16);

}  // namespace trajscore
