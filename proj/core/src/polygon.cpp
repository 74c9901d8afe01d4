#include "trajscore/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace trajscore {

double signed_area(const Polygon& poly) {
  const size_t n = poly.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    acc += a.cross(b);
  }
  return 0.5 * acc;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  // Even-odd crossing rule.
  const size_t n = poly.size();
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

void Aabb::extend(const Vec2& p) {
  min.x = std::min(min.x, p.x);
  min.y = std::min(min.y, p.y);
  max.x = std::max(max.x, p.x);
  max.y = std::max(max.y, p.y);
}

void Aabb::extend(const Aabb& o) {
  extend(o.min);
  extend(o.max);
}

bool Aabb::intersects(const Aabb& o) const {
  return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y &&
         o.min.y <= max.y;
}

Aabb polygon_bounds(const Polygon& poly) {
  Aabb b;
  for (const Vec2& p : poly) b.extend(p);
  return b;
}

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                        const Vec2& d) {
  const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const double v = (q - p).cross(r - p);
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4;
}

}  // namespace

bool polygon_is_simple(const Polygon& poly) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || j == (i + 1) % n) continue;
      const Vec2& c = poly[j];
      const Vec2& d = poly[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

Polygon clip_polygon_convex(const Polygon& subject, const Polygon& clip) {
  if (subject.size() < 3 || clip.size() < 3) return {};
  // Clip edges must be traversed with the interior on a consistent side.
  Polygon clipper = clip;
  if (signed_area(clipper) < 0.0)
    std::reverse(clipper.begin(), clipper.end());

  Polygon output = subject;
  const size_t m = clipper.size();
  for (size_t e = 0; e < m && !output.empty(); ++e) {
    const Vec2& ca = clipper[e];
    const Vec2& cb = clipper[(e + 1) % m];
    const Vec2 edge = cb - ca;

    Polygon input;
    input.swap(output);
    const size_t n = input.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2& cur = input[i];
      const Vec2& prev = input[(i + n - 1) % n];
      const double cur_side = edge.cross(cur - ca);
      const double prev_side = edge.cross(prev - ca);
      if (cur_side >= 0.0) {
        if (prev_side < 0.0) {
          const double t = prev_side / (prev_side - cur_side);
          output.push_back(prev + (cur - prev) * t);
        }
        output.push_back(cur);
      } else if (prev_side >= 0.0) {
        const double t = prev_side / (prev_side - cur_side);
        output.push_back(prev + (cur - prev) * t);
      }
    }
  }
  return output;
}

double overlap_area_convex(const Polygon& subject, const Polygon& convex_clip) {
  return polygon_area(clip_polygon_convex(subject, convex_clip));
}

Polygon oriented_rectangle(const Vec2& center, double heading, double length,
                           double width) {
  const double c = std::cos(heading), s = std::sin(heading);
  const double hl = 0.5 * length, hw = 0.5 * width;
  const auto corner = [&](double dx, double dy) {
    return Vec2{center.x + dx * c - dy * s, center.y + dx * s + dy * c};
  };
  return {corner(hl, hw), corner(-hl, hw), corner(-hl, -hw), corner(hl, -hw)};
}

Polygon regular_polygon(const Vec2& center, double radius, int sides) {
  // Vertex radius scaled so the n-gon area equals the circle area, which
  // keeps the overlap-threshold behaviour faithful to the circle model.
  const double sector = 2.0 * kPi / sides;
  const double r = radius * std::sqrt(sector / std::sin(sector));
  Polygon poly;
  poly.reserve(static_cast<size_t>(sides));
  for (int i = 0; i < sides; ++i) {
    const double a = sector * i;
    poly.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
  }
  return poly;
}

}  // namespace trajscore
