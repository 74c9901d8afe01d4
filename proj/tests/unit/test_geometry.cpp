#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "trajscore/geometry.hpp"

using namespace trajscore;
using test_helpers::straight_track;

namespace {

// Exponential-recursion reference for the discrete Fréchet distance.
double frechet_reference(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                         size_t i, size_t j) {
  double d = (a[i] - b[j]).norm();
  if (i == 0 && j == 0) return d;
  double best = 1e300;
  if (i > 0) best = std::min(best, frechet_reference(a, b, i - 1, j));
  if (j > 0) best = std::min(best, frechet_reference(a, b, i, j - 1));
  if (i > 0 && j > 0) best = std::min(best, frechet_reference(a, b, i - 1, j - 1));
  return std::max(best, d);
}

}  // namespace

TEST_CASE("straight 10 m track resamples to 21 points") {
  Track t = straight_track(1, {0, 0}, 0.0, 10.0, 26, 25.0);
  PolyPath p = resample_path(t, 0.5);
  CHECK(p.points.size() == 21);
  CHECK(p.length() == doctest::Approx(10.0).epsilon(1e-6));
  for (size_t i = 1; i + 1 < p.points.size(); ++i)
    CHECK(p.cumulative_s[i] - p.cumulative_s[i - 1] ==
          doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("fully stationary track resamples to one point") {
  Track t = straight_track(1, {4, 7}, 0.0, 0.0, 30, 25.0);
  PolyPath p = resample_path(t, 0.5);
  REQUIRE(p.points.size() == 1);
  CHECK(p.cumulative_s[0] == 0.0);
  CHECK(p.points[0] == Vec2{4, 7});
}

TEST_CASE("quarter circle arc length within one percent") {
  Track t;
  t.track_id = 1;
  t.cls = RoadUserClass::car;
  t.width = 2.0;
  t.length = 4.5;
  for (int i = 0; i <= 200; ++i) {
    TrackState s;
    s.frame = i;
    double a = (kPi / 2.0) * i / 200.0;
    s.position = {10.0 * std::cos(a), 10.0 * std::sin(a)};
    s.heading = a + kPi / 2.0;
    s.speed = 2.0;
    t.states.push_back(s);
  }
  PolyPath p = resample_path(t, 0.5);
  CHECK(p.length() == doctest::Approx(5.0 * kPi).epsilon(0.01));
}

TEST_CASE("standstill phases collapse out of the path") {
  std::vector<Vec2> pos;
  for (int i = 0; i < 20; ++i) pos.push_back({0.4 * i, 0});
  for (int i = 0; i < 30; ++i) pos.push_back(pos.back());
  for (int i = 1; i <= 20; ++i) pos.push_back({pos[19].x + 0.4 * i, 0});
  Track t = test_helpers::make_track(1, RoadUserClass::car, pos, 25.0);
  PolyPath p = resample_path(t, 0.5);
  CHECK(p.length() == doctest::Approx(0.4 * 39).epsilon(1e-6));
  // Arc length only advances while moving: frames during the stop map to
  // the same s.
  CHECK(p.s_at_frame(25, 0) == doctest::Approx(p.s_at_frame(40, 0)));
}

TEST_CASE("projection onto a path respects the s window") {
  Track t = straight_track(1, {0, 0}, 0.0, 10.0, 26, 25.0);
  PolyPath p = resample_path(t, 0.5);
  auto proj = project_onto_path(p, {4.0, 0.8}, 0.0);
  REQUIRE(proj.has_value());
  CHECK(proj->s == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(proj->lateral == doctest::Approx(0.8).epsilon(1e-6));
  auto ahead = project_onto_path(p, {4.0, 0.8}, 6.0);
  REQUIRE(ahead.has_value());
  CHECK(ahead->s == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(ahead->lateral > 1.9);
}

TEST_CASE("perpendicular crossing produces conflict cells at the origin") {
  Track a = straight_track(1, {-20, 0}, 0.0, 10.0, 101, 25.0);
  Track b = straight_track(2, {0, -20}, kPi / 2.0, 10.0, 101, 25.0);
  PolyPath pa = resample_path(a, 0.5), pb = resample_path(b, 0.5);
  FootprintSpec fa = FootprintSpec::for_track(a);
  FootprintSpec fb = FootprintSpec::for_track(b);
  ConflictPointSet cps = conflict_points(pa, fa, pb, fb, 0.5);
  REQUIRE_FALSE(cps.cells.empty());
  double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
  for (const auto& c : cps.cells) {
    min_x = std::min(min_x, c.center.x);
    max_x = std::max(max_x, c.center.x);
    min_y = std::min(min_y, c.center.y);
    max_y = std::max(max_y, c.center.y);
  }
  // The overlap neighborhood is bounded by the two footprint dilations
  // (half length 2.25 + half width 1).
  CHECK(std::abs(min_x + max_x) < 1.0);
  CHECK(std::abs(min_y + max_y) < 1.0);
  CHECK(max_x - min_x < 7.0);
  CHECK(max_y - min_y < 7.0);
  // Cross-check against a dense brute-force rasterization: every cell
  // center must lie in both swept footprints sampled at 0.05 m.
  auto near_path = [](const PolyPath& p, const FootprintSpec& fp, Vec2 q) {
    for (size_t i = 0; i < p.points.size(); ++i) {
      Polygon poly = fp.polygon_at(p.points[i], p.heading_at_index(i));
      if (point_in_polygon(q, poly)) return true;
    }
    return false;
  };
  for (const auto& c : cps.cells) {
    CHECK(near_path(pa, fa, c.center));
    CHECK(near_path(pb, fb, c.center));
  }
}

TEST_CASE("parallel paths 10 m apart share no conflict cells") {
  Track a = straight_track(1, {0, 0}, 0.0, 10.0, 101, 25.0);
  Track b = straight_track(2, {0, 10}, 0.0, 10.0, 101, 25.0);
  PolyPath pa = resample_path(a, 0.5), pb = resample_path(b, 0.5);
  ConflictPointSet cps = conflict_points(pa, FootprintSpec::for_track(a), pb,
                                         FootprintSpec::for_track(b), 0.5);
  CHECK(cps.cells.empty());
}

TEST_CASE("identical paths share every cell with equal arc lengths") {
  Track a = straight_track(1, {0, 0}, 0.0, 10.0, 101, 25.0);
  Track b = straight_track(2, {0, 0}, 0.0, 10.0, 101, 25.0);
  PolyPath pa = resample_path(a, 0.5), pb = resample_path(b, 0.5);
  FootprintSpec fp = FootprintSpec::for_track(a);
  SweptGrid ga = swept_footprint_grid(pa, fp, 0.5);
  ConflictPointSet cps = conflict_points(pa, ga, pb, ga);
  CHECK(cps.cells.size() == ga.keys.size());
  for (const auto& c : cps.cells)
    CHECK(c.s_a == doctest::Approx(c.s_b).epsilon(1e-9));
}

TEST_CASE("conflict cell sets are symmetric in the pair order") {
  Track a = straight_track(1, {-15, -2}, 0.2, 8.0, 101, 25.0);
  Track b = straight_track(2, {-2, -15}, kPi / 2.0 - 0.3, 9.0, 101, 25.0);
  PolyPath pa = resample_path(a, 0.5), pb = resample_path(b, 0.5);
  FootprintSpec fa = FootprintSpec::for_track(a);
  FootprintSpec fb = FootprintSpec::for_track(b);
  ConflictPointSet ab = conflict_points(pa, fa, pb, fb, 0.5);
  ConflictPointSet ba = conflict_points(pb, fb, pa, fa, 0.5);
  REQUIRE(ab.cells.size() == ba.cells.size());
  auto center_key = [](const ConflictCell& c) {
    return std::make_pair(c.center.x, c.center.y);
  };
  std::vector<std::pair<double, double>> ka, kb;
  for (const auto& c : ab.cells) ka.push_back(center_key(c));
  for (const auto& c : ba.cells) kb.push_back(center_key(c));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  CHECK(ka == kb);
}

TEST_CASE("discrete Fréchet basics") {
  Track a = straight_track(1, {0, 0}, 0.0, 10.0, 26, 25.0);
  PolyPath pa = resample_path(a, 0.5);
  CHECK(discrete_frechet(pa, pa) == doctest::Approx(0.0));
  Track b = straight_track(2, {0, 3}, 0.0, 10.0, 26, 25.0);
  PolyPath pb = resample_path(b, 0.5);
  CHECK(discrete_frechet(pa, pb) == doctest::Approx(3.0));
}

TEST_CASE("discrete Fréchet equals the exponential recursion") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<size_t> len(1, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> a(len(rng)), b(len(rng));
    for (auto& p : a) p = {u(rng), u(rng)};
    for (auto& p : b) p = {u(rng), u(rng)};
    double fast = discrete_frechet(a, b);
    double ref = frechet_reference(a, b, a.size() - 1, b.size() - 1);
    CHECK(fast == doctest::Approx(ref).epsilon(1e-12));
    CHECK(fast == doctest::Approx(discrete_frechet(b, a)).epsilon(1e-12));
    // Lower bound: max over a of min distance to b.
    double lb = 0.0;
    for (const auto& p : a) {
      double m = 1e300;
      for (const auto& q : b) m = std::min(m, (p - q).norm());
      lb = std::max(lb, m);
    }
    CHECK(fast >= lb - 1e-12);
  }
}
