#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "trajscore/geometry.hpp"
#include "trajscore/polygon.hpp"

using namespace trajscore;

namespace {

Track make_track(double phase, size_t frames) {
  Track t;
  t.cls = RoadUserClass::car;
  t.length = 4.5;
  t.width = 2.0;
  for (size_t i = 0; i < frames; ++i) {
    TrackState s;
    s.frame = static_cast<int>(i);
    s.t = 0.04 * static_cast<double>(i);
    double a = phase + 0.002 * static_cast<double>(i);
    s.position = {120.0 * std::cos(a), 80.0 * std::sin(a)};
    s.heading = a + kPi / 2.0;
    s.speed = 10.0;
    s.velocity = {10.0 * std::cos(s.heading), 10.0 * std::sin(s.heading)};
    t.states.push_back(s);
  }
  return t;
}

}  // namespace

static void BM_ResamplePath(benchmark::State& state) {
  Track t = make_track(0.0, static_cast<size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(resample_path(t, 0.5));
}
BENCHMARK(BM_ResamplePath)->Arg(500)->Arg(5000);

static void BM_SweptGrid(benchmark::State& state) {
  Track t = make_track(0.0, static_cast<size_t>(state.range(0)));
  PolyPath path = resample_path(t, 0.5);
  FootprintSpec fp = FootprintSpec::for_track(t);
  for (auto _ : state)
    benchmark::DoNotOptimize(swept_footprint_grid(path, fp, 0.5));
}
BENCHMARK(BM_SweptGrid)->Arg(500)->Arg(5000);

static void BM_ConflictPoints(benchmark::State& state) {
  Track a = make_track(0.0, static_cast<size_t>(state.range(0)));
  Track b = make_track(0.05, static_cast<size_t>(state.range(0)));
  PolyPath pa = resample_path(a, 0.5), pb = resample_path(b, 0.5);
  FootprintSpec fa = FootprintSpec::for_track(a), fb = FootprintSpec::for_track(b);
  SweptGrid ga = swept_footprint_grid(pa, fa, 0.5);
  SweptGrid gb = swept_footprint_grid(pb, fb, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(conflict_points(pa, ga, pb, gb));
}
BENCHMARK(BM_ConflictPoints)->Arg(500)->Arg(5000);

static void BM_DiscreteFrechet(benchmark::State& state) {
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<Vec2> a, b;
  for (int i = 0; i < state.range(0); ++i) {
    double x = 0.5 * i;
    a.push_back({x, noise(rng)});
    b.push_back({x, 3.0 + noise(rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(discrete_frechet(a, b));
}
BENCHMARK(BM_DiscreteFrechet)->Arg(100)->Arg(400);

static void BM_PolygonClip(benchmark::State& state) {
  Polygon rect = oriented_rectangle({3.0, 2.0}, 0.4, 4.5, 2.0);
  Polygon region = regular_polygon({0.0, 0.0}, 6.0, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(overlap_area_convex(rect, region));
}
BENCHMARK(BM_PolygonClip);
