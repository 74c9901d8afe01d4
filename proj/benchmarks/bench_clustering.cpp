#include <benchmark/benchmark.h>

#include <random>

#include "trajscore/clustering.hpp"
#include "trajscore/context_detections.hpp"

using namespace trajscore;

namespace {

std::vector<BehaviorPoint> make_points(size_t n) {
  std::mt19937 rng(11);
  std::normal_distribution<double> dpsi(0.0, 0.05);
  std::normal_distribution<double> dv(0.0, 0.5);
  std::vector<BehaviorPoint> pts;
  for (size_t i = 0; i < n; ++i) {
    BehaviorPoint p;
    p.psi = (i % 2 == 0 ? 0.3 : -2.8) + dpsi(rng);
    p.v = 9.0 + dv(rng);
    p.track = static_cast<int>(i);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

static void BM_Dbscan(benchmark::State& state) {
  auto pts = make_points(static_cast<size_t>(state.range(0)));
  DistanceFn dist = [&](size_t i, size_t j) {
    return behavior_distance(pts[i], pts[j]);
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(dbscan(pts.size(), dist, 0.7, 4));
}
BENCHMARK(BM_Dbscan)->Arg(200)->Arg(2000);

static void BM_BehaviorClustering(benchmark::State& state) {
  AnalysisConfig cfg;
  auto pts = make_points(static_cast<size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(behavior_clustering(pts, 0, cfg));
}
BENCHMARK(BM_BehaviorClustering)->Arg(200)->Arg(2000)->Arg(20000);

static void BM_Hdbscan(benchmark::State& state) {
  auto pts = make_points(static_cast<size_t>(state.range(0)));
  DistanceFn dist = [&](size_t i, size_t j) {
    return behavior_distance(pts[i], pts[j]);
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(hdbscan_cluster(pts.size(), dist, 3));
}
BENCHMARK(BM_Hdbscan)->Arg(200)->Arg(1000);
