#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace trajscore {

inline constexpr int kNoise = -1;

/// Pairwise distance between items i and j. Must be symmetric and
/// non-negative.
using DistanceFn = std::function<double(size_t, size_t)>;

/// Optional accelerator for dbscan: fills `out` with a superset of the
/// indices within eps of item i (including i itself).
using CandidateFn = std::function<void(size_t, std::vector<size_t>&)>;

struct ClusterResult {
  std::vector<int> labels;  // cluster id (dense from 0) or kNoise
  std::vector<size_t> cluster_sizes;
  /// For NOISE items: distance to the nearest member of any retained
  /// cluster, +inf when no cluster exists. Zero for clustered items.
  std::vector<double> outlier_distance;

  size_t cluster_count() const { return cluster_sizes.size(); }
};

/// Classic density-reachability DBSCAN. min_samples counts the point
/// itself; expansion runs in index order, so results are deterministic
/// for a given input order.
ClusterResult dbscan(size_t n, const DistanceFn& distance, double eps,
                     size_t min_samples, const CandidateFn& candidates = {});

/// Hierarchical density clustering: mutual-reachability graph, minimum
/// spanning tree, condensed cluster hierarchy and excess-of-mass cluster
/// selection. min_cluster_size below 2 is clamped to 2.
ClusterResult hdbscan_cluster(size_t n, const DistanceFn& distance,
                              size_t min_cluster_size);

}  // namespace trajscore
